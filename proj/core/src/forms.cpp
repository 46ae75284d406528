#include "nchodge/forms.hpp"

#include <limits>

#include "nchodge/error.hpp"
#include "nchodge/parallel.hpp"

namespace nchodge {

namespace {

template <class S>
S signed_one(std::size_t exponent) {
    return from_int<S>(exponent % 2 == 0 ? 1 : -1);
}

}  // namespace

template <class S>
FormsWindow<S>::FormsWindow(Algebra<S> algebra, std::size_t n_max, std::size_t cap)
    : algebra_(std::move(algebra)), n_max_(n_max), reduced_(algebra_.dim() - 1), cache_(std::make_shared<Cache>()) {
    const std::size_t a = algebra_.dim();
    std::size_t dim = a;
    for (std::size_t n = 0; n <= n_max_; ++n) {
        if (n > 0) {
            if (reduced_ != 0 && dim > std::numeric_limits<std::size_t>::max() / reduced_) {
                throw Error("forms", "WindowTooLarge", "degree dimension overflows at degree " + std::to_string(n));
            }
            dim *= reduced_;
        }
        dims_.push_back(dim);
    }
    if (dims_.back() > cap) {
        throw Error("forms", "WindowTooLarge",
                    "dim Omega^" + std::to_string(n_max_) + " = " + std::to_string(dims_.back()) +
                        " exceeds the cap " + std::to_string(cap));
    }
    cache_->d.resize(n_max_ + 1);
    cache_->b.resize(n_max_ + 1);
    cache_->k.resize(n_max_ + 1);
}

template <class S>
void FormsWindow<S>::check_degree(std::size_t n, const char* what) const {
    if (n > n_max_) {
        throw Error("forms", "DegreeOutOfWindow",
                    std::string(what) + ": degree " + std::to_string(n) + " outside window 0.." + std::to_string(n_max_));
    }
}

template <class S>
std::vector<std::size_t> FormsWindow<S>::basis_tuple(std::size_t degree, std::size_t index) const {
    check_degree(degree, "basis_tuple");
    if (index >= dims_[degree]) throw Error("forms", "IndexOutOfRange", "basis index out of range");
    std::vector<std::size_t> t(degree + 1);
    for (std::size_t s = degree; s >= 1; --s) {
        t[s] = index % reduced_;
        index /= reduced_;
    }
    t[0] = index;
    return t;
}

template <class S>
std::size_t FormsWindow<S>::basis_index(const std::vector<std::size_t>& tuple) const {
    if (tuple.empty()) throw Error("forms", "IndexOutOfRange", "empty basis tuple");
    std::size_t idx = tuple[0];
    for (std::size_t s = 1; s < tuple.size(); ++s) idx = idx * reduced_ + tuple[s];
    return idx;
}

template <class S>
std::string FormsWindow<S>::basis_label(std::size_t degree, std::size_t index) const {
    const auto t = basis_tuple(degree, index);
    const auto& labels = algebra_.basis_labels();
    std::string out;
    if (t[0] != 0 || degree == 0) out = labels[t[0]];
    for (std::size_t s = 1; s < t.size(); ++s) {
        if (!out.empty()) out += ' ';
        out += 'd' + labels[t[s] + 1];
    }
    return out;
}

template <class S>
Form<S> FormsWindow<S>::basis_form(std::size_t degree, std::size_t index) const {
    check_degree(degree, "basis_form");
    Form<S> f;
    auto& c = f.components[degree];
    c.assign(dims_[degree], from_int<S>(0));
    c.at(index) = from_int<S>(1);
    return f;
}

template <class S>
Form<S> FormsWindow<S>::from_algebra(const AlgebraElement<S>& a) const {
    if (a.coeffs.size() != algebra_.dim()) throw Error("forms", "ShapeMismatch", "algebra element has wrong length");
    Form<S> f;
    f.components[0] = a.coeffs;
    return f;
}

template <class S>
typename FormsWindow<S>::Sparse FormsWindow<S>::algebra_basis(std::size_t i) const {
    return Sparse{{i, from_int<S>(1)}};
}

template <class S>
typename FormsWindow<S>::Sparse FormsWindow<S>::product(const Sparse& x, const Sparse& y) const {
    std::vector<S> acc(algebra_.dim(), from_int<S>(0));
    for (const auto& [i, xi] : x)
        for (const auto& [j, yj] : y) {
            const auto& row = algebra_.basis_product(i, j);
            const S c = xi * yj;
            for (std::size_t k = 0; k < row.size(); ++k)
                if (!is_zero(row[k])) acc[k] += c * row[k];
        }
    Sparse out;
    for (std::size_t k = 0; k < acc.size(); ++k)
        if (!is_zero(acc[k])) out.emplace_back(k, acc[k]);
    return out;
}

template <class S>
typename FormsWindow<S>::Sparse FormsWindow<S>::reduced(const Sparse& x) const {
    Sparse out;
    for (const auto& [i, v] : x)
        if (i != 0) out.emplace_back(i - 1, v);
    return out;
}

template <class S>
void FormsWindow<S>::accumulate(std::vector<S>& out, const S& coef, const std::vector<Sparse>& slots) const {
    for (const auto& s : slots)
        if (s.empty()) return;
    // Iterative odometer over the nonzero entries of each slot.
    const std::size_t n = slots.size();
    std::vector<std::size_t> pos(n, 0);
    while (true) {
        std::size_t idx = slots[0][pos[0]].first;
        S c = coef * slots[0][pos[0]].second;
        for (std::size_t s = 1; s < n; ++s) {
            idx = idx * reduced_ + slots[s][pos[s]].first;
            c *= slots[s][pos[s]].second;
        }
        out[idx] += c;
        std::size_t s = n;
        while (s > 0) {
            --s;
            if (++pos[s] < slots[s].size()) break;
            pos[s] = 0;
            if (s == 0) return;
        }
    }
}

// d(a0, a1, ..., an) = (1, a0bar, a1, ..., an).
template <class S>
void FormsWindow<S>::d_on_basis(std::size_t n, std::size_t idx, const S& coef, std::vector<S>& out) const {
    const auto t = basis_tuple(n, idx);
    if (t[0] == 0) return;
    std::vector<std::size_t> r(n + 2);
    r[0] = 0;
    r[1] = t[0] - 1;
    for (std::size_t s = 1; s <= n; ++s) r[s + 1] = t[s];
    out[basis_index(r)] += coef;
}

// b(a0,...,an) = sum_{j<n} (-1)^j (..., a_j a_{j+1}, ...) + (-1)^n (a_n a_0, a_1, ..., a_{n-1}).
template <class S>
void FormsWindow<S>::b_on_basis(std::size_t n, std::size_t idx, const S& coef, std::vector<S>& out) const {
    if (n == 0) return;
    const auto t = basis_tuple(n, idx);
    auto lifted = [&](std::size_t s) { return algebra_basis(t[s] + 1); };
    std::vector<Sparse> slots(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t s = 0; s < n; ++s) {
            if (s < j) {
                slots[s] = s == 0 ? algebra_basis(t[0]) : reduced(lifted(s));
            } else if (s == j) {
                const Sparse left = j == 0 ? algebra_basis(t[0]) : lifted(j);
                const Sparse p = product(left, lifted(j + 1));
                slots[s] = j == 0 ? p : reduced(p);
            } else {
                slots[s] = reduced(lifted(s + 1));
            }
        }
        accumulate(out, coef * signed_one<S>(j), slots);
    }
    slots[0] = product(lifted(n), algebra_basis(t[0]));
    for (std::size_t s = 1; s < n; ++s) slots[s] = reduced(lifted(s));
    accumulate(out, coef * signed_one<S>(n), slots);
}

// k(a0,...,an) = (-1)^n (a_n, a_0, ..., a_{n-1}) + (-1)^{n-1} (1, a_n a_0, a_1, ..., a_{n-1}); identity on degree 0.
template <class S>
void FormsWindow<S>::k_on_basis(std::size_t n, std::size_t idx, const S& coef, std::vector<S>& out) const {
    if (n == 0) {
        out[idx] += coef;
        return;
    }
    const auto t = basis_tuple(n, idx);
    std::vector<Sparse> slots(n + 1);
    slots[0] = algebra_basis(t[n] + 1);
    slots[1] = reduced(algebra_basis(t[0]));
    for (std::size_t s = 2; s <= n; ++s) slots[s] = reduced(algebra_basis(t[s - 1] + 1));
    accumulate(out, coef * signed_one<S>(n), slots);

    slots[0] = algebra_basis(0);
    slots[1] = reduced(product(algebra_basis(t[n] + 1), algebra_basis(t[0])));
    accumulate(out, coef * signed_one<S>(n + 1), slots);
}

// (a0,...,an)(a_{n+1},...,a_m) = sum_{i=0}^{n} (-1)^{n-i} (a0, ..., a_i a_{i+1}, ..., a_m).
template <class S>
void FormsWindow<S>::multiply_basis(std::size_t n, std::size_t i, std::size_t m, std::size_t j, const S& coef,
                                    std::vector<S>& out) const {
    const auto t = basis_tuple(n, i);
    const auto u = basis_tuple(m, j);
    // Concatenated list of canonical algebra indices a_0..a_{n+m+1}.
    std::vector<std::size_t> a;
    a.reserve(n + m + 2);
    a.push_back(t[0]);
    for (std::size_t s = 1; s <= n; ++s) a.push_back(t[s] + 1);
    a.push_back(u[0]);
    for (std::size_t s = 1; s <= m; ++s) a.push_back(u[s] + 1);

    const std::size_t total = n + m;
    std::vector<Sparse> slots(total + 1);
    for (std::size_t merge = 0; merge <= n; ++merge) {
        std::size_t slot = 0;
        for (std::size_t s = 0; s < a.size(); ++s) {
            Sparse entry = algebra_basis(a[s]);
            if (s == merge) {
                entry = product(entry, algebra_basis(a[s + 1]));
                ++s;
            }
            slots[slot] = slot == 0 ? entry : reduced(entry);
            ++slot;
        }
        accumulate(out, coef * signed_one<S>(n - merge), slots);
    }
}

template <class S>
Form<S> FormsWindow<S>::apply_d(const Form<S>& form) const {
    Form<S> out;
    for (const auto& [n, c] : form.components) {
        if (n >= n_max_) {
            bool nonzero = false;
            for (const auto& x : c) nonzero = nonzero || !is_zero(x);
            if (!nonzero) continue;
            throw Error("forms", "DegreeOutOfWindow", "d of a degree-" + std::to_string(n) + " form leaves the window");
        }
        if (c.size() != dims_[n]) throw Error("forms", "ShapeMismatch", "form component has wrong length");
        auto& o = out.components[n + 1];
        if (o.empty()) o.assign(dims_[n + 1], from_int<S>(0));
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!is_zero(c[i])) d_on_basis(n, i, c[i], o);
    }
    return out;
}

template <class S>
Form<S> FormsWindow<S>::apply_b(const Form<S>& form) const {
    Form<S> out;
    for (const auto& [n, c] : form.components) {
        check_degree(n, "apply_b");
        if (c.size() != dims_[n]) throw Error("forms", "ShapeMismatch", "form component has wrong length");
        if (n == 0) continue;
        auto& o = out.components[n - 1];
        if (o.empty()) o.assign(dims_[n - 1], from_int<S>(0));
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!is_zero(c[i])) b_on_basis(n, i, c[i], o);
    }
    return out;
}

template <class S>
Form<S> FormsWindow<S>::apply_k(const Form<S>& form) const {
    Form<S> out;
    for (const auto& [n, c] : form.components) {
        check_degree(n, "apply_k");
        if (c.size() != dims_[n]) throw Error("forms", "ShapeMismatch", "form component has wrong length");
        auto& o = out.components[n];
        o.assign(dims_[n], from_int<S>(0));
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!is_zero(c[i])) k_on_basis(n, i, c[i], o);
    }
    return out;
}

template <class S>
Form<S> FormsWindow<S>::multiply(const Form<S>& u, const Form<S>& v) const {
    Form<S> out;
    for (const auto& [n, cu] : u.components) {
        for (const auto& [m, cv] : v.components) {
            bool any_u = false, any_v = false;
            for (const auto& x : cu) any_u = any_u || !is_zero(x);
            for (const auto& x : cv) any_v = any_v || !is_zero(x);
            if (!any_u || !any_v) continue;
            if (n + m > n_max_) {
                throw Error("forms", "DegreeOutOfWindow",
                            "product of degrees " + std::to_string(n) + " and " + std::to_string(m) + " leaves the window");
            }
            auto& o = out.components[n + m];
            if (o.empty()) o.assign(dims_[n + m], from_int<S>(0));
            for (std::size_t i = 0; i < cu.size(); ++i) {
                if (is_zero(cu[i])) continue;
                for (std::size_t j = 0; j < cv.size(); ++j) {
                    if (is_zero(cv[j])) continue;
                    multiply_basis(n, i, m, j, cu[i] * cv[j], o);
                }
            }
        }
    }
    return out;
}

template <class S>
Matrix<S> FormsWindow<S>::assemble_d(std::size_t n) const {
    Matrix<S> m(dims_[n + 1], dims_[n]);
    std::vector<S> col(dims_[n + 1]);
    for (std::size_t i = 0; i < dims_[n]; ++i) {
        std::fill(col.begin(), col.end(), from_int<S>(0));
        d_on_basis(n, i, from_int<S>(1), col);
        m.set_column(i, col);
    }
    return m;
}

template <class S>
Matrix<S> FormsWindow<S>::assemble_b(std::size_t n) const {
    const std::size_t target = n == 0 ? 0 : dims_[n - 1];
    Matrix<S> m(target, dims_[n]);
    if (n == 0) return m;
    std::vector<S> col(target);
    for (std::size_t i = 0; i < dims_[n]; ++i) {
        std::fill(col.begin(), col.end(), from_int<S>(0));
        b_on_basis(n, i, from_int<S>(1), col);
        m.set_column(i, col);
    }
    return m;
}

template <class S>
Matrix<S> FormsWindow<S>::assemble_k(std::size_t n) const {
    Matrix<S> m(dims_[n], dims_[n]);
    std::vector<S> col(dims_[n]);
    for (std::size_t i = 0; i < dims_[n]; ++i) {
        std::fill(col.begin(), col.end(), from_int<S>(0));
        k_on_basis(n, i, from_int<S>(1), col);
        m.set_column(i, col);
    }
    return m;
}

namespace {

template <class S, class Build>
const Matrix<S>& cached(std::mutex& mutex, std::optional<Matrix<S>>& slot, Build&& build) {
    {
        std::lock_guard lock(mutex);
        if (slot) return *slot;
    }
    Matrix<S> m = build();
    std::lock_guard lock(mutex);
    if (!slot) slot = std::move(m);
    return *slot;
}

}  // namespace

template <class S>
const Matrix<S>& FormsWindow<S>::d_block(std::size_t n) const {
    if (n >= n_max_) {
        throw Error("forms", "DegreeOutOfWindow", "d block at degree " + std::to_string(n) + " leaves the window");
    }
    return cached<S>(cache_->mutex, cache_->d[n], [&] { return assemble_d(n); });
}

template <class S>
const Matrix<S>& FormsWindow<S>::b_block(std::size_t n) const {
    check_degree(n, "b_block");
    return cached<S>(cache_->mutex, cache_->b[n], [&] { return assemble_b(n); });
}

template <class S>
const Matrix<S>& FormsWindow<S>::k_block(std::size_t n) const {
    check_degree(n, "k_block");
    return cached<S>(cache_->mutex, cache_->k[n], [&] { return assemble_k(n); });
}

template <class S>
Matrix<S> FormsWindow<S>::N_block(std::size_t n) const {
    check_degree(n, "N_block");
    return Matrix<S>::identity(dims_[n]) * from_int<S>(static_cast<long>(n));
}

template <class S>
Matrix<S> FormsWindow<S>::one_minus_k_block(std::size_t n) const {
    return Matrix<S>::identity(dims_[n]) - k_block(n);
}

template <class S>
Matrix<S> FormsWindow<S>::laplacian_block(std::size_t n) const {
    if (n >= n_max_) {
        throw Error("forms", "DegreeOutOfWindow", "bd + db at degree " + std::to_string(n) + " leaves the window");
    }
    Matrix<S> bd = b_block(n + 1) * d_block(n);
    if (n > 0) bd += d_block(n - 1) * b_block(n);
    return bd;
}

template <class S>
Matrix<S> FormsWindow<S>::L_block(std::size_t n) const {
    if (n >= n_max_) {
        throw Error("forms", "DegreeOutOfWindow", "L at degree " + std::to_string(n) + " leaves the window");
    }
    // [b, Nd] = b N d + N d b; N acts on the target degree of each d.
    Matrix<S> l = (b_block(n + 1) * d_block(n)) * from_int<S>(static_cast<long>(n + 1));
    if (n > 0) l += (d_block(n - 1) * b_block(n)) * from_int<S>(static_cast<long>(n));
    return l;
}

template <class S>
void FormsWindow<S>::assemble(unsigned jobs) const {
    // Tasks: (kind, degree) pairs; each fills its own cache slot.
    std::vector<std::pair<int, std::size_t>> tasks;
    for (std::size_t n = 0; n <= n_max_; ++n) {
        if (n < n_max_) tasks.emplace_back(0, n);
        tasks.emplace_back(1, n);
        tasks.emplace_back(2, n);
    }
    parallel_for(tasks.size(), jobs, [&](std::size_t t) {
        const auto [kind, n] = tasks[t];
        if (kind == 0) d_block(n);
        if (kind == 1) b_block(n);
        if (kind == 2) k_block(n);
    });
}

template <class S>
OperatorSet<S> FormsWindow<S>::operator_matrices(unsigned jobs) const {
    assemble(jobs);
    OperatorSet<S> ops;
    ops.d = {"d", 1, {}};
    ops.b = {"b", -1, {}};
    ops.k = {"k", 0, {}};
    ops.N = {"N", 0, {}};
    ops.one_minus_k = {"1-k", 0, {}};
    ops.L = {"L", 0, {}};
    for (std::size_t n = 0; n <= n_max_; ++n) {
        if (n < n_max_) ops.d.blocks.emplace(n, d_block(n));
        ops.b.blocks.emplace(n, b_block(n));
        ops.k.blocks.emplace(n, k_block(n));
        ops.N.blocks.emplace(n, N_block(n));
        ops.one_minus_k.blocks.emplace(n, one_minus_k_block(n));
        if (n < n_max_) {
            const Matrix<S> residual = laplacian_block(n) - ops.one_minus_k.block(n);
            const bool ok = ScalarTraits<S>::exact ? residual.is_zero_matrix() : residual.max_abs() < 1e-10;
            if (!ok) {
                throw Error("forms", "IdentityViolation",
                            "bd + db != 1 - k at degree " + std::to_string(n) +
                                " (max residual " + std::to_string(residual.max_abs()) + ")");
            }
            ops.L.blocks.emplace(n, L_block(n));
        }
    }
    return ops;
}

template class FormsWindow<Rational>;
template class FormsWindow<Gaussian>;
template class FormsWindow<Complex>;

}  // namespace nchodge
