#include "nchodge/algebra.hpp"

#include <sstream>

#include "nchodge/error.hpp"

namespace nchodge {

namespace {

template <class S>
bool nearly_zero(const S& x, double tol) {
    if constexpr (ScalarTraits<S>::exact) {
        (void)tol;
        return is_zero(x);
    } else {
        return ScalarTraits<S>::abs(x) <= tol;
    }
}

}  // namespace

template <class S>
bool check_associativity(const StructureConstants<S>& c, std::size_t witness[4], double tol) {
    const std::size_t n = c.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    S lhs = from_int<S>(0);
                    S rhs = from_int<S>(0);
                    for (std::size_t m = 0; m < n; ++m) {
                        lhs += c(i, j, m) * c(m, k, l);
                        rhs += c(j, k, m) * c(i, m, l);
                    }
                    if (!nearly_zero<S>(lhs - rhs, tol)) {
                        witness[0] = i;
                        witness[1] = j;
                        witness[2] = k;
                        witness[3] = l;
                        return false;
                    }
                }
    return true;
}

template <class S>
bool check_unit(const StructureConstants<S>& c, const std::vector<S>& unit, std::size_t& witness, double tol) {
    const std::size_t n = c.dim();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            S left = from_int<S>(0);
            S right = from_int<S>(0);
            for (std::size_t i = 0; i < n; ++i) {
                left += unit[i] * c(i, j, k);
                right += unit[i] * c(j, i, k);
            }
            const S expected = from_int<S>(j == k ? 1 : 0);
            if (!nearly_zero<S>(left - expected, tol) || !nearly_zero<S>(right - expected, tol)) {
                witness = j;
                return false;
            }
        }
    }
    return true;
}

template <class S>
Algebra<S> Algebra<S>::make(std::size_t dim, std::vector<std::string> basis_labels,
                            const StructureConstants<S>& structure_constants, std::vector<S> unit) {
    if (dim == 0) throw Error("algebra", "ShapeMismatch", "algebra dimension must be positive");
    if (structure_constants.dim() != dim) {
        throw Error("algebra", "ShapeMismatch", "structure constants do not match dim " + std::to_string(dim));
    }
    if (unit.size() != dim) throw Error("algebra", "ShapeMismatch", "unit vector length does not match dim");
    if (basis_labels.empty()) {
        for (std::size_t i = 0; i < dim; ++i) basis_labels.push_back("e" + std::to_string(i));
    }
    if (basis_labels.size() != dim) throw Error("algebra", "ShapeMismatch", "basis label count does not match dim");

    const double tol = ScalarTraits<S>::exact ? 0.0 : 1e-12;
    std::size_t w[4] = {0, 0, 0, 0};
    if (!check_associativity(structure_constants, w, tol)) {
        std::ostringstream os;
        os << "associativity fails at (i,j,k,l) = (" << w[0] << "," << w[1] << "," << w[2] << "," << w[3] << ")";
        throw Error("algebra", "AssociativityViolation", os.str());
    }
    std::size_t uw = 0;
    if (!check_unit(structure_constants, unit, uw, tol)) {
        throw Error("algebra", "UnitViolation", "unit law fails on basis element " + std::to_string(uw) + " (" +
                                                    basis_labels[uw] + ")");
    }

    Algebra a;
    a.dim_ = dim;
    a.input_labels_ = basis_labels;
    a.input_ = structure_constants;
    a.input_unit_ = unit;

    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < dim; ++i) {
        if constexpr (ScalarTraits<S>::exact) {
            if (!is_zero(unit[i])) {
                pivot = i;
                break;
            }
        } else {
            // float: largest coordinate keeps the change of basis well conditioned
            const double m = ScalarTraits<S>::abs(unit[i]);
            if (m > best + 1e-14) {
                best = m;
                pivot = i;
            }
        }
    }
    a.pivot_ = pivot;

    bool unit_is_basis_vector = true;
    for (std::size_t i = 0; i < dim; ++i) {
        const S expected = from_int<S>(i == pivot ? 1 : 0);
        if (!(unit[i] == expected)) unit_is_basis_vector = false;
    }
    a.labels_.push_back(unit_is_basis_vector ? basis_labels[pivot] : std::string("1"));
    for (std::size_t i = 0; i < dim; ++i)
        if (i != pivot) a.labels_.push_back(basis_labels[i]);

    // Canonical basis vectors in input coordinates.
    std::vector<std::vector<S>> f(dim, std::vector<S>(dim, from_int<S>(0)));
    f[0] = unit;
    for (std::size_t i = 0, r = 1; i < dim; ++i) {
        if (i == pivot) continue;
        f[r++][i] = from_int<S>(1);
    }

    a.canonical_ = StructureConstants<S>(dim);
    a.products_.assign(dim * dim, std::vector<S>(dim, from_int<S>(0)));
    for (std::size_t p = 0; p < dim; ++p) {
        for (std::size_t q = 0; q < dim; ++q) {
            std::vector<S> prod(dim, from_int<S>(0));
            for (std::size_t i = 0; i < dim; ++i) {
                if (is_zero(f[p][i])) continue;
                for (std::size_t j = 0; j < dim; ++j) {
                    if (is_zero(f[q][j])) continue;
                    const S coef = f[p][i] * f[q][j];
                    for (std::size_t k = 0; k < dim; ++k) {
                        if (!is_zero(structure_constants(i, j, k))) prod[k] += coef * structure_constants(i, j, k);
                    }
                }
            }
            const auto canon = a.to_canonical(prod);
            for (std::size_t r = 0; r < dim; ++r) a.canonical_(p, q, r) = canon.coeffs[r];
            a.products_[p * dim + q] = canon.coeffs;
        }
    }
    return a;
}

template <class S>
void Algebra<S>::check_dim(const std::vector<S>& v, const char* what) const {
    if (v.size() != dim_) {
        throw Error("algebra", "DimMismatch",
                    std::string(what) + ": expected length " + std::to_string(dim_) + ", got " + std::to_string(v.size()));
    }
}

template <class S>
AlgebraElement<S> Algebra<S>::unit() const {
    return basis_element(0);
}

template <class S>
AlgebraElement<S> Algebra<S>::basis_element(std::size_t i) const {
    AlgebraElement<S> e{std::vector<S>(dim_, from_int<S>(0))};
    e.coeffs.at(i) = from_int<S>(1);
    return e;
}

template <class S>
AlgebraElement<S> Algebra<S>::multiply(const AlgebraElement<S>& x, const AlgebraElement<S>& y) const {
    check_dim(x.coeffs, "multiply (left)");
    check_dim(y.coeffs, "multiply (right)");
    AlgebraElement<S> out{std::vector<S>(dim_, from_int<S>(0))};
    for (std::size_t i = 0; i < dim_; ++i) {
        if (is_zero(x.coeffs[i])) continue;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (is_zero(y.coeffs[j])) continue;
            const S coef = x.coeffs[i] * y.coeffs[j];
            const auto& row = basis_product(i, j);
            for (std::size_t k = 0; k < dim_; ++k)
                if (!is_zero(row[k])) out.coeffs[k] += coef * row[k];
        }
    }
    return out;
}

template <class S>
ReducedElement<S> Algebra<S>::reduce(const AlgebraElement<S>& x) const {
    check_dim(x.coeffs, "reduce");
    return ReducedElement<S>{std::vector<S>(x.coeffs.begin() + 1, x.coeffs.end())};
}

template <class S>
AlgebraElement<S> Algebra<S>::lift(const ReducedElement<S>& r) const {
    if (r.coeffs.size() != dim_ - 1) throw Error("algebra", "DimMismatch", "lift: wrong reduced length");
    AlgebraElement<S> out{std::vector<S>(dim_, from_int<S>(0))};
    for (std::size_t i = 0; i + 1 < dim_; ++i) out.coeffs[i + 1] = r.coeffs[i];
    return out;
}

template <class S>
AlgebraElement<S> Algebra<S>::to_canonical(const std::vector<S>& input_coords) const {
    check_dim(input_coords, "to_canonical");
    // x = c0 * u + sum_{i != pivot} c_i e_i  =>  c0 = x_pivot / u_pivot.
    AlgebraElement<S> out{std::vector<S>(dim_, from_int<S>(0))};
    const S c0 = input_coords[pivot_] / input_unit_[pivot_];
    out.coeffs[0] = c0;
    for (std::size_t i = 0, r = 1; i < dim_; ++i) {
        if (i == pivot_) continue;
        out.coeffs[r++] = input_coords[i] - c0 * input_unit_[i];
    }
    return out;
}

template <class S>
std::vector<S> Algebra<S>::to_input(const AlgebraElement<S>& x) const {
    check_dim(x.coeffs, "to_input");
    std::vector<S> out(dim_, from_int<S>(0));
    for (std::size_t i = 0; i < dim_; ++i) out[i] = x.coeffs[0] * input_unit_[i];
    for (std::size_t i = 0, r = 1; i < dim_; ++i) {
        if (i == pivot_) continue;
        out[i] += x.coeffs[r++];
    }
    return out;
}

namespace algebras {

template <class S>
Algebra<S> dual_numbers() {
    StructureConstants<S> c(2);
    c(0, 0, 0) = from_int<S>(1);
    c(0, 1, 1) = from_int<S>(1);
    c(1, 0, 1) = from_int<S>(1);
    auto a = Algebra<S>::make(2, {"1", "x"}, c, {from_int<S>(1), from_int<S>(0)});
    a.set_name("dual_numbers");
    return a;
}

template <class S>
Algebra<S> c_plus_c() {
    StructureConstants<S> c(2);
    c(0, 0, 0) = from_int<S>(1);
    c(1, 1, 1) = from_int<S>(1);
    auto a = Algebra<S>::make(2, {"e1", "e2"}, c, {from_int<S>(1), from_int<S>(1)});
    a.set_name("c_plus_c");
    return a;
}

template <class S>
Algebra<S> matrices_2x2() {
    // E_ij has index 2*i + j (0-based); E_ij E_kl = delta_jk E_il.
    StructureConstants<S> c(4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t l = 0; l < 2; ++l) c(2 * i + j, 2 * j + l, 2 * i + l) = from_int<S>(1);
    auto a = Algebra<S>::make(4, {"E11", "E12", "E21", "E22"}, c,
                              {from_int<S>(1), from_int<S>(0), from_int<S>(0), from_int<S>(1)});
    a.set_name("m2");
    return a;
}

template <class S>
Algebra<S> group_z3() {
    StructureConstants<S> c(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c(i, j, (i + j) % 3) = from_int<S>(1);
    auto a = Algebra<S>::make(3, {"1", "g", "g2"}, c, {from_int<S>(1), from_int<S>(0), from_int<S>(0)});
    a.set_name("group_z3");
    return a;
}

template <class S>
Algebra<S> scalars() {
    StructureConstants<S> c(1);
    c(0, 0, 0) = from_int<S>(1);
    auto a = Algebra<S>::make(1, {"1"}, c, {from_int<S>(1)});
    a.set_name("scalars");
    return a;
}

template <class S>
Algebra<S> by_name(const std::string& name) {
    if (name == "dual_numbers") return dual_numbers<S>();
    if (name == "c_plus_c") return c_plus_c<S>();
    if (name == "m2") return matrices_2x2<S>();
    if (name == "group_z3") return group_z3<S>();
    if (name == "scalars") return scalars<S>();
    throw Error("algebra", "UnknownAlgebra", "no built-in algebra named '" + name + "'");
}

std::vector<std::string> names() { return {"dual_numbers", "c_plus_c", "m2", "group_z3", "scalars"}; }

}  // namespace algebras

#define NCHODGE_INSTANTIATE_ALGEBRA(S)                                                                     \
    template class Algebra<S>;                                                                             \
    template bool check_associativity<S>(const StructureConstants<S>&, std::size_t[4], double);            \
    template bool check_unit<S>(const StructureConstants<S>&, const std::vector<S>&, std::size_t&, double); \
    template Algebra<S> algebras::dual_numbers<S>();                                                       \
    template Algebra<S> algebras::c_plus_c<S>();                                                           \
    template Algebra<S> algebras::matrices_2x2<S>();                                                       \
    template Algebra<S> algebras::group_z3<S>();                                                           \
    template Algebra<S> algebras::scalars<S>();                                                            \
    template Algebra<S> algebras::by_name<S>(const std::string&);

NCHODGE_INSTANTIATE_ALGEBRA(Rational)
NCHODGE_INSTANTIATE_ALGEBRA(Gaussian)
NCHODGE_INSTANTIATE_ALGEBRA(Complex)

}  // namespace nchodge
