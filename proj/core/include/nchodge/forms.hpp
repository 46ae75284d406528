#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nchodge/algebra.hpp"
#include "nchodge/matrix.hpp"

namespace nchodge {

/// Element of the truncated form space: degree -> coefficients over that
/// degree's tensor basis. Absent degrees are zero.
template <class S>
struct Form {
    std::map<std::size_t, std::vector<S>> components;

    bool is_zero_form() const {
        for (const auto& [deg, c] : components)
            for (const auto& x : c)
                if (!is_zero(x)) return false;
        return true;
    }
    /// Coefficients at `degree`, or an empty vector when absent.
    const std::vector<S>* at(std::size_t degree) const {
        auto it = components.find(degree);
        return it == components.end() ? nullptr : &it->second;
    }
};

/// Degree-shifting operator stored as one matrix per source degree.
template <class S>
struct GradedOperator {
    std::string name;
    int degree_shift = 0;
    std::map<std::size_t, Matrix<S>> blocks;

    const Matrix<S>& block(std::size_t degree) const { return blocks.at(degree); }
    bool has_block(std::size_t degree) const { return blocks.count(degree) != 0; }
};

template <class S>
struct OperatorSet {
    GradedOperator<S> d;
    GradedOperator<S> b;
    GradedOperator<S> k;
    GradedOperator<S> N;
    GradedOperator<S> one_minus_k;
    GradedOperator<S> L;
};

/// Truncated graded space of noncommutative differential forms
/// Omega^0 A, ..., Omega^{n_max} A with Omega^n A = A (x) Abar^{(x) n}.
///
/// Basis of degree n: tuples (i0; j1, ..., jn) with i0 a canonical algebra
/// index and j a reduced index (canonical index j + 1), ordered
/// lexicographically with i0 most significant. The tuple stands for
/// e_{i0} d e_{j1+1} ... d e_{jn+1}.
template <class S>
class FormsWindow {
public:
    static constexpr std::size_t default_cap = 20000;

    /// Throws forms.WindowTooLarge if dim Omega^{n_max} exceeds `cap`.
    FormsWindow(Algebra<S> algebra, std::size_t n_max, std::size_t cap = default_cap);

    const Algebra<S>& algebra() const { return algebra_; }
    std::size_t n_max() const { return n_max_; }
    std::size_t degree_dim(std::size_t n) const { return dims_.at(n); }
    const std::vector<std::size_t>& degree_dims() const { return dims_; }

    std::vector<std::size_t> basis_tuple(std::size_t degree, std::size_t index) const;
    std::size_t basis_index(const std::vector<std::size_t>& tuple) const;
    /// Human-readable name such as "x dx dx".
    std::string basis_label(std::size_t degree, std::size_t index) const;

    Form<S> zero_form() const { return {}; }
    Form<S> basis_form(std::size_t degree, std::size_t index) const;
    Form<S> from_algebra(const AlgebraElement<S>& a) const;

    Form<S> apply_d(const Form<S>& form) const;
    Form<S> apply_b(const Form<S>& form) const;
    Form<S> apply_k(const Form<S>& form) const;
    Form<S> multiply(const Form<S>& u, const Form<S>& v) const;

    /// Per-degree operator blocks, assembled on first use and cached.
    /// d: n -> n+1 for n < n_max. b: n -> n-1 for n >= 0 (degree 0 maps to a
    /// 0-row block). k, N, 1-k: all degrees. L = bNd + Ndb: degrees < n_max.
    const Matrix<S>& d_block(std::size_t n) const;
    const Matrix<S>& b_block(std::size_t n) const;
    const Matrix<S>& k_block(std::size_t n) const;
    Matrix<S> N_block(std::size_t n) const;
    Matrix<S> one_minus_k_block(std::size_t n) const;
    /// bd + db on degree n (needs n < n_max).
    Matrix<S> laplacian_block(std::size_t n) const;
    Matrix<S> L_block(std::size_t n) const;

    /// Assembles every block, optionally across `jobs` threads, and checks
    /// (I - k) == (bd + db) on degrees 0..n_max-1. Throws forms.IdentityViolation.
    OperatorSet<S> operator_matrices(unsigned jobs = 1) const;

    /// Forces assembly of all cached blocks, one degree per task.
    void assemble(unsigned jobs = 1) const;

private:
    using Sparse = std::vector<std::pair<std::size_t, S>>;

    void check_degree(std::size_t n, const char* what) const;
    void accumulate(std::vector<S>& out, const S& coef, const std::vector<Sparse>& slots) const;
    Sparse algebra_basis(std::size_t i) const;
    Sparse product(const Sparse& x, const Sparse& y) const;
    Sparse reduced(const Sparse& x) const;

    void d_on_basis(std::size_t n, std::size_t idx, const S& coef, std::vector<S>& out) const;
    void b_on_basis(std::size_t n, std::size_t idx, const S& coef, std::vector<S>& out) const;
    void k_on_basis(std::size_t n, std::size_t idx, const S& coef, std::vector<S>& out) const;
    void multiply_basis(std::size_t n, std::size_t i, std::size_t m, std::size_t j, const S& coef,
                        std::vector<S>& out) const;

    Matrix<S> assemble_d(std::size_t n) const;
    Matrix<S> assemble_b(std::size_t n) const;
    Matrix<S> assemble_k(std::size_t n) const;

    struct Cache {
        std::mutex mutex;
        std::vector<std::optional<Matrix<S>>> d, b, k;
    };

    Algebra<S> algebra_;
    std::size_t n_max_ = 0;
    std::size_t reduced_ = 0;
    std::vector<std::size_t> dims_;
    std::shared_ptr<Cache> cache_;
};

}  // namespace nchodge
