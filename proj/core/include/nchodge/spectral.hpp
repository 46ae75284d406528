#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "nchodge/forms.hpp"
#include "nchodge/polynomial.hpp"

namespace nchodge {

enum class ProjectionMethod {
    automatic,   ///< polynomial in exact modes, contour integral in float mode
    polynomial,  ///< P = r(k) with r from the Chinese remainder theorem
    riesz,       ///< P = (2 pi i)^{-1} \oint (z - k)^{-1} dz around z = 1 (float only)
};

struct SpectralTolerances {
    /// Eigenvalue clustering tolerance; float eigenvalues snap to a root of
    /// unity within sqrt(eig_tol) (defective eigenvalue 1 splits at that scale).
    double eig_tol = 1e-8;
    /// Residual threshold applied in float mode.
    double residual_tol = 1e-10;
    /// Quadrature nodes for the contour-integral projection.
    std::size_t riesz_nodes = 64;
};

/// A root of unity exp(2 pi i j / order) with its algebraic multiplicity.
struct EigenvalueEntry {
    std::size_t order = 1;
    std::size_t index = 0;
    Complex value{1.0, 0.0};
    std::size_t multiplicity = 0;
};

/// Total algebraic multiplicity of all primitive order-d roots.
struct OrderTotal {
    std::size_t order = 1;
    std::size_t multiplicity = 0;
    bool exact = false;
};

template <class S>
struct SpectralData {
    std::size_t degree = 0;
    Matrix<S> P;
    Matrix<S> P_perp;
    std::optional<Matrix<S>> G;
    std::vector<EigenvalueEntry> eigenvalue_report;
};

/// Polynomials attached to the Karoubi operator on degree n >= 1:
/// annihilator (x^n - 1)(x^{n+1} - 1) = (x - 1)^2 q(x), projector r with
/// r = 1 mod (x - 1)^2 and r = 0 mod q, and green g with g (1 - x) = 1 mod q.
struct KaroubiPolynomials {
    Polynomial annihilator;
    Polynomial cofactor;
    Polynomial projector;
    Polynomial green;
};

KaroubiPolynomials karoubi_polynomials(std::size_t degree);

/// Admissible eigenvalue orders on degree n: divisors of n or n + 1 (just 1 for n = 0).
std::vector<std::size_t> admissible_orders(std::size_t degree);

/// Contour-integral spectral projection of `k` for the eigenvalue 1 on degree
/// `degree`. The circle has radius sin(pi / (degree + 1)), half the distance to
/// the nearest other admissible root.
Eigen::MatrixXcd riesz_projection(const Eigen::MatrixXcd& k, std::size_t degree, std::size_t nodes = 64);

/// Harmonic projection P onto Ker(1-k)^2 and P_perp = I - P.
/// Requires degree <= n_max - 1. Errors: spectral.PolynomialRelationViolated,
/// spectral.NumericalRankAmbiguous (float mode), forms.DegreeOutOfWindow.
template <class S>
SpectralData<S> harmonic_projection(const FormsWindow<S>& window, std::size_t degree,
                                    ProjectionMethod method = ProjectionMethod::automatic,
                                    const SpectralTolerances& tol = {});

/// Fills data.G: inverse of (1-k) on Im(P_perp), zero on Im(P).
/// Error: spectral.SingularOnComplement.
template <class S>
void greens_operator(const FormsWindow<S>& window, SpectralData<S>& data, const SpectralTolerances& tol = {});

/// harmonic_projection followed by greens_operator.
template <class S>
SpectralData<S> spectral_data(const FormsWindow<S>& window, std::size_t degree,
                              ProjectionMethod method = ProjectionMethod::automatic,
                              const SpectralTolerances& tol = {});

template <class S>
struct HodgeSplit {
    Form<S> harmonic;
    Form<S> d_part;
    Form<S> b_part;
};

/// form = P form + (G d b) P_perp form + (G b d) P_perp form, with the last two
/// verified to lie in Im(d) and Im(b). Errors: forms.DegreeOutOfWindow,
/// spectral.MembershipViolation.
template <class S>
HodgeSplit<S> hodge_split(const FormsWindow<S>& window, const Form<S>& form, const SpectralTolerances& tol = {});

struct RescaledLaplacianCheck {
    double norm_on_P = 0.0;
    bool exact_zero_on_P = false;
    /// Smallest singular value of L restricted to Im(P_perp); empty when Im(P_perp) = 0.
    std::optional<double> min_singular_on_P_perp;
};

template <class S>
RescaledLaplacianCheck rescaled_laplacian_check(const FormsWindow<S>& window, std::size_t degree,
                                                const SpectralTolerances& tol = {});

/// Eigenvalues of the k block, snapped to admissible roots of unity.
/// Exact modes also return exact per-order totals from cyclotomic kernels.
/// Error: spectral.NonUnitRootEigenvalue.
template <class S>
std::vector<EigenvalueEntry> spectrum_report(const FormsWindow<S>& window, std::size_t degree,
                                             const SpectralTolerances& tol = {},
                                             std::vector<OrderTotal>* order_totals = nullptr);

/// One named residual; in exact modes `exact_zero` decides pass/fail.
struct Residual {
    std::string name;
    double value = 0.0;
    bool exact_zero = false;
    bool exact = false;
    /// Largest |re| or |im| entry, kept exactly in exact modes.
    std::optional<Rational> exact_value;

    bool passes(double tol) const { return exact ? exact_zero : value <= tol; }
};

template <class S>
Residual make_residual(std::string name, const Matrix<S>& m) {
    Residual r;
    r.name = std::move(name);
    r.exact = ScalarTraits<S>::exact;
    r.exact_zero = m.is_zero_matrix();
    r.value = m.max_abs();
    if constexpr (std::is_same_v<S, Rational>) {
        Rational top(0);
        for (const auto& x : m.data()) top = std::max(top, Rational(abs(x)));
        r.exact_value = top;
    } else if constexpr (std::is_same_v<S, Gaussian>) {
        Rational top(0);
        for (const auto& x : m.data()) top = std::max({top, Rational(abs(x.re)), Rational(abs(x.im))});
        r.exact_value = top;
    }
    return r;
}

/// Everything checked per degree by the spectral report.
struct DegreeInvariants {
    std::size_t degree = 0;
    std::size_t dim = 0;
    std::size_t rank_P = 0;
    std::size_t rank_P_perp = 0;
    std::size_t dim_ker_one_minus_k_sq = 0;
    std::size_t rank_one_minus_k_sq = 0;
    std::vector<EigenvalueEntry> eigenvalues;
    std::vector<OrderTotal> order_totals;
    RescaledLaplacianCheck laplacian;
    std::vector<Residual> residuals;
    /// Alternative reading of the exact/coexact splitting: whether
    /// d(P Omega^{n-1}) + b(P Omega^{n+1}) equals P_perp Omega^n.
    std::size_t rank_dP_plus_bP = 0;
    bool statement_reading_holds = false;
};

/// Computes the full invariant table for one degree (0 <= degree <= n_max - 1).
template <class S>
DegreeInvariants degree_invariants(const FormsWindow<S>& window, std::size_t degree,
                                   const SpectralTolerances& tol = {});

}  // namespace nchodge
