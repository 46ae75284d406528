#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nchodge/matrix.hpp"
#include "nchodge/scalar.hpp"

namespace nchodge {

/// Finite cochain complex C^0 -> C^1 -> ... -> C^p with an inner product per
/// degree. Float matrices drive the analysis; when the input was exact, an
/// exact copy of the differentials is kept for exact rank questions.
struct CochainComplex {
    std::vector<std::size_t> dims;
    /// D_k : C^k -> C^{k+1}, shape dims[k+1] x dims[k].
    std::vector<Eigen::MatrixXcd> differentials;
    /// Gram matrix per degree (identity when not given).
    std::vector<Eigen::MatrixXcd> grams;
    std::optional<std::vector<Matrix<Gaussian>>> exact_differentials;

    std::size_t length() const { return dims.empty() ? 0 : dims.size() - 1; }
};

struct ComplexTolerances {
    /// Max residual for D_{k+1} D_k = 0 and Gram symmetry in float input.
    double validation_tol = 1e-12;
    /// Eigenvalues below rank_tol * (largest eigenvalue) count as kernel.
    double rank_tol = 1e-10;
};

/// Validates shapes, D_{k+1} D_k = 0 and Gram positivity.
/// Errors: hodge.ShapeMismatch, hodge.NotAComplex, hodge.BadGram.
CochainComplex make_complex(std::vector<std::size_t> dims, std::vector<Eigen::MatrixXcd> differentials,
                            std::vector<Eigen::MatrixXcd> grams = {}, const ComplexTolerances& tol = {});

/// Exact variant: float matrices are derived from the exact ones and
/// D_{k+1} D_k = 0 is checked exactly.
CochainComplex make_exact_complex(std::vector<std::size_t> dims, std::vector<Matrix<Gaussian>> differentials,
                                  std::vector<Eigen::MatrixXcd> grams = {}, const ComplexTolerances& tol = {});

/// Cochain split into harmonic, exact (Im D_{k-1}) and coexact (Im D*_k) parts.
struct Decomposition {
    Eigen::VectorXcd harmonic;
    Eigen::VectorXcd exact;
    Eigen::VectorXcd coexact;
};

class HodgePackage {
public:
    HodgePackage(const CochainComplex& complex, const ComplexTolerances& tol = {});

    const CochainComplex& complex() const { return complex_; }
    const std::vector<Eigen::MatrixXcd>& adjoints() const { return adjoints_; }
    const std::vector<Eigen::MatrixXcd>& laplacians() const { return laplacians_; }
    /// Eigenvalues of each Laplacian (self-adjoint for the Gram inner product), ascending.
    const std::vector<Eigen::VectorXd>& eigenvalues() const { return eigenvalues_; }
    /// Gram-orthonormal eigenvectors, columns matching eigenvalues().
    const std::vector<Eigen::MatrixXcd>& eigenvectors() const { return eigenvectors_; }
    /// Gram-orthonormal basis of Ker Delta_k.
    const std::vector<Eigen::MatrixXcd>& harmonic_bases() const { return harmonic_; }
    const std::vector<std::size_t>& betti() const { return betti_; }

    /// dim Ker D_k - rank D_{k-1}, exact when the complex carries exact differentials.
    std::vector<std::size_t> betti_rank_nullity() const;

    /// Unique split of a degree-k cochain. Error: hodge.ShapeMismatch.
    Decomposition decompose(std::size_t degree, const Eigen::VectorXcd& v) const;

    /// <u, v> in the degree-k Gram inner product.
    Complex inner(std::size_t degree, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const;

private:
    CochainComplex complex_;
    ComplexTolerances tol_;
    std::vector<Eigen::MatrixXcd> adjoints_;
    std::vector<Eigen::MatrixXcd> laplacians_;
    std::vector<Eigen::VectorXd> eigenvalues_;
    std::vector<Eigen::MatrixXcd> eigenvectors_;
    std::vector<Eigen::MatrixXcd> harmonic_;
    std::vector<std::size_t> betti_;
    std::vector<std::size_t> kernel_counts_;
    /// rank D_k, exact when available.
    std::vector<std::size_t> ranks_;
    /// Upper Cholesky factor U of each Gram matrix (G = U^H U).
    std::vector<Eigen::MatrixXcd> gram_factors_;
};

struct ZetaDeterminant {
    /// Product of the nonzero eigenvalues (1 for the zero operator).
    double det_prime = 1.0;
    /// zeta'(0) with the convention zeta'(0) = -d/ds zeta(s)|_0 = log det'.
    double zeta_prime = 0.0;
    /// The same derivative by a central difference of zeta(s) = sum lambda^{-s}.
    double zeta_prime_finite_difference = 0.0;
    std::size_t kernel_dim = 0;
    std::size_t nonzero_count = 0;
};

/// From a spectrum. Error: hodge.NegativeEigenvalue.
ZetaDeterminant zeta_det(const Eigen::VectorXd& eigenvalues, double rank_tol = 1e-10);

/// From a Hermitian PSD matrix. Errors: hodge.NotHermitian, hodge.NegativeEigenvalue.
ZetaDeterminant zeta_det(const Eigen::MatrixXcd& op, double rank_tol = 1e-10);

struct TorsionReport {
    std::vector<std::size_t> dims;
    std::vector<std::size_t> betti;
    std::vector<Eigen::VectorXd> eigenvalues;
    std::vector<ZetaDeterminant> determinants;
    double log_torsion = 0.0;
    double torsion = 1.0;
    std::optional<double> cs_partition;
};

/// log T = 1/2 sum_i (-1)^i i log det' Delta_i; the CS value is filled when
/// the complex has degrees 0 and 1.
TorsionReport rs_torsion(const CochainComplex& complex, const ComplexTolerances& tol = {});
TorsionReport rs_torsion(const HodgePackage& package, const ComplexTolerances& tol = {});

/// Z = det'(Delta_1)^{-1/4} det'(Delta_0)^{3/4}. Error: hodge.ShapeMismatch (length 0).
double abelian_cs_partition(const CochainComplex& complex, const ComplexTolerances& tol = {});

/// N-point circle with holonomy alpha on the closing edge: D_0 = S_alpha - I.
/// Errors: hodge.InvalidArgument (N = 0 or |alpha| != 1).
CochainComplex twisted_circle_complex(Complex alpha, std::size_t n);

/// Block-diagonal sum, padding the shorter complex with zero spaces.
CochainComplex direct_sum(const CochainComplex& a, const CochainComplex& b);

/// Conjugates every differential and Gram matrix by unitaries: D_k -> U_{k+1} D_k U_k^H.
CochainComplex unitary_conjugate(const CochainComplex& c, const std::vector<Eigen::MatrixXcd>& unitaries);

/// Random exact complex with every dims[k] <= max_dim: a direct sum of
/// elementary pieces conjugated by random invertible integer matrices, with
/// Gram matrices M M^T + I. Betti numbers are known by construction.
struct RandomComplex {
    CochainComplex complex;
    std::vector<std::size_t> betti;
};
RandomComplex random_complex(std::mt19937_64& rng, std::size_t max_dim = 8, std::size_t max_length = 3);

}  // namespace nchodge
