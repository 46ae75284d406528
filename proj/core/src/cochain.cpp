#include "nchodge/cochain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "nchodge/error.hpp"

namespace nchodge {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

double matrix_scale(const MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void check_shapes(const std::vector<std::size_t>& dims, std::size_t count, auto&& rows_of, auto&& cols_of) {
    if (dims.empty()) throw Error("hodge", "ShapeMismatch", "complex needs at least one degree");
    if (count + 1 != dims.size()) {
        throw Error("hodge", "ShapeMismatch",
                    "expected " + std::to_string(dims.size() - 1) + " differentials, got " + std::to_string(count));
    }
    for (std::size_t k = 0; k < count; ++k) {
        if (rows_of(k) != dims[k + 1] || cols_of(k) != dims[k]) {
            throw Error("hodge", "ShapeMismatch",
                        "D_" + std::to_string(k) + " has shape " + std::to_string(rows_of(k)) + "x" +
                            std::to_string(cols_of(k)) + ", expected " + std::to_string(dims[k + 1]) + "x" +
                            std::to_string(dims[k]));
        }
    }
}

std::vector<MatrixXcd> validate_grams(const std::vector<std::size_t>& dims, std::vector<MatrixXcd> grams, double tol) {
    if (grams.empty()) {
        for (auto d : dims) grams.push_back(MatrixXcd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
        return grams;
    }
    if (grams.size() != dims.size()) {
        throw Error("hodge", "BadGram", "expected " + std::to_string(dims.size()) + " Gram matrices");
    }
    for (std::size_t k = 0; k < dims.size(); ++k) {
        const auto& g = grams[k];
        const auto d = static_cast<Eigen::Index>(dims[k]);
        if (g.rows() != d || g.cols() != d) {
            throw Error("hodge", "BadGram", "Gram matrix of degree " + std::to_string(k) + " has the wrong shape");
        }
        if (d == 0) continue;
        const double scale = std::max(1.0, matrix_scale(g));
        if (matrix_scale(g - g.adjoint()) > tol * scale) {
            throw Error("hodge", "BadGram", "Gram matrix of degree " + std::to_string(k) + " is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) <= tol * scale) {
            throw Error("hodge", "BadGram", "Gram matrix of degree " + std::to_string(k) + " is not positive definite");
        }
    }
    return grams;
}

MatrixXcd zero_matrix(std::size_t r, std::size_t c) {
    return MatrixXcd::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

std::size_t kernel_count(const VectorXd& eig, double rank_tol) {
    if (eig.size() == 0) return 0;
    const double top = eig.cwiseAbs().maxCoeff();
    if (top == 0.0) return static_cast<std::size_t>(eig.size());
    const double cutoff = rank_tol * top;
    std::size_t n = 0;
    for (Eigen::Index i = 0; i < eig.size(); ++i)
        if (eig(i) <= cutoff) ++n;
    return n;
}

MatrixXcd to_complex_matrix(const Matrix<Gaussian>& m) { return m.to_eigen(); }

Matrix<Rational> random_invertible(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> entry(-2, 2);
    for (;;) {
        Matrix<Rational> m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
        if (rank(m) == n) return m;
    }
}

}  // namespace

CochainComplex make_complex(std::vector<std::size_t> dims, std::vector<MatrixXcd> differentials,
                            std::vector<MatrixXcd> grams, const ComplexTolerances& tol) {
    check_shapes(
        dims, differentials.size(), [&](std::size_t k) { return static_cast<std::size_t>(differentials[k].rows()); },
        [&](std::size_t k) { return static_cast<std::size_t>(differentials[k].cols()); });
    for (std::size_t k = 0; k + 1 < differentials.size(); ++k) {
        const MatrixXcd prod = differentials[k + 1] * differentials[k];
        const double residual = matrix_scale(prod);
        const double scale = std::max(1.0, matrix_scale(differentials[k + 1]) * matrix_scale(differentials[k]));
        if (residual > tol.validation_tol * scale) {
            throw Error("hodge", "NotAComplex",
                        "D_" + std::to_string(k + 1) + " D_" + std::to_string(k) + " != 0 (max residual " +
                            std::to_string(residual) + " at degree " + std::to_string(k) + ")");
        }
    }
    CochainComplex c;
    c.grams = validate_grams(dims, std::move(grams), tol.validation_tol);
    c.dims = std::move(dims);
    c.differentials = std::move(differentials);
    return c;
}

CochainComplex make_exact_complex(std::vector<std::size_t> dims, std::vector<Matrix<Gaussian>> differentials,
                                  std::vector<MatrixXcd> grams, const ComplexTolerances& tol) {
    check_shapes(
        dims, differentials.size(), [&](std::size_t k) { return differentials[k].rows(); },
        [&](std::size_t k) { return differentials[k].cols(); });
    for (std::size_t k = 0; k + 1 < differentials.size(); ++k) {
        const auto prod = differentials[k + 1] * differentials[k];
        if (!prod.is_zero_matrix()) {
            throw Error("hodge", "NotAComplex",
                        "D_" + std::to_string(k + 1) + " D_" + std::to_string(k) + " != 0 (max residual " +
                            std::to_string(prod.max_abs()) + " at degree " + std::to_string(k) + ")");
        }
    }
    CochainComplex c;
    c.grams = validate_grams(dims, std::move(grams), tol.validation_tol);
    c.dims = std::move(dims);
    for (const auto& d : differentials) c.differentials.push_back(to_complex_matrix(d));
    c.exact_differentials = std::move(differentials);
    return c;
}

HodgePackage::HodgePackage(const CochainComplex& complex, const ComplexTolerances& tol) : complex_(complex), tol_(tol) {
    const std::size_t p = complex_.length();
    const auto& D = complex_.differentials;
    const auto& G = complex_.grams;
    std::vector<MatrixXcd> gram_inv;
    for (std::size_t k = 0; k <= p; ++k) gram_inv.push_back(G[k].llt().solve(MatrixXcd::Identity(G[k].rows(), G[k].cols())));

    for (std::size_t k = 0; k < p; ++k) adjoints_.push_back(gram_inv[k] * D[k].adjoint() * G[k + 1]);

    for (std::size_t k = 0; k <= p; ++k) {
        const std::size_t n = complex_.dims[k];
        MatrixXcd lap = zero_matrix(n, n);
        // Gram-weighted form G_k Delta_k, Hermitian by construction.
        MatrixXcd weighted = zero_matrix(n, n);
        if (k < p) {
            lap += adjoints_[k] * D[k];
            weighted += D[k].adjoint() * G[k + 1] * D[k];
        }
        if (k > 0) {
            lap += D[k - 1] * adjoints_[k - 1];
            weighted += G[k] * D[k - 1] * gram_inv[k - 1] * D[k - 1].adjoint() * G[k];
        }
        laplacians_.push_back(lap);

        VectorXd eig;
        MatrixXcd vecs;
        if (n > 0) {
            const MatrixXcd herm = 0.5 * (weighted + weighted.adjoint());
            const MatrixXcd gram = 0.5 * (G[k] + G[k].adjoint());
            Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXcd> es(herm, gram);
            eig = es.eigenvalues();
            vecs = es.eigenvectors();
        } else {
            vecs = zero_matrix(0, 0);
        }
        const std::size_t kernel = kernel_count(eig, tol_.rank_tol);
        betti_.push_back(kernel);
        harmonic_.push_back(vecs.leftCols(static_cast<Eigen::Index>(kernel)));
        eigenvalues_.push_back(std::move(eig));
        eigenvectors_.push_back(std::move(vecs));
        gram_factors_.push_back(G[k].llt().matrixU());
    }
    for (std::size_t k = 0; k < p; ++k) {
        if (complex_.exact_differentials) {
            ranks_.push_back(rank((*complex_.exact_differentials)[k]));
        } else {
            ranks_.push_back(numerical_rank(D[k], tol_.rank_tol));
        }
    }
}

std::vector<std::size_t> HodgePackage::betti_rank_nullity() const {
    const std::size_t p = complex_.length();
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k <= p; ++k) {
        std::size_t b = complex_.dims[k];
        if (k < p) b -= ranks_[k];
        if (k > 0) b -= ranks_[k - 1];
        out.push_back(b);
    }
    return out;
}

Complex HodgePackage::inner(std::size_t degree, const VectorXcd& u, const VectorXcd& v) const {
    return (u.adjoint() * complex_.grams.at(degree) * v)(0, 0);
}

Decomposition HodgePackage::decompose(std::size_t degree, const VectorXcd& v) const {
    if (degree > complex_.length() || static_cast<std::size_t>(v.size()) != complex_.dims[degree]) {
        throw Error("hodge", "ShapeMismatch", "cochain does not match degree " + std::to_string(degree));
    }
    const std::size_t kernel = betti_[degree];
    const Eigen::Index n = v.size();

    Decomposition out;
    out.exact = VectorXcd::Zero(n);
    out.coexact = VectorXcd::Zero(n);
    if (n == 0) {
        out.harmonic = VectorXcd::Zero(0);
        return out;
    }
    // With G = U^H U and w = U x, harmonic cochains are the w with
    // D_k U^{-1} w = 0 and (U D_{k-1})^H w = 0; take an orthonormal kernel basis.
    const MatrixXcd& U = gram_factors_[degree];
    const auto Ut = U.triangularView<Eigen::Upper>();
    if (kernel > 0) {
        Eigen::Index rows = 0;
        if (degree < complex_.length()) rows += complex_.differentials[degree].rows();
        if (degree > 0) rows += complex_.differentials[degree - 1].cols();
        MatrixXcd M = MatrixXcd::Zero(std::max<Eigen::Index>(rows, n), n);
        Eigen::Index at = 0;
        if (degree < complex_.length()) {
            const MatrixXcd& D = complex_.differentials[degree];
            // D U^{-1} = (U^{-H} D^H)^H
            M.middleRows(at, D.rows()) = U.adjoint().triangularView<Eigen::Lower>().solve(D.adjoint()).adjoint();
            at += D.rows();
        }
        if (degree > 0) {
            const MatrixXcd& D = complex_.differentials[degree - 1];
            M.middleRows(at, D.cols()) = (U * D).adjoint();
        }
        Eigen::JacobiSVD<MatrixXcd> svd(M, Eigen::ComputeFullV);
        const MatrixXcd K = svd.matrixV().rightCols(static_cast<Eigen::Index>(kernel));
        out.harmonic = Ut.solve(K * (K.adjoint() * (U * v)));
    } else {
        out.harmonic = VectorXcd::Zero(n);
    }

    // G-orthogonal projection onto the column space of A (rank r): U^{-1} Q Q^H U,
    // Q an orthonormal basis of col(U A).
    auto project = [&](const MatrixXcd& A, std::size_t r) -> VectorXcd {
        if (r == 0) return VectorXcd::Zero(n);
        Eigen::JacobiSVD<MatrixXcd> svd(U * A, Eigen::ComputeThinU);
        const MatrixXcd Q = svd.matrixU().leftCols(static_cast<Eigen::Index>(r));
        return Ut.solve(Q * (Q.adjoint() * (U * v)));
    };
    if (degree > 0) out.exact = project(complex_.differentials[degree - 1], ranks_[degree - 1]);
    if (degree < complex_.length()) out.coexact = project(adjoints_[degree], ranks_[degree]);
    return out;
}

ZetaDeterminant zeta_det(const VectorXd& eigenvalues, double rank_tol) {
    ZetaDeterminant z;
    if (eigenvalues.size() == 0) return z;
    const double top = eigenvalues.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues(i) < -std::max(1e-9 * top, 1e-12)) {
            throw Error("hodge", "NegativeEigenvalue",
                        "operator has eigenvalue " + std::to_string(eigenvalues(i)) + " < 0");
        }
    }
    const double cutoff = rank_tol * top;
    std::vector<double> nonzero;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (top > 0.0 && eigenvalues(i) > cutoff) {
            nonzero.push_back(eigenvalues(i));
        } else {
            ++z.kernel_dim;
        }
    }
    z.nonzero_count = nonzero.size();
    double log_sum = 0.0;
    for (double l : nonzero) log_sum += std::log(l);
    z.zeta_prime = log_sum;
    z.det_prime = std::exp(log_sum);

    const double h = 1e-4;
    auto zeta = [&](double s) {
        double acc = 0.0;
        for (double l : nonzero) acc += std::exp(-s * std::log(l));
        return acc;
    };
    z.zeta_prime_finite_difference = -(zeta(h) - zeta(-h)) / (2.0 * h);
    return z;
}

ZetaDeterminant zeta_det(const MatrixXcd& op, double rank_tol) {
    if (op.rows() != op.cols()) throw Error("hodge", "ShapeMismatch", "zeta_det needs a square matrix");
    if (op.size() == 0) return {};
    const double scale = std::max(1.0, matrix_scale(op));
    if (matrix_scale(op - op.adjoint()) > 1e-10 * scale) {
        throw Error("hodge", "NotHermitian", "zeta_det needs a Hermitian matrix");
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (op + op.adjoint()), Eigen::EigenvaluesOnly);
    return zeta_det(VectorXd(es.eigenvalues()), rank_tol);
}

TorsionReport rs_torsion(const HodgePackage& package, const ComplexTolerances& tol) {
    TorsionReport r;
    const auto& c = package.complex();
    r.dims = c.dims;
    r.betti = package.betti();
    r.eigenvalues = package.eigenvalues();
    for (std::size_t i = 0; i <= c.length(); ++i) {
        r.determinants.push_back(zeta_det(package.eigenvalues()[i], tol.rank_tol));
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        r.log_torsion += 0.5 * sign * static_cast<double>(i) * r.determinants.back().zeta_prime;
    }
    r.torsion = std::exp(r.log_torsion);
    if (c.length() >= 1) {
        r.cs_partition =
            std::pow(r.determinants[1].det_prime, -0.25) * std::pow(r.determinants[0].det_prime, 0.75);
    }
    return r;
}

TorsionReport rs_torsion(const CochainComplex& complex, const ComplexTolerances& tol) {
    return rs_torsion(HodgePackage(complex, tol), tol);
}

double abelian_cs_partition(const CochainComplex& complex, const ComplexTolerances& tol) {
    if (complex.length() < 1) throw Error("hodge", "ShapeMismatch", "CS partition needs degrees 0 and 1");
    return *rs_torsion(complex, tol).cs_partition;
}

CochainComplex twisted_circle_complex(Complex alpha, std::size_t n) {
    if (n == 0) throw Error("hodge", "InvalidArgument", "circle needs at least one point");
    if (std::abs(std::abs(alpha) - 1.0) > 1e-12) throw Error("hodge", "InvalidArgument", "holonomy must have modulus 1");
    auto integral = [](double x) { return x == std::round(x); };
    if (integral(alpha.real()) && integral(alpha.imag())) {
        const Gaussian a(Rational(static_cast<long>(alpha.real())), Rational(static_cast<long>(alpha.imag())));
        Matrix<Gaussian> d(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            d(j, j) -= Gaussian(1);
            if (j + 1 < n) {
                d(j, j + 1) += Gaussian(1);
            } else {
                d(j, 0) += a;
            }
        }
        return make_exact_complex({n, n}, {d});
    }
    MatrixXcd d = -MatrixXcd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const auto r = static_cast<Eigen::Index>(j);
        if (j + 1 < n) {
            d(r, r + 1) += 1.0;
        } else {
            d(r, 0) += alpha;
        }
    }
    return make_complex({n, n}, {d});
}

CochainComplex direct_sum(const CochainComplex& a, const CochainComplex& b) {
    const std::size_t len = std::max(a.dims.size(), b.dims.size());
    auto dim_of = [](const CochainComplex& c, std::size_t k) { return k < c.dims.size() ? c.dims[k] : 0; };
    std::vector<std::size_t> dims(len);
    for (std::size_t k = 0; k < len; ++k) dims[k] = dim_of(a, k) + dim_of(b, k);

    auto diff_of = [&](const CochainComplex& c, std::size_t k) {
        return k < c.differentials.size() ? c.differentials[k] : zero_matrix(dim_of(c, k + 1), dim_of(c, k));
    };
    auto gram_of = [&](const CochainComplex& c, std::size_t k) {
        return k < c.grams.size() ? c.grams[k] : zero_matrix(0, 0);
    };
    auto block = [](const MatrixXcd& x, const MatrixXcd& y) {
        MatrixXcd m = MatrixXcd::Zero(x.rows() + y.rows(), x.cols() + y.cols());
        m.topLeftCorner(x.rows(), x.cols()) = x;
        m.bottomRightCorner(y.rows(), y.cols()) = y;
        return m;
    };

    CochainComplex out;
    out.dims = dims;
    for (std::size_t k = 0; k + 1 < len; ++k) out.differentials.push_back(block(diff_of(a, k), diff_of(b, k)));
    for (std::size_t k = 0; k < len; ++k) out.grams.push_back(block(gram_of(a, k), gram_of(b, k)));
    if (a.exact_differentials && b.exact_differentials) {
        std::vector<Matrix<Gaussian>> exact;
        for (std::size_t k = 0; k + 1 < len; ++k) {
            Matrix<Gaussian> m(dims[k + 1], dims[k]);
            const std::size_t ar = dim_of(a, k + 1), ac = dim_of(a, k);
            if (k < a.exact_differentials->size()) {
                const auto& x = (*a.exact_differentials)[k];
                for (std::size_t i = 0; i < x.rows(); ++i)
                    for (std::size_t j = 0; j < x.cols(); ++j) m(i, j) = x(i, j);
            }
            if (k < b.exact_differentials->size()) {
                const auto& y = (*b.exact_differentials)[k];
                for (std::size_t i = 0; i < y.rows(); ++i)
                    for (std::size_t j = 0; j < y.cols(); ++j) m(ar + i, ac + j) = y(i, j);
            }
            exact.push_back(std::move(m));
        }
        out.exact_differentials = std::move(exact);
    }
    return out;
}

CochainComplex unitary_conjugate(const CochainComplex& c, const std::vector<MatrixXcd>& unitaries) {
    if (unitaries.size() != c.dims.size()) throw Error("hodge", "ShapeMismatch", "one unitary per degree required");
    CochainComplex out;
    out.dims = c.dims;
    for (std::size_t k = 0; k < c.differentials.size(); ++k)
        out.differentials.push_back(unitaries[k + 1] * c.differentials[k] * unitaries[k].adjoint());
    for (std::size_t k = 0; k < c.grams.size(); ++k)
        out.grams.push_back(unitaries[k] * c.grams[k] * unitaries[k].adjoint());
    return out;
}

RandomComplex random_complex(std::mt19937_64& rng, std::size_t max_dim, std::size_t max_length) {
    if (max_dim == 0 || max_length == 0) throw Error("hodge", "InvalidArgument", "random complex needs positive sizes");
    const std::size_t p = std::uniform_int_distribution<std::size_t>(1, max_length)(rng);
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    // Degree k splits as [image of D_{k-1} | harmonic | source of D_k].
    std::vector<std::size_t> ranks(p + 1, 0), betti(p + 1, 0), dims(p + 1, 0);
    for (std::size_t k = 0; k <= p; ++k) {
        const std::size_t incoming = k > 0 ? ranks[k - 1] : 0;
        const std::size_t room = max_dim - incoming;
        ranks[k] = k < p ? pick(0, std::min(room, max_dim / 2)) : 0;
        betti[k] = pick(0, room - ranks[k]);
        if (incoming + betti[k] + ranks[k] == 0) betti[k] = 1;
        dims[k] = incoming + betti[k] + ranks[k];
    }

    std::vector<Matrix<Rational>> basis_change, basis_change_inv;
    for (std::size_t k = 0; k <= p; ++k) {
        basis_change.push_back(random_invertible(rng, dims[k]));
        basis_change_inv.push_back(inverse(basis_change.back()));
    }
    std::uniform_int_distribution<int> weight(1, 3);
    std::uniform_int_distribution<int> gram_entry(-2, 2);
    std::vector<Matrix<Gaussian>> differentials;
    for (std::size_t k = 0; k < p; ++k) {
        Matrix<Rational> d(dims[k + 1], dims[k]);
        const std::size_t source = dims[k] - ranks[k];
        for (std::size_t i = 0; i < ranks[k]; ++i) {
            const int magnitude = weight(rng);
            const int sign = weight(rng) == 1 ? -1 : 1;
            d(i, source + i) = magnitude * sign;
        }
        const Matrix<Rational> conj = basis_change[k + 1] * d * basis_change_inv[k];
        differentials.push_back(conj.cast<Gaussian>());
    }
    std::vector<MatrixXcd> grams;
    for (std::size_t k = 0; k <= p; ++k) {
        const auto n = static_cast<Eigen::Index>(dims[k]);
        Eigen::MatrixXd a(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gram_entry(rng);
        grams.push_back((a * a.transpose() + Eigen::MatrixXd::Identity(n, n)).cast<Complex>());
    }
    RandomComplex out;
    out.complex = make_exact_complex(dims, std::move(differentials), std::move(grams));
    out.betti = betti;
    return out;
}

}  // namespace nchodge
