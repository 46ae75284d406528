#include "nchodge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "nchodge/error.hpp"

namespace nchodge {

namespace {

template <class S>
bool matrix_vanishes(const Matrix<S>& m, double tol) {
    if constexpr (ScalarTraits<S>::exact) {
        (void)tol;
        return m.is_zero_matrix();
    } else {
        return m.max_abs() <= tol;
    }
}

double nearest_root_distance(std::size_t degree) {
    // Smallest gap between 1 and any other admissible root: 2 sin(pi / (n + 1)).
    if (degree == 0) return 1.0;
    return 2.0 * std::sin(std::numbers::pi / static_cast<double>(degree + 1));
}

template <class S>
Matrix<S> annihilator_residual(const Matrix<S>& k, std::size_t degree) {
    const auto id = Matrix<S>::identity(k.rows());
    if (degree == 0) return k - id;
    return (matrix_power(k, static_cast<unsigned>(degree)) - id) * (matrix_power(k, static_cast<unsigned>(degree + 1)) - id);
}

template <class S>
Matrix<S> projection_block(const FormsWindow<S>& window, std::size_t degree, ProjectionMethod method,
                           const SpectralTolerances& tol) {
    const Matrix<S>& k = window.k_block(degree);
    const std::size_t dim = k.rows();
    if (dim == 0) return Matrix<S>(0, 0);

    const Matrix<S> relation = annihilator_residual(k, degree);
    if (!matrix_vanishes(relation, tol.residual_tol)) {
        throw Error("spectral", "PolynomialRelationViolated",
                    "(k^n - 1)(k^{n+1} - 1) != 0 on degree " + std::to_string(degree) + " (max residual " +
                        std::to_string(relation.max_abs()) + ")");
    }

    if (method == ProjectionMethod::automatic) {
        method = ScalarTraits<S>::exact ? ProjectionMethod::polynomial : ProjectionMethod::riesz;
    }
    if (method == ProjectionMethod::polynomial) {
        if (degree == 0) return Matrix<S>::identity(dim);
        return evaluate(karoubi_polynomials(degree).projector, k);
    }
    if constexpr (ScalarTraits<S>::exact) {
        throw Error("spectral", "InvalidArgument", "contour-integral projection needs float mode");
    } else {
        const Eigen::MatrixXcd ke = k.to_eigen();
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(ke, false);
        const double band = std::sqrt(tol.eig_tol);
        const double gap = nearest_root_distance(degree);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const double dist = std::abs(es.eigenvalues()(i) - Complex(1.0, 0.0));
            if (dist > band && dist < gap - band) {
                throw Error("spectral", "NumericalRankAmbiguous",
                            "eigenvalue at distance " + std::to_string(dist) + " from 1 on degree " +
                                std::to_string(degree));
            }
        }
        return from_eigen(riesz_projection(ke, degree, tol.riesz_nodes));
    }
}

template <class S>
Matrix<S> green_block(const FormsWindow<S>& window, std::size_t degree, const Matrix<S>& P, const Matrix<S>& P_perp,
                      const SpectralTolerances& tol) {
    const Matrix<S>& k = window.k_block(degree);
    const std::size_t dim = k.rows();
    const auto id = Matrix<S>::identity(dim);
    const Matrix<S> one_minus_k = id - k;
    Matrix<S> G(dim, dim);
    if (dim == 0) return G;
    if constexpr (ScalarTraits<S>::exact) {
        (void)P;
        if (degree > 0) G = evaluate(karoubi_polynomials(degree).green, k) * P_perp;
    } else {
        // (1 - k) + P is invertible: nilpotent + identity on Im P, (1 - k) on Im P_perp.
        Eigen::FullPivLU<Eigen::MatrixXcd> lu((one_minus_k + P).to_eigen());
        if (!lu.isInvertible()) {
            throw Error("spectral", "SingularOnComplement", "(1 - k) + P is singular on degree " + std::to_string(degree));
        }
        G = from_eigen(P_perp.to_eigen() * lu.inverse());
    }
    const Matrix<S> r1 = G * one_minus_k - P_perp;
    const Matrix<S> r2 = one_minus_k * G - P_perp;
    if (!matrix_vanishes(r1, tol.residual_tol) || !matrix_vanishes(r2, tol.residual_tol)) {
        throw Error("spectral", "SingularOnComplement",
                    "(1 - k) is not inverted by G on Im(P_perp) at degree " + std::to_string(degree));
    }
    return G;
}

std::size_t euler_phi(std::size_t n) {
    std::size_t count = 0;
    for (std::size_t j = 1; j <= n; ++j)
        if (std::gcd(j, n) == 1) ++count;
    return count;
}

template <class S>
void check_degree_below_top(const FormsWindow<S>& window, std::size_t degree, const char* what) {
    if (degree + 1 > window.n_max()) {
        throw Error("forms", "DegreeOutOfWindow",
                    std::string(what) + " needs degree <= n_max - 1 (got " + std::to_string(degree) + ", n_max " +
                        std::to_string(window.n_max()) + ")");
    }
}

}  // namespace

KaroubiPolynomials karoubi_polynomials(std::size_t degree) {
    KaroubiPolynomials out;
    if (degree == 0) {
        out.annihilator = Polynomial({Rational(-1), Rational(1)});
        out.cofactor = Polynomial::constant(1);
        out.projector = Polynomial::constant(1);
        out.green = Polynomial();
        return out;
    }
    out.annihilator = Polynomial::x_pow_minus_one(degree) * Polynomial::x_pow_minus_one(degree + 1);
    const Polynomial x_minus_one({Rational(-1), Rational(1)});
    const Polynomial double_root = x_minus_one * x_minus_one;
    Polynomial q, rem;
    Polynomial::divmod(out.annihilator, double_root, q, rem);
    if (!rem.is_zero()) throw Error("spectral", "InternalError", "(x-1)^2 does not divide the annihilator");
    out.cofactor = q;

    Polynomial g, s, t;
    extended_gcd(double_root, q, g, s, t);
    if (!(g == Polynomial::constant(1))) throw Error("spectral", "InternalError", "(x-1)^2 and cofactor not coprime");
    // s (x-1)^2 + t q = 1: r = t q is 1 mod (x-1)^2 and 0 mod q.
    out.projector = (t * q) % out.annihilator;

    const Polynomial one_minus_x({Rational(1), Rational(-1)});
    Polynomial g2, s2, t2;
    extended_gcd(one_minus_x, q, g2, s2, t2);
    if (!(g2 == Polynomial::constant(1))) throw Error("spectral", "InternalError", "1 - x and cofactor not coprime");
    out.green = s2 % q;
    return out;
}

std::vector<std::size_t> admissible_orders(std::size_t degree) {
    if (degree == 0) return {1};
    std::vector<std::size_t> orders;
    for (std::size_t d = 1; d <= degree + 1; ++d)
        if (degree % d == 0 || (degree + 1) % d == 0) orders.push_back(d);
    return orders;
}

Eigen::MatrixXcd riesz_projection(const Eigen::MatrixXcd& k, std::size_t degree, std::size_t nodes) {
    const Eigen::Index n = k.rows();
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
    if (n == 0) return P;
    const double radius = nearest_root_distance(degree) / 2.0;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    for (std::size_t j = 0; j < nodes; ++j) {
        const double theta = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(nodes);
        const Complex w = radius * std::exp(Complex(0.0, theta));
        const Complex z = Complex(1.0, 0.0) + w;
        // dz / (2 pi i) = w dtheta / (2 pi)
        P += (w / static_cast<double>(nodes)) * (z * id - k).partialPivLu().solve(id);
    }
    return P;
}

template <class S>
SpectralData<S> harmonic_projection(const FormsWindow<S>& window, std::size_t degree, ProjectionMethod method,
                                    const SpectralTolerances& tol) {
    check_degree_below_top(window, degree, "harmonic_projection");
    SpectralData<S> data;
    data.degree = degree;
    data.P = projection_block(window, degree, method, tol);
    data.P_perp = Matrix<S>::identity(data.P.rows()) - data.P;
    return data;
}

template <class S>
void greens_operator(const FormsWindow<S>& window, SpectralData<S>& data, const SpectralTolerances& tol) {
    data.G = green_block(window, data.degree, data.P, data.P_perp, tol);
}

template <class S>
SpectralData<S> spectral_data(const FormsWindow<S>& window, std::size_t degree, ProjectionMethod method,
                              const SpectralTolerances& tol) {
    auto data = harmonic_projection(window, degree, method, tol);
    greens_operator(window, data, tol);
    return data;
}

template <class S>
HodgeSplit<S> hodge_split(const FormsWindow<S>& window, const Form<S>& form, const SpectralTolerances& tol) {
    HodgeSplit<S> out;
    for (const auto& [n, coeffs] : form.components) {
        check_degree_below_top(window, n, "hodge_split");
        if (coeffs.size() != window.degree_dim(n)) throw Error("forms", "ShapeMismatch", "form component has wrong length");
        const auto data = spectral_data(window, n, ProjectionMethod::automatic, tol);
        const Matrix<S>& G = *data.G;
        const std::vector<S> perp = data.P_perp * std::span<const S>(coeffs);
        out.harmonic.components[n] = data.P * std::span<const S>(coeffs);

        std::vector<S> d_part(coeffs.size(), from_int<S>(0));
        if (n > 0) {
            const Matrix<S> gdb = G * (window.d_block(n - 1) * window.b_block(n));
            d_part = gdb * std::span<const S>(perp);
            if (!in_column_space(window.d_block(n - 1), from_columns<S>(coeffs.size(), {d_part}))) {
                throw Error("spectral", "MembershipViolation", "exact part is not in Im(d) at degree " + std::to_string(n));
            }
        }
        const Matrix<S> gbd = G * (window.b_block(n + 1) * window.d_block(n));
        std::vector<S> b_part = gbd * std::span<const S>(perp);
        if (!in_column_space(window.b_block(n + 1), from_columns<S>(coeffs.size(), {b_part}))) {
            throw Error("spectral", "MembershipViolation", "coexact part is not in Im(b) at degree " + std::to_string(n));
        }
        out.d_part.components[n] = std::move(d_part);
        out.b_part.components[n] = std::move(b_part);
    }
    return out;
}

template <class S>
RescaledLaplacianCheck rescaled_laplacian_check(const FormsWindow<S>& window, std::size_t degree,
                                                const SpectralTolerances& tol) {
    const auto data = harmonic_projection(window, degree, ProjectionMethod::automatic, tol);
    const Matrix<S> L = window.L_block(degree);
    const Matrix<S> LP = L * data.P;
    RescaledLaplacianCheck out;
    out.norm_on_P = LP.to_eigen().norm();
    out.exact_zero_on_P = LP.is_zero_matrix();

    const Eigen::MatrixXcd perp = data.P_perp.to_eigen();
    if (perp.rows() == 0) return out;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(perp, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > std::max(1e-10 * sv(0), 1e-12)) ++r;
    if (r == 0) return out;
    const Eigen::MatrixXcd basis = svd.matrixU().leftCols(r);
    Eigen::JacobiSVD<Eigen::MatrixXcd> lsvd(L.to_eigen() * basis);
    out.min_singular_on_P_perp = lsvd.singularValues()(lsvd.singularValues().size() - 1);
    return out;
}

template <class S>
std::vector<EigenvalueEntry> spectrum_report(const FormsWindow<S>& window, std::size_t degree,
                                             const SpectralTolerances& tol, std::vector<OrderTotal>* order_totals) {
    const Matrix<S>& k = window.k_block(degree);
    const auto orders = admissible_orders(degree);
    std::vector<EigenvalueEntry> entries;
    for (auto d : orders)
        for (std::size_t j = 0; j < d; ++j)
            if (std::gcd(j, d) == 1 || (d == 1 && j == 0)) {
                const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(d);
                entries.push_back({d, j, std::polar(1.0, angle), 0});
            }

    if (k.rows() > 0) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(k.to_eigen(), false);
        const double snap = std::sqrt(tol.eig_tol);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const Complex lambda = es.eigenvalues()(i);
            std::size_t best = 0;
            double best_dist = std::abs(lambda - entries[0].value);
            for (std::size_t e = 1; e < entries.size(); ++e) {
                const double dist = std::abs(lambda - entries[e].value);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = e;
                }
            }
            if (best_dist > snap) {
                throw Error("spectral", "NonUnitRootEigenvalue",
                            "eigenvalue (" + std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) +
                                ") is not an admissible root of unity on degree " + std::to_string(degree));
            }
            ++entries[best].multiplicity;
        }
    }

    std::vector<OrderTotal> totals;
    for (auto d : orders) {
        OrderTotal t{d, 0, ScalarTraits<S>::exact};
        for (const auto& e : entries)
            if (e.order == d) t.multiplicity += e.multiplicity;
        totals.push_back(t);
    }
    if constexpr (ScalarTraits<S>::exact) {
        const std::size_t dim = k.rows();
        const auto id = Matrix<S>::identity(dim);
        std::size_t sum = 0;
        for (auto& t : totals) {
            std::size_t exact_total = 0;
            if (t.order == 1) {
                const Matrix<S> omk = id - k;
                exact_total = dim - rank(omk * omk);
            } else {
                exact_total = dim - rank(evaluate(Polynomial::cyclotomic(t.order), k));
            }
            if (exact_total != t.multiplicity) {
                throw Error("spectral", "SpectrumMismatch",
                            "order-" + std::to_string(t.order) + " multiplicity: exact " + std::to_string(exact_total) +
                                ", float shadow " + std::to_string(t.multiplicity));
            }
            if (t.order > 1 && exact_total % euler_phi(t.order) != 0 && ScalarTraits<S>::mode == ScalarMode::rational) {
                throw Error("spectral", "SpectrumMismatch", "conjugate roots with unequal multiplicity");
            }
            sum += exact_total;
        }
        if (sum != dim) {
            throw Error("spectral", "PolynomialRelationViolated",
                        "generalized eigenspaces of admissible roots do not fill degree " + std::to_string(degree));
        }
    }
    if (order_totals) *order_totals = std::move(totals);

    std::vector<EigenvalueEntry> nonzero;
    for (auto& e : entries)
        if (e.multiplicity > 0) nonzero.push_back(e);
    return nonzero;
}

template <class S>
DegreeInvariants degree_invariants(const FormsWindow<S>& window, std::size_t degree, const SpectralTolerances& tol) {
    check_degree_below_top(window, degree, "degree_invariants");
    const std::size_t n = degree;
    DegreeInvariants inv;
    inv.degree = n;
    inv.dim = window.degree_dim(n);

    const auto data = spectral_data(window, n, ProjectionMethod::automatic, tol);
    const Matrix<S>& P = data.P;
    const Matrix<S>& Pp = data.P_perp;
    const Matrix<S>& G = *data.G;
    const Matrix<S>& k = window.k_block(n);
    const Matrix<S>& k_up = window.k_block(n + 1);
    const Matrix<S>& d = window.d_block(n);
    const Matrix<S>& b_up = window.b_block(n + 1);
    const auto id = Matrix<S>::identity(inv.dim);
    const Matrix<S> omk = id - k;
    const Matrix<S> omk_sq = omk * omk;
    const auto un = static_cast<unsigned>(n);

    auto add = [&](std::string name, const Matrix<S>& m) { inv.residuals.push_back(make_residual(std::move(name), m)); };

    // Operator identities.
    add("(bd+db)-(1-k)", window.laplacian_block(n) - omk);
    add("(k^n-1)(k^(n+1)-1)", annihilator_residual(k, n));
    add("k^(n+1) d - d", matrix_power(k_up, un + 1) * d - d);
    add("k^n - 1 - b k^n d", matrix_power(k, un) - id - b_up * matrix_power(k_up, un) * d);
    {
        Matrix<S> r = matrix_power(k, un + 1) - id;
        if (n > 0) r += window.d_block(n - 1) * window.b_block(n);
        add("k^(n+1) - 1 + db", r);
    }
    if (n + 2 <= window.n_max()) add("d^2", window.d_block(n + 1) * d);
    if (n + 1 >= 2) add("b^2 (degree n+1)", window.b_block(n) * b_up);
    add("kd - dk", k_up * d - d * k);
    add("kb - bk (degree n+1)", k * b_up - b_up * k_up);

    // Harmonic projection and Green's operator.
    add("P^2 - P", P * P - P);
    add("P P_perp", P * Pp);
    add("(1-k)^2 P", omk_sq * P);
    add("Pk - kP", P * k - k * P);
    add("G P", G * P);
    add("G(1-k) - P_perp", G * omk - Pp);
    add("(1-k)G - P_perp", omk * G - Pp);
    add("G(bd+db) - P_perp", G * window.laplacian_block(n) - Pp);

    // Commutation with d and b across degrees (top degree blocks use the intrinsic k).
    const Matrix<S> P_up = projection_block(window, n + 1, ProjectionMethod::automatic, tol);
    const Matrix<S> Pp_up = Matrix<S>::identity(P_up.rows()) - P_up;
    const Matrix<S> G_up = green_block(window, n + 1, P_up, Pp_up, tol);
    add("P d - d P", P_up * d - d * P);
    add("G d - d G", G_up * d - d * G);
    add("P b - b P (degree n+1)", P * b_up - b_up * P_up);
    add("G b - b G (degree n+1)", G * b_up - b_up * G_up);

    // Exact / coexact splitting of Im(P_perp).
    Matrix<S> db_part(inv.dim, inv.dim);
    if (n > 0) db_part = window.d_block(n - 1) * window.b_block(n);
    const Matrix<S> X = G * db_part * Pp;
    const Matrix<S> Y = G * (b_up * d) * Pp;
    add("(Gdb + Gbd) P_perp - P_perp", X + Y - Pp);
    add("(Gdb)^2 - Gdb on P_perp", X * X - X);
    add("(Gbd)^2 - Gbd on P_perp", Y * Y - Y);
    add("Gdb Gbd on P_perp", X * Y);
    bool images_ok = in_column_space(b_up, Y);
    if (n > 0) {
        images_ok = images_ok && in_column_space(window.d_block(n - 1), X);
    } else {
        images_ok = images_ok && matrix_vanishes(X, tol.residual_tol);
    }
    Residual membership;
    membership.name = "images of Gdb, Gbd inside Im(d), Im(b)";
    membership.exact = true;
    membership.exact_zero = images_ok;
    membership.value = images_ok ? 0.0 : 1.0;
    if constexpr (ScalarTraits<S>::exact) membership.exact_value = Rational(images_ok ? 0 : 1);
    inv.residuals.push_back(membership);

    // Ranks of the harmonic decomposition.
    inv.rank_P = rank(P);
    inv.rank_P_perp = rank(Pp);
    inv.rank_one_minus_k_sq = rank(omk_sq);
    if constexpr (ScalarTraits<S>::exact) {
        inv.dim_ker_one_minus_k_sq = kernel_basis(omk_sq).cols();
    } else {
        inv.dim_ker_one_minus_k_sq = inv.dim - inv.rank_one_minus_k_sq;
    }

    inv.laplacian = rescaled_laplacian_check(window, n, tol);
    inv.eigenvalues = spectrum_report(window, n, tol, &inv.order_totals);

    // Reading with P in place of P_perp: d(P Omega^{n-1}) + b(P Omega^{n+1}).
    Matrix<S> dP(inv.dim, 0);
    if (n > 0) {
        const Matrix<S> P_down = projection_block(window, n - 1, ProjectionMethod::automatic, tol);
        dP = window.d_block(n - 1) * P_down;
    }
    const Matrix<S> span = hstack(dP, b_up * P_up);
    inv.rank_dP_plus_bP = rank(span);
    inv.statement_reading_holds = inv.rank_dP_plus_bP == inv.rank_P_perp && matrix_vanishes(P * span, tol.residual_tol);
    return inv;
}

#define NCHODGE_INSTANTIATE_SPECTRAL(S)                                                                                 \
    template SpectralData<S> harmonic_projection<S>(const FormsWindow<S>&, std::size_t, ProjectionMethod,             \
                                                    const SpectralTolerances&);                                       \
    template void greens_operator<S>(const FormsWindow<S>&, SpectralData<S>&, const SpectralTolerances&);             \
    template SpectralData<S> spectral_data<S>(const FormsWindow<S>&, std::size_t, ProjectionMethod,                   \
                                              const SpectralTolerances&);                                             \
    template HodgeSplit<S> hodge_split<S>(const FormsWindow<S>&, const Form<S>&, const SpectralTolerances&);          \
    template RescaledLaplacianCheck rescaled_laplacian_check<S>(const FormsWindow<S>&, std::size_t,                   \
                                                                const SpectralTolerances&);                           \
    template std::vector<EigenvalueEntry> spectrum_report<S>(const FormsWindow<S>&, std::size_t,                      \
                                                             const SpectralTolerances&, std::vector<OrderTotal>*);     \
    template DegreeInvariants degree_invariants<S>(const FormsWindow<S>&, std::size_t, const SpectralTolerances&);

NCHODGE_INSTANTIATE_SPECTRAL(Rational)
NCHODGE_INSTANTIATE_SPECTRAL(Gaussian)
NCHODGE_INSTANTIATE_SPECTRAL(Complex)

}  // namespace nchodge
