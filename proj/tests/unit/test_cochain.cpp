#include <cmath>
#include <random>

#include "nchodge/cochain.hpp"
#include "nchodge/io.hpp"
#include "support.hpp"

using namespace nchodge;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using test::error_code;

namespace {

MatrixXcd scalar_matrix(Complex x) {
    MatrixXcd m(1, 1);
    m(0, 0) = x;
    return m;
}

// Product of nonzero eigenvalues of D^H D, computed directly.
double direct_det_prime(const MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m.adjoint() * m);
    double p = 1.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 1e-9) p *= es.eigenvalues()(i);
    return p;
}

}  // namespace

TEST_CASE("complex validation") {
    auto trivial = make_complex({1, 1}, {MatrixXcd::Zero(1, 1)});
    CHECK(HodgePackage(trivial).betti() == std::vector<std::size_t>{1, 1});

    auto acyclic = make_complex({1, 1}, {scalar_matrix(-2.0)});
    CHECK(HodgePackage(acyclic).betti() == std::vector<std::size_t>{0, 0});

    CHECK(error_code([] { make_complex({1, 1, 1}, {scalar_matrix(1.0), scalar_matrix(1.0)}); }) ==
          "hodge.NotAComplex");
    CHECK(error_code([] { make_complex({2, 1}, {scalar_matrix(1.0)}); }) == "hodge.ShapeMismatch");
    CHECK(error_code([] { make_complex({1, 1}, {scalar_matrix(1.0)}, {scalar_matrix(-1.0), scalar_matrix(1.0)}); }) ==
          "hodge.BadGram");
}

TEST_CASE("twisted circle Betti numbers") {
    CHECK(HodgePackage(twisted_circle_complex(-1.0, 8)).betti() == std::vector<std::size_t>{0, 0});
    CHECK(HodgePackage(twisted_circle_complex(1.0, 8)).betti() == std::vector<std::size_t>{1, 1});
    CHECK(error_code([] { twisted_circle_complex(1.0, 0); }) == "hodge.InvalidArgument");
    CHECK(error_code([] { twisted_circle_complex(2.0, 4); }) == "hodge.InvalidArgument");
}

TEST_CASE("decomposing a harmonic cochain returns it unchanged") {
    HodgePackage pkg(twisted_circle_complex(1.0, 6));
    const VectorXcd h = pkg.harmonic_bases()[1].col(0) * Complex(2.0, -1.0);
    const auto dec = pkg.decompose(1, h);
    CHECK((dec.harmonic - h).norm() < 1e-12);
    CHECK(dec.exact.norm() < 1e-12);
    CHECK(dec.coexact.norm() < 1e-12);
    CHECK(error_code([&] { pkg.decompose(1, VectorXcd::Zero(3)); }) == "hodge.ShapeMismatch");
}

TEST_CASE("decomposition of random complexes") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rc = random_complex(rng);
        HodgePackage pkg(rc.complex);
        CHECK(pkg.betti() == rc.betti);
        CHECK(pkg.betti_rank_nullity() == rc.betti);
        for (std::size_t k = 0; k < rc.complex.dims.size(); ++k) {
            const auto n = static_cast<Eigen::Index>(rc.complex.dims[k]);
            const VectorXcd v = VectorXcd::Random(n);
            const auto dec = pkg.decompose(k, v);
            CHECK((dec.harmonic + dec.exact + dec.coexact - v).norm() < 1e-10 * std::max(1.0, v.norm()));
            CHECK(std::abs(pkg.inner(k, dec.exact, dec.coexact)) < 1e-10 * std::max(1.0, v.squaredNorm()));
            if (k + 1 < rc.complex.dims.size())
                CHECK((rc.complex.differentials[k] * dec.harmonic).norm() < 1e-9 * std::max(1.0, v.norm()));
        }
    }
}

TEST_CASE("zeta-regularized determinants") {
    Eigen::VectorXd ev(3);
    ev << 0.0, 2.0, 3.0;
    const auto z = zeta_det(ev);
    CHECK(z.det_prime == doctest::Approx(6.0));
    CHECK(z.kernel_dim == 1);
    CHECK(z.zeta_prime == doctest::Approx(std::log(6.0)));
    CHECK(z.zeta_prime_finite_difference == doctest::Approx(std::log(6.0)).epsilon(1e-6));

    CHECK(zeta_det(MatrixXcd(MatrixXcd::Identity(5, 5))).det_prime == doctest::Approx(1.0));
    CHECK(zeta_det(MatrixXcd(MatrixXcd::Zero(3, 3))).det_prime == 1.0);

    Eigen::VectorXd neg(2);
    neg << -1.0, 2.0;
    CHECK(error_code([&] { zeta_det(neg); }) == "hodge.NegativeEigenvalue");
    MatrixXcd nh = MatrixXcd::Zero(2, 2);
    nh(0, 1) = 1.0;
    CHECK(error_code([&] { zeta_det(nh); }) == "hodge.NotHermitian");
}

TEST_CASE("twisted circle determinants match eigenvalue products") {
    for (std::size_t n : {3, 8, 17}) {
        CAPTURE(n);
        const auto c = twisted_circle_complex(-1.0, n);
        HodgePackage pkg(c);
        const double oracle = direct_det_prime(c.differentials[0]);
        CHECK(oracle == doctest::Approx(4.0).epsilon(1e-10));
        CHECK(zeta_det(pkg.eigenvalues()[0]).det_prime == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(rs_torsion(c).torsion == doctest::Approx(0.5).epsilon(1e-10));
    }
    const auto c = twisted_circle_complex(Complex(0.0, 1.0), 5);
    CHECK(zeta_det(HodgePackage(c).eigenvalues()[0]).det_prime == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("analytic torsion") {
    const auto t = rs_torsion(twisted_circle_complex(-1.0, 8));
    CHECK(t.log_torsion == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    REQUIRE(t.cs_partition.has_value());
    CHECK(*t.cs_partition == doctest::Approx(2.0).epsilon(1e-12));

    const auto zero = make_complex({2, 3, 1}, {MatrixXcd::Zero(3, 2), MatrixXcd::Zero(1, 3)});
    CHECK(rs_torsion(zero).log_torsion == 0.0);

    const auto a = twisted_circle_complex(-1.0, 3);
    const auto b = twisted_circle_complex(Complex(0.0, 1.0), 5);
    const double sum = rs_torsion(a).log_torsion + rs_torsion(b).log_torsion;
    CHECK(rs_torsion(direct_sum(a, b)).log_torsion == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("abelian Chern-Simons partition function") {
    const auto engineered = cochain_complex_from_json(read_json_file(test::data_path("complexes/engineered_cs.json")));
    HodgePackage pkg(engineered);
    CHECK(zeta_det(pkg.eigenvalues()[0]).det_prime == doctest::Approx(2.0));
    CHECK(zeta_det(pkg.eigenvalues()[1]).det_prime == doctest::Approx(4.0));
    CHECK(abelian_cs_partition(engineered) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));

    const auto unit = make_complex({1, 1}, {scalar_matrix(1.0)});
    CHECK(abelian_cs_partition(unit) == doctest::Approx(1.0));
    CHECK(error_code([] { abelian_cs_partition(make_complex({3}, {})); }) == "hodge.ShapeMismatch");
}

TEST_CASE("unitary conjugation preserves spectra") {
    const auto c = twisted_circle_complex(Complex(0.0, 1.0), 4);
    Eigen::HouseholderQR<MatrixXcd> qr(MatrixXcd::Random(4, 4));
    const MatrixXcd u = qr.householderQ();
    const auto conj = unitary_conjugate(c, {u, u});
    CHECK(rs_torsion(conj).log_torsion == doctest::Approx(rs_torsion(c).log_torsion).epsilon(1e-12));
}
