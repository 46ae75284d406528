#include <cmath>
#include <numbers>

#include "nchodge/spectral.hpp"
#include "support.hpp"

using namespace nchodge;
using test::q;

namespace {

FormsWindow<Rational> dual_window() { return FormsWindow<Rational>(algebras::dual_numbers<Rational>(), 3); }

Matrix<Rational> diag(std::initializer_list<long> xs) {
    Matrix<Rational> m(xs.size(), xs.size());
    std::size_t i = 0;
    for (long x : xs) {
        m(i, i) = x;
        ++i;
    }
    return m;
}

bool degree_equals(const Form<Rational>& f, std::size_t degree, const std::vector<Rational>& expect) {
    for (const auto& [d, c] : f.components) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Rational e = d == degree ? expect.at(i) : Rational(0);
            if (c[i] != e) return false;
        }
    }
    if (!f.at(degree)) {
        for (const auto& e : expect)
            if (e != 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("polynomials attached to the Karoubi operator") {
    for (std::size_t n = 1; n <= 5; ++n) {
        CAPTURE(n);
        const auto kp = karoubi_polynomials(n);
        const auto x_minus_1_sq = Polynomial({Rational(1), Rational(-2), Rational(1)});
        CHECK(kp.annihilator == Polynomial::x_pow_minus_one(n) * Polynomial::x_pow_minus_one(n + 1));
        CHECK(kp.annihilator == x_minus_1_sq * kp.cofactor);
        CHECK((kp.projector - Polynomial::constant(1)) % x_minus_1_sq == Polynomial());
        CHECK(kp.projector % kp.cofactor == Polynomial());
        const auto one_minus_x = Polynomial({Rational(1), Rational(-1)});
        CHECK((kp.green * one_minus_x - Polynomial::constant(1)) % kp.cofactor == Polynomial());
    }
    CHECK(admissible_orders(0) == std::vector<std::size_t>{1});
    CHECK(admissible_orders(2) == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("harmonic projection") {
    auto w = dual_window();
    CHECK(harmonic_projection(w, 0).P == Matrix<Rational>::identity(2));
    const auto s = harmonic_projection(w, 1);
    CHECK(s.P == diag({1, 0}));
    CHECK(s.P_perp == diag({0, 1}));

    FormsWindow<Rational> m2(algebras::matrices_2x2<Rational>(), 2);
    const auto sm = harmonic_projection(m2, 1);
    CHECK(rank(sm.P) + rank(sm.P_perp) == 12);
    CHECK(sm.P * sm.P == sm.P);
}

TEST_CASE("contour projection agrees with the polynomial projection") {
    FormsWindow<Complex> w(algebras::matrices_2x2<Complex>(), 2);
    for (std::size_t n = 0; n < 2; ++n) {
        const auto poly = harmonic_projection(w, n, ProjectionMethod::polynomial).P.to_eigen();
        const auto contour = riesz_projection(w.k_block(n).to_eigen(), n);
        CHECK((poly - contour).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("Green operator") {
    auto w = dual_window();
    auto s = spectral_data(w, 1);
    REQUIRE(s.G.has_value());
    const auto& G = *s.G;
    // G(x dx) = x dx / 2
    CHECK(G * std::span<const Rational>(q({0, 1})) == std::vector<Rational>{0, Rational(1, 2)});
    CHECK((G * s.P).is_zero_matrix());
    CHECK(w.one_minus_k_block(1) * G + s.P == Matrix<Rational>::identity(2));

    FormsWindow<Rational> z3(algebras::group_z3<Rational>(), 3);
    for (std::size_t n = 0; n < 3; ++n) {
        auto sz = spectral_data(z3, n);
        const auto id = Matrix<Rational>::identity(z3.degree_dim(n));
        CHECK(z3.one_minus_k_block(n) * *sz.G + sz.P == id);
        CHECK((*sz.G * sz.P).is_zero_matrix());
    }
}

TEST_CASE("Hodge splitting of forms") {
    auto w = dual_window();
    const auto a = hodge_split(w, w.basis_form(1, 0));
    CHECK(degree_equals(a.harmonic, 1, q({1, 0})));
    CHECK(a.d_part.is_zero_form());
    CHECK(a.b_part.is_zero_form());

    const auto b = hodge_split(w, w.basis_form(1, 1));
    CHECK(b.harmonic.is_zero_form());
    CHECK(b.d_part.is_zero_form());
    CHECK(degree_equals(b.b_part, 1, q({0, 1})));

    const auto z = hodge_split(w, w.zero_form());
    CHECK(z.harmonic.is_zero_form());
    CHECK(z.d_part.is_zero_form());
    CHECK(z.b_part.is_zero_form());
}

TEST_CASE("rescaled Laplacian") {
    auto w = dual_window();
    const auto r0 = rescaled_laplacian_check(w, 0);
    CHECK(r0.exact_zero_on_P);
    CHECK(r0.norm_on_P == 0.0);
    CHECK_FALSE(r0.min_singular_on_P_perp.has_value());

    // L(x dx) = b N d (x dx) = b(2 dx dx) = 4 x dx, while L(dx) = 0.
    const auto L = w.L_block(1);
    CHECK(L == diag({0, 4}));
    const auto r1 = rescaled_laplacian_check(w, 1);
    CHECK(r1.exact_zero_on_P);
    REQUIRE(r1.min_singular_on_P_perp.has_value());
    CHECK(*r1.min_singular_on_P_perp == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("spectrum of the Karoubi operator") {
    auto w = dual_window();
    std::vector<OrderTotal> totals;
    const auto s1 = spectrum_report(w, 1, {}, &totals);
    REQUIRE(s1.size() == 2);
    CHECK(s1[0].order == 1);
    CHECK(s1[0].multiplicity == 1);
    CHECK(s1[1].order == 2);
    CHECK(s1[1].multiplicity == 1);

    const auto s0 = spectrum_report(w, 0);
    REQUIRE(s0.size() == 1);
    CHECK(s0[0].order == 1);
    CHECK(s0[0].multiplicity == 2);

    FormsWindow<Complex> m2(algebras::matrices_2x2<Complex>(), 3);
    std::size_t total = 0;
    for (const auto& e : spectrum_report(m2, 2)) {
        CHECK((2 % e.order == 0 || 3 % e.order == 0));
        CHECK(std::abs(std::abs(e.value) - 1.0) < 1e-6);
        total += e.multiplicity;
    }
    CHECK(total == 36);
}

TEST_CASE("degree invariants are exact zeros on the dual numbers") {
    auto w = FormsWindow<Rational>(algebras::dual_numbers<Rational>(), 4);
    for (std::size_t n = 0; n < 4; ++n) {
        const auto inv = degree_invariants(w, n);
        CHECK(inv.rank_P + inv.rank_P_perp == inv.dim);
        CHECK(inv.rank_P == inv.dim_ker_one_minus_k_sq);
        for (const auto& r : inv.residuals) {
            CAPTURE(r.name);
            CHECK(r.exact_zero);
        }
    }
}

TEST_CASE("float residuals stay below threshold") {
    FormsWindow<Complex> w(algebras::group_z3<Complex>(), 3);
    for (std::size_t n = 0; n < 3; ++n) {
        for (const auto& r : degree_invariants(w, n).residuals) {
            CAPTURE(r.name);
            CHECK(r.value < 1e-10);
        }
    }
}
