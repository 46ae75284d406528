#include "nchodge/polynomial.hpp"
#include "support.hpp"

using namespace nchodge;
using test::error_code;

TEST_CASE("cyclotomic polynomials") {
    CHECK(Polynomial::cyclotomic(1) == Polynomial({Rational(-1), Rational(1)}));
    CHECK(Polynomial::cyclotomic(4) == Polynomial({Rational(1), Rational(0), Rational(1)}));
    CHECK(Polynomial::cyclotomic(6) == Polynomial({Rational(1), Rational(-1), Rational(1)}));
    // x^n - 1 is the product of cyclotomics over the divisors of n.
    Polynomial prod = Polynomial::constant(1);
    for (std::size_t d : {1, 2, 3, 4, 6, 12}) prod = prod * Polynomial::cyclotomic(d);
    CHECK(prod == Polynomial::x_pow_minus_one(12));
}

TEST_CASE("division and gcd") {
    const auto a = Polynomial::x_pow_minus_one(6);
    const auto b = Polynomial::x_pow_minus_one(4);
    Polynomial g, s, t;
    extended_gcd(a, b, g, s, t);
    CHECK(g == Polynomial::x_pow_minus_one(2));
    CHECK(s * a + t * b == g);
    Polynomial quo, rem;
    Polynomial::divmod(a, b, quo, rem);
    CHECK(quo * b + rem == a);
    CHECK(rem.degree() < b.degree());
    CHECK(error_code([&] { Polynomial::divmod(a, Polynomial(), quo, rem); }) == "polynomial.DivisionByZero");
    CHECK(Polynomial::geometric(3).eval(2) == 7);
}

TEST_CASE("exact linear algebra") {
    Matrix<Rational> m(3, 3);
    m(0, 0) = 1; m(0, 1) = 2; m(0, 2) = 3;
    m(1, 0) = 2; m(1, 1) = 4; m(1, 2) = 6;
    m(2, 0) = 1; m(2, 1) = 0; m(2, 2) = 1;
    CHECK(rank(m) == 2);
    const auto k = kernel_basis(m);
    CHECK(k.cols() == 1);
    CHECK((m * k).is_zero_matrix());
    CHECK(error_code([&] { inverse(m); }) == "matrix.Singular");

    m(1, 1) = 5;
    const auto inv = inverse(m);
    CHECK(m * inv == Matrix<Rational>::identity(3));
    CHECK(in_column_space(m, Matrix<Rational>::identity(3)));
}

TEST_CASE("evaluating a polynomial at a matrix") {
    Matrix<Rational> j(2, 2);
    j(0, 1) = 1;
    // (x - 1)^2 at I + J is J^2 = 0.
    const Polynomial p({Rational(1), Rational(-2), Rational(1)});
    CHECK(evaluate(p, Matrix<Rational>::identity(2) + j).is_zero_matrix());
    CHECK(matrix_power(j, 2).is_zero_matrix());
}

TEST_CASE("Gaussian rationals") {
    const Gaussian i(Rational(0), Rational(1));
    CHECK(i * i == Gaussian(-1));
    CHECK(Gaussian(1) / i == Gaussian(Rational(0), Rational(-1)));
    CHECK(error_code([] { Gaussian(1) / Gaussian(); }) == "scalar.DivisionByZero");
    CHECK(error_code([] { narrow_scalar<Rational>(Gaussian(Rational(1), Rational(1))); }) == "scalar.NotRepresentable");
    CHECK(parse_scalar_mode("float") == ScalarMode::complex_float);
    CHECK(error_code([] { parse_scalar_mode("quaternion"); }) == "scalar.UnknownMode");
}
