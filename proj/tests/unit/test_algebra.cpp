#include "nchodge/algebra.hpp"
#include "support.hpp"

using namespace nchodge;
using test::error_code;
using test::q;

namespace {

StructureConstants<Rational> matrix_units() {
    // Input basis E11, E12, E21, E22 with index 2 * row + col.
    StructureConstants<Rational> c(4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l)
                    if (j == k) c(2 * i + j, 2 * k + l, 2 * i + l) = 1;
    return c;
}

}  // namespace

TEST_CASE("dual numbers form a two-dimensional algebra") {
    auto a = algebras::dual_numbers<Rational>();
    CHECK(a.dim() == 2);
    CHECK(a.reduced_dim() == 1);
    const auto x = a.basis_element(1);
    CHECK(a.multiply(x, x) == AlgebraElement<Rational>{q({0, 0})});
}

TEST_CASE("matrix units validate and multiply") {
    auto a = Algebra<Rational>::make(4, {"E11", "E12", "E21", "E22"}, matrix_units(), q({1, 0, 0, 1}));
    CHECK(a.dim() == 4);
    const auto e12 = a.to_canonical(q({0, 1, 0, 0}));
    const auto e21 = a.to_canonical(q({0, 0, 1, 0}));
    CHECK(a.to_input(a.multiply(e12, e21)) == q({1, 0, 0, 0}));
    CHECK(a.to_input(a.multiply(e21, e12)) == q({0, 0, 0, 1}));
}

TEST_CASE("a perturbed structure constant breaks associativity") {
    auto c = matrix_units();
    c(1, 2, 0) += 1;
    CHECK(error_code([&] { Algebra<Rational>::make(4, {"E11", "E12", "E21", "E22"}, c, q({1, 0, 0, 1})); }) ==
          "algebra.AssociativityViolation");
    std::size_t witness[4] = {0, 0, 0, 0};
    CHECK_FALSE(check_associativity(c, witness));
    CHECK(check_associativity(matrix_units(), witness));
}

TEST_CASE("validation errors") {
    CHECK(error_code([] { Algebra<Rational>::make(4, {"E11", "E12", "E21", "E22"}, matrix_units(), q({1, 0, 0, 0})); }) ==
          "algebra.UnitViolation");
    CHECK(error_code([] { Algebra<Rational>::make(3, {"a", "b", "c"}, matrix_units(), q({1, 0, 0})); }) ==
          "algebra.ShapeMismatch");
    CHECK(error_code([] { algebras::by_name<Rational>("octonions"); }) == "algebra.UnknownAlgebra");
}

TEST_CASE("unit law holds for every shipped algebra") {
    for (const auto& name : {"dual_numbers", "c_plus_c", "m2", "group_z3", "scalars"}) {
        CAPTURE(name);
        auto a = algebras::by_name<Rational>(name);
        for (std::size_t i = 0; i < a.dim(); ++i) {
            const auto y = a.basis_element(i);
            CHECK(a.multiply(a.unit(), y) == y);
            CHECK(a.multiply(y, a.unit()) == y);
        }
        std::size_t witness[4];
        CHECK(check_associativity(a.structure_constants(), witness));
    }
}

TEST_CASE("shipped algebras validate in every scalar mode") {
    for (const auto& name : algebras::names()) {
        CAPTURE(name);
        CHECK_NOTHROW(algebras::by_name<Gaussian>(name));
        CHECK_NOTHROW(algebras::by_name<Complex>(name));
    }
}

TEST_CASE("reduction to the complement of the scalars") {
    auto a = algebras::dual_numbers<Rational>();
    CHECK(a.reduce(a.unit()) == ReducedElement<Rational>{q({0})});
    CHECK(a.reduce(a.basis_element(1)) == ReducedElement<Rational>{q({1})});
    const AlgebraElement<Rational> shifted{q({5, 1})};
    CHECK(a.reduce(shifted) == a.reduce(a.basis_element(1)));
    CHECK(a.lift(ReducedElement<Rational>{q({3})}) == AlgebraElement<Rational>{q({0, 3})});
}

TEST_CASE("canonical basis puts the unit first") {
    auto a = algebras::c_plus_c<Rational>();
    CHECK(a.unit_pivot() == 0);
    CHECK(a.unit() == AlgebraElement<Rational>{q({1, 0})});
    CHECK(a.to_input(a.unit()) == q({1, 1}));
    const auto e2 = a.to_canonical(q({0, 1}));
    CHECK(a.multiply(e2, e2) == e2);
}

TEST_CASE("group algebra of Z/3") {
    auto a = algebras::group_z3<Rational>();
    const auto g = a.basis_element(1);
    const auto g2 = a.multiply(g, g);
    CHECK(g2 == a.basis_element(2));
    CHECK(a.multiply(g2, g) == a.unit());
}

TEST_CASE("casting to Gaussian keeps structure") {
    auto a = algebras::matrices_2x2<Rational>().cast<Gaussian>();
    CHECK(a.dim() == 4);
    CHECK(a.mode() == ScalarMode::gaussian);
}
