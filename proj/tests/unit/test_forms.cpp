#include "nchodge/forms.hpp"
#include "support.hpp"

using namespace nchodge;
using test::error_code;
using test::q;

namespace {

// Dual numbers: degree-1 basis (dx, x dx), degree-2 basis (dx dx, x dx dx).
FormsWindow<Rational> dual_window(std::size_t n_max = 3) {
    return FormsWindow<Rational>(algebras::dual_numbers<Rational>(), n_max);
}

Form<Rational> single(std::size_t degree, std::vector<Rational> coeffs) {
    Form<Rational> f;
    f.components[degree] = std::move(coeffs);
    return f;
}

bool same_form(const Form<Rational>& a, const Form<Rational>& b) {
    std::size_t top = 0;
    for (const auto& [d, c] : a.components) top = std::max(top, d);
    for (const auto& [d, c] : b.components) top = std::max(top, d);
    for (std::size_t d = 0; d <= top; ++d) {
        const auto* x = a.at(d);
        const auto* y = b.at(d);
        const std::size_t n = std::max(x ? x->size() : 0, y ? y->size() : 0);
        for (std::size_t i = 0; i < n; ++i) {
            const Rational u = x && i < x->size() ? (*x)[i] : Rational(0);
            const Rational v = y && i < y->size() ? (*y)[i] : Rational(0);
            if (u != v) return false;
        }
    }
    return true;
}

Matrix<Rational> diag(std::initializer_list<long> xs) {
    Matrix<Rational> m(xs.size(), xs.size());
    std::size_t i = 0;
    for (long x : xs) {
        m(i, i) = x;
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("degree dimensions") {
    CHECK(dual_window().degree_dims() == std::vector<std::size_t>{2, 2, 2, 2});
    FormsWindow<Rational> m2(algebras::matrices_2x2<Rational>(), 2);
    CHECK(m2.degree_dims() == std::vector<std::size_t>{4, 12, 36});
    FormsWindow<Rational> scalars(algebras::scalars<Rational>(), 3);
    CHECK(scalars.degree_dims() == std::vector<std::size_t>{1, 0, 0, 0});
}

TEST_CASE("window cap") {
    CHECK(error_code([] { FormsWindow<Rational>(algebras::matrices_2x2<Rational>(), 4, 100); }) ==
          "forms.WindowTooLarge");
}

TEST_CASE("basis tuples and labels") {
    auto w = dual_window();
    CHECK(w.basis_tuple(1, 1) == std::vector<std::size_t>{1, 0});
    CHECK(w.basis_index({1, 0, 0}) == 1);
    CHECK(w.basis_label(2, 1) == "x dx dx");
}

TEST_CASE("differential") {
    auto w = dual_window();
    const auto x = w.from_algebra(w.algebra().basis_element(1));
    const auto dx = w.apply_d(x);
    CHECK(same_form(dx, single(1, q({1, 0}))));
    CHECK(w.apply_d(dx).is_zero_form());
    // d(x dx) = dx dx
    CHECK(same_form(w.apply_d(w.basis_form(1, 1)), w.basis_form(2, 0)));
    CHECK(error_code([&] { w.d_block(3); }) == "forms.DegreeOutOfWindow");
}

TEST_CASE("Hochschild boundary") {
    auto w = dual_window();
    // b(dx dx) = 2 x dx
    CHECK(same_form(w.apply_b(w.basis_form(2, 0)), single(1, q({0, 2}))));
    CHECK(w.apply_b(w.basis_form(0, 1)).is_zero_form());
    CHECK(w.b_block(0).rows() == 0);

    FormsWindow<Rational> cc(algebras::c_plus_c<Rational>(), 2);
    for (std::size_t i = 0; i < cc.degree_dim(1); ++i) CHECK(cc.apply_b(cc.basis_form(1, i)).is_zero_form());
}

TEST_CASE("Karoubi operator") {
    auto w = dual_window();
    CHECK(same_form(w.apply_k(w.basis_form(1, 0)), w.basis_form(1, 0)));
    CHECK(same_form(w.apply_k(w.basis_form(1, 1)), single(1, q({0, -1}))));
    CHECK(w.k_block(0) == Matrix<Rational>::identity(2));
    CHECK(w.k_block(1) == diag({1, -1}));
    CHECK(w.one_minus_k_block(1) == diag({0, 2}));
    CHECK(w.N_block(0).is_zero_matrix());
    CHECK(w.N_block(2) == diag({2, 2}));
}

TEST_CASE("form product") {
    auto w = dual_window();
    const auto one = w.from_algebra(w.algebra().unit());
    const auto x = w.from_algebra(w.algebra().basis_element(1));
    const auto dx = w.basis_form(1, 0);
    const auto xdx = w.basis_form(1, 1);
    CHECK(same_form(w.multiply(one, xdx), xdx));
    CHECK(same_form(w.multiply(xdx, one), xdx));
    // dx . x = d(x x) - x dx = -x dx
    CHECK(same_form(w.multiply(dx, x), single(1, q({0, -1}))));
    CHECK(same_form(w.multiply(x, dx), xdx));
    CHECK(same_form(w.multiply(dx, dx), w.basis_form(2, 0)));
}

TEST_CASE("operator identities on every shipped algebra") {
    for (const auto& name : {"dual_numbers", "c_plus_c", "m2", "group_z3"}) {
        CAPTURE(name);
        FormsWindow<Rational> w(algebras::by_name<Rational>(name), name == std::string("m2") ? 2 : 3);
        const auto ops = w.operator_matrices(2);
        for (std::size_t n = 0; n + 1 < w.n_max(); ++n) {
            CHECK((w.d_block(n + 1) * w.d_block(n)).is_zero_matrix());
            if (n >= 1) CHECK((w.b_block(n) * w.b_block(n + 1)).is_zero_matrix());
            CHECK(w.laplacian_block(n) == w.one_minus_k_block(n));
        }
        CHECK(ops.L.has_block(0));
    }
}

TEST_CASE("float window matches the exact window") {
    FormsWindow<Rational> exact(algebras::group_z3<Rational>(), 3);
    FormsWindow<Complex> flt(algebras::group_z3<Complex>(), 3);
    for (std::size_t n = 0; n < 3; ++n) {
        const auto diff = exact.k_block(n).cast<Complex>() - flt.k_block(n);
        CHECK(diff.max_abs() < 1e-12);
    }
}
