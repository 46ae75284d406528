#include "nchodge/tangential.hpp"
#include "support.hpp"

using namespace nchodge;
using Eigen::MatrixXcd;
using test::error_code;

namespace {

LeafSpec circle(std::size_t n) {
    LeafSpec s;
    s.kind = LeafKind::circle;
    s.n = n;
    return s;
}

LeafSpec torus(std::size_t n) {
    LeafSpec s;
    s.kind = LeafKind::torus;
    s.n = n;
    return s;
}

// Kernel dimensions of Delta_k = D_k^H D_k + D_{k-1} D_{k-1}^H for identity Grams.
std::vector<std::size_t> direct_kernel_dims(const CochainComplex& c) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < c.dims.size(); ++k) {
        const auto n = static_cast<Eigen::Index>(c.dims[k]);
        MatrixXcd lap = MatrixXcd::Zero(n, n);
        if (k < c.length()) lap += c.differentials[k].adjoint() * c.differentials[k];
        if (k > 0) lap += c.differentials[k - 1] * c.differentials[k - 1].adjoint();
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(lap);
        std::size_t zeros = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (es.eigenvalues()(i) < 1e-9) ++zeros;
        out.push_back(zeros);
    }
    return out;
}

}  // namespace

TEST_CASE("model construction") {
    const auto m = make_model(circle(16), {0.0, 0.25, 0.5, 0.75});
    CHECK(m.weights == std::vector<double>(4, 0.25));
    CHECK(m.leaf_complex.dims == std::vector<std::size_t>{16, 16});
    CHECK(error_code([] { make_model(circle(16), {0.0, 1.0}, {-0.5, 1.5}); }) == "tangential.BadWeights");
    CHECK(error_code([] { make_model(circle(16), {0.0, 1.0}, {0.5, 0.6}); }) == "tangential.BadWeights");
    CHECK(error_code([] { make_model(circle(16), {0.0, 1.0}, {1.0}); }) == "tangential.BadWeights");
    CHECK(error_code([] { make_model(circle(2), {0.0}); }) == "tangential.LeafTooSmall");
    CHECK(error_code([] { parse_leaf_kind("sphere"); }) == "tangential.InvalidArgument");
}

TEST_CASE("leaf complexes have the expected Betti numbers") {
    const auto t = leaf_complex(torus(8));
    CHECK(t.dims == std::vector<std::size_t>{64, 128, 64});
    CHECK(direct_kernel_dims(t) == std::vector<std::size_t>{1, 2, 1});
    CHECK(HodgePackage(t).betti() == std::vector<std::size_t>{1, 2, 1});
    CHECK(direct_kernel_dims(leaf_complex(circle(9))) == std::vector<std::size_t>{1, 1});
}

TEST_CASE("tangential Betti numbers") {
    CHECK(tangential_betti(make_model(circle(12), {0.0})) == std::vector<double>{1.0, 1.0});
    const auto two = tangential_betti(make_model(circle(12), {0.0, 1.0}, {0.3, 0.7}));
    REQUIRE(two.size() == 2);
    CHECK(two[0] == doctest::Approx(1.0));
    CHECK(two[1] == doctest::Approx(1.0));
    const auto tb = tangential_betti(make_model(torus(6), {0.0}));
    CHECK(tb == std::vector<double>{1.0, 2.0, 1.0});
}

TEST_CASE("Witten deformation") {
    const auto model = make_model(circle(16), {0.0, 0.5});
    const auto phi = sample_phi(model, "cos-h");

    const auto undeformed = witten_model(model, phi, 0.0);
    CHECK((undeformed[0].differentials[0] - model.leaf_complex.differentials[0]).norm() == 0.0);

    const auto constant = witten_model(model, sample_phi(model, "constant"), 3.0);
    CHECK((constant[0].differentials[0] - model.leaf_complex.differentials[0]).norm() < 1e-12);

    const auto deformed = witten_model(model, phi, 1.0);
    CHECK((deformed[0].differentials[0] - model.leaf_complex.differentials[0]).norm() > 1e-3);
    CHECK(HodgePackage(deformed[0]).betti() == HodgePackage(model.leaf_complex).betti());

    CHECK(error_code([&] { witten_model(model, phi, -1.0); }) == "tangential.InvalidArgument");
    CHECK(error_code([&] { sample_phi(model, "gaussian-bump"); }) == "tangential.InvalidArgument");
    CHECK(error_code([&] { witten_complex(model.leaf_complex, {{1.0}}); }) == "tangential.ShapeMismatch");
}

TEST_CASE("Betti sweep over tau") {
    const auto model = make_model(circle(16), {0.0, 0.25, 0.5, 0.75});
    const std::vector<double> taus{0.0, 0.5, 1.0, 2.0, 5.0};
    for (const auto& name : {"cos-h", "zero"}) {
        CAPTURE(name);
        const auto r = witten_betti_sweep(model, sample_phi(model, name), taus);
        CHECK(r.unstable_taus.empty());
        CHECK(r.intertwiners_ok);
        for (const auto& row : r.betti_table) {
            CHECK(row[0] == doctest::Approx(1.0));
            CHECK(row[1] == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("torus sweep with a random leaf function") {
    const auto model = make_model(torus(6), {0.0, 0.5}, {0.4, 0.6});
    SweepOptions opts;
    opts.jobs = 2;
    const auto r = witten_betti_sweep(model, sample_phi(model, "random", 7), {0.0, 1.0, 2.0}, opts);
    CHECK(r.unstable_taus.empty());
    CHECK(r.intertwiners_ok);
    for (std::size_t t = 0; t < r.tau_values.size(); ++t) {
        CHECK(r.betti_table[t][0] == doctest::Approx(1.0));
        CHECK(r.betti_table[t][1] == doctest::Approx(2.0));
        CHECK(r.betti_table[t][2] == doctest::Approx(1.0));
        for (const auto& leaf : r.leaves[t]) CHECK(leaf.intertwiner_ranks == leaf.kernel_dims);
        CHECK(r.euler_from_betti[t] == doctest::Approx(r.euler_from_dims));
    }
}
