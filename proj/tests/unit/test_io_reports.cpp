#include <cmath>

#include "nchodge/reports.hpp"
#include "support.hpp"

using namespace nchodge;
using test::data_path;
using test::error_code;

TEST_CASE("exact scalars in JSON") {
    CHECK(to_json(Rational(1, 2)) == Json::array({1, 2}));
    CHECK(to_json(Rational(-3)) == Json::array({-3, 1}));
    CHECK(rational_from_json(Json(3)) == 3);
    CHECK(rational_from_json(Json::array({1, 2})) == Rational(1, 2));
    CHECK(rational_from_json(Json("-2/6")) == Rational(-1, 3));
    CHECK(error_code([] { rational_from_json(Json("one half")); }) == "io.BadScalar");
    CHECK(error_code([] { rational_from_json(Json(0.5)); }) == "io.BadScalar");
    CHECK(gaussian_from_json(Json::array({1, Json::array({1, 2})})) == Gaussian(Rational(1), Rational(1, 2)));
    CHECK(error_code([] { scalar_from_json<Rational>(Json(0.5), ScalarMode::complex_float); }) == "io.ModeMismatch");
}

TEST_CASE("shipped algebra files") {
    for (const auto& name : {"dual_numbers", "c_plus_c", "m2", "group_z3"}) {
        CAPTURE(name);
        const auto doc = read_json_file(data_path(std::string("algebras/") + name + ".json"));
        const auto a = algebra_from_json<Rational>(doc);
        CHECK(a.dim() == algebras::by_name<Rational>(name).dim());
        CHECK(a.name() == name);
    }
    const auto bad = read_json_file(data_path("algebras/m2_perturbed.json"));
    CHECK(error_code([&] { algebra_from_json<Rational>(bad); }) == "algebra.AssociativityViolation");
    CHECK(error_code([] { algebra_from_json<Rational>(Json::object()); }) == "io.BadInput");
}

TEST_CASE("file errors") {
    CHECK(error_code([] { read_json_file(data_path("does/not/exist.json")); }) == "io.FileNotFound");
}

TEST_CASE("complex and model files") {
    const auto bad = read_json_file(data_path("complexes/not_a_complex.json"));
    CHECK(error_code([&] { cochain_complex_from_json(bad); }) == "hodge.NotAComplex");
    const auto circle = cochain_complex_from_json(read_json_file(data_path("complexes/circle_alpha_-1_N8.json")));
    CHECK(circle.dims == std::vector<std::size_t>{8, 8});
    CHECK(circle.exact_differentials.has_value());

    const auto weights = read_json_file(data_path("models/bad_weights.json"));
    CHECK(error_code([&] { model_from_json(weights, 1); }) == "tangential.BadWeights");
    const auto model = model_from_json(read_json_file(data_path("models/torus_random.json")), 1);
    CHECK(model.taus == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("spectral report on the dual numbers") {
    FormsWindow<Rational> w(algebras::dual_numbers<Rational>(), 4);
    const auto r = spectral_report(w, {}, 2);
    CHECK(r.ok);
    CHECK(r.json["schema"] == report_schema);
    CHECK(r.json["status"] == "ok");
    REQUIRE(r.json["degrees"].size() == 4);
    for (const auto& deg : r.json["degrees"])
        for (const auto& res : deg["residuals"]) {
            CAPTURE(res["name"].get<std::string>());
            CHECK(res["value"] == Json::array({0, 1}));
        }
    // Byte-stable output.
    FormsWindow<Rational> again(algebras::dual_numbers<Rational>(), 4);
    CHECK(dump_report(spectral_report(again, {}, 1).json) == dump_report(r.json));
    CHECK_FALSE(r.csv.empty());
}

TEST_CASE("nc report carries operator blocks") {
    FormsWindow<Rational> w(algebras::dual_numbers<Rational>(), 2);
    const auto r = nc_report(w);
    CHECK(r.ok);
    CHECK(r.json.contains("operators"));
}

TEST_CASE("torsion report") {
    const auto c = cochain_complex_from_json(read_json_file(data_path("complexes/circle_alpha_-1_N8.json")));
    const auto r = torsion_report(c);
    CHECK(r.ok);
    CHECK(r.json["log_torsion"].get<double>() == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    const auto cs = torsion_report(c, {}, "cs-partition");
    CHECK(cs.json["cs_partition"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(hodge_report(c).ok);
}

TEST_CASE("failed computations produce error entries") {
    GVInput in;
    in.analytic = builtin_one_form("dz+xdy");
    in.n = 16;
    const auto r = gv_report(in);
    CHECK_FALSE(r.ok);
    CHECK(r.json["status"] == "failed");
    REQUIRE(r.json["errors"].size() == 1);
    CHECK(r.json["errors"][0]["code"] == "gv.NotIntegrable");

    const auto e = error_report("torsion", ScalarMode::rational, Error("io", "BadInput", "nope"));
    CHECK(e.json["errors"][0]["kind"] == "BadInput");
    CHECK_FALSE(e.ok);
}

TEST_CASE("sweep, morse and gv reports from shipped inputs") {
    const auto model = model_from_json(read_json_file(data_path("models/circle_cos.json")), 1);
    SweepOptions opts;
    opts.jobs = 2;
    CHECK(witten_sweep_report(model, opts).ok);
    CHECK(morse_report(morse_from_json(read_json_file(data_path("models/morse_cos.json")))).ok);
    CHECK(gv_report(gv_from_json(read_json_file(data_path("gv/sin_z.json")))).ok);
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1e-20) == "1e-20");
}
