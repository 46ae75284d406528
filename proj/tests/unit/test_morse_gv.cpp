#include <cmath>
#include <numbers>

#include "nchodge/godbillon_vey.hpp"
#include "nchodge/morse.hpp"
#include "support.hpp"

using namespace nchodge;
using test::error_code;

TEST_CASE("cos(2 pi h) has two transversal families of Morse points") {
    MorseGrid grid;
    grid.nh = 64;
    grid.nv = 5;
    const auto r = morse_scan(builtin_chart("cos-h"), grid);
    CHECK(r.family_count == 2);
    CHECK(r.degenerate_count == 0);
    CHECK(r.almost_morse);
    CHECK(r.singularities.size() == 2 * grid.nv);
    for (const auto& s : r.singularities) {
        const double h = std::fmod(s.h + 1.0, 1.0);
        const bool at_max = std::min(h, 1.0 - h) < 1e-9;
        const bool at_min = std::abs(h - 0.5) < 1e-9;
        CHECK((at_max || at_min));
        CHECK(s.morse);
        CHECK(s.index == (at_max ? 1u : 0u));
        const double expected = -4.0 * std::numbers::pi * std::numbers::pi * (at_max ? 1.0 : -1.0);
        CHECK(s.hessian == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("birth-death normal form") {
    MorseGrid grid;
    grid.nh = 128;
    grid.nv = 21;
    const auto r = morse_scan(builtin_chart("cubic-bd"), grid);
    CHECK(r.degenerate_count >= 1);
    bool found = false;
    for (const auto& s : r.singularities) {
        // Singular set v = h^2.
        CHECK(s.v == doctest::Approx(s.h * s.h).epsilon(1e-6));
        if (!s.morse) {
            found = true;
            CHECK(std::abs(s.h) < 1e-6);
            CHECK(s.birth_death_rank >= 1);
            CHECK(s.birth_death_rank_ok);
        }
    }
    CHECK(found);
}

TEST_CASE("constant leaf function is flagged") {
    MorseGrid grid;
    grid.nh = 16;
    grid.nv = 3;
    const auto r = morse_scan(builtin_chart("constant"), grid);
    CHECK_FALSE(r.almost_morse);
    CHECK(r.singular_leaves.size() == grid.nv);
}

TEST_CASE("morse scan errors") {
    MorseGrid grid;
    grid.nh = 4;
    CHECK(error_code([&] { morse_scan(builtin_chart("cos-h"), grid); }) == "morse.GridTooCoarse");
    CHECK(error_code([] { builtin_chart("sin-h"); }) == "morse.InvalidArgument");
}

TEST_CASE("Godbillon-Vey of dz vanishes") {
    const auto r = godbillon_vey(builtin_one_form("dz"), 16);
    CHECK(r.integrability_residual < 1e-12);
    CHECK(r.gv == doctest::Approx(0.0));
}

TEST_CASE("Godbillon-Vey of dz + sin(2 pi z) dx") {
    const auto r = godbillon_vey(builtin_one_form("dz+sin(2piz)dx"), 16);
    CHECK(r.integrability_residual < 1e-8);
    CHECK(r.theta_residual < 1e-8);
    CHECK(std::abs(r.gv) < 1e-8);
    CHECK(r.gauge_residual < 1e-6);
    REQUIRE(r.refinement_residual.has_value());
    CHECK(*r.refinement_residual < 1e-6);

    GVOptions central;
    central.method = DerivativeMethod::central;
    CHECK(std::abs(godbillon_vey(builtin_one_form("dz+sin(2piz)dx"), 32, central).gv) < 1e-6);
}

TEST_CASE("Godbillon-Vey errors") {
    CHECK(error_code([] { godbillon_vey(builtin_one_form("dz+xdy"), 16); }) == "gv.NotIntegrable");
    CHECK(error_code([] { godbillon_vey(builtin_one_form("dz"), 4); }) == "gv.GridTooCoarse");
    CHECK(error_code([] { builtin_one_form("dx^dy"); }) == "gv.InvalidArgument");
    OneFormField zero;
    zero.n = 8;
    zero.wx.assign(512, 0.0);
    zero.wy.assign(512, 0.0);
    zero.wz.assign(512, 0.0);
    CHECK(error_code([&] { godbillon_vey(zero); }) == "gv.VanishingOmega");
    zero.wz.resize(10);
    CHECK(error_code([&] { godbillon_vey(zero); }) == "gv.ShapeMismatch");
}
