#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <variant>

#include "geoindex/errors.hpp"
#include "geoindex/geometry.hpp"
#include "geoindex/spec_io.hpp"

using geoindex::ConfigError;
namespace geom = geoindex::geom;
namespace spec_io = geoindex::spec_io;

namespace {

const char* kHalfplane = R"({
  "kind": "metric2d",
  "g11": "1/y^2", "g12": "0", "g22": "1/y^2",
  "partials": {
    "g11_x": "0", "g11_y": "-2/y^3",
    "g12_x": "0", "g12_y": "0",
    "g22_x": "0", "g22_y": "-2/y^3"
  },
  "start": [0, 1],
  "direction": [0, 1],
  "steps": 500
})";

std::string message_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.message();
    }
    return "";
}

}  // namespace

TEST_CASE("constant-curvature specs parse") {
    const auto file =
        spec_io::parse_manifold(R"({"kind": "constant-curvature", "dim": 3, "kappa": -1.5})");
    const auto* cc = std::get_if<geom::ConstantCurvature>(&file.spec);
    REQUIRE(cc != nullptr);
    CHECK(cc->dim == 3);
    CHECK(cc->kappa == -1.5);
    CHECK(!file.steps.has_value());

    CHECK_THROWS_AS(spec_io::parse_manifold(R"({"kind": "constant-curvature", "dim": 2})"),
                    ConfigError);
    CHECK_THROWS_AS(
        spec_io::parse_manifold(R"({"kind": "constant-curvature", "dim": 1, "kappa": 1})"),
        ConfigError);
    CHECK_THROWS_AS(
        spec_io::parse_manifold(
            R"({"kind": "constant-curvature", "dim": 2, "kappa": "one"})"),
        ConfigError);
    CHECK(message_of([] {
              spec_io::parse_manifold(
                  R"({"kind": "constant-curvature", "dim": 2, "kappa": 1, "colour": 7})");
          }).find("colour") != std::string::npos);
}

TEST_CASE("metric2d specs parse into a working metric") {
    const auto file = spec_io::parse_manifold(kHalfplane);
    const auto* m = std::get_if<geom::Metric2D>(&file.spec);
    REQUIRE(m != nullptr);
    REQUIRE(m->partials.has_value());
    CHECK((file.start - Eigen::Vector2d(0, 1)).norm() == 0.0);
    CHECK((file.direction - Eigen::Vector2d(0, 1)).norm() == 0.0);
    REQUIRE(file.steps.has_value());
    CHECK(*file.steps == 500);

    CHECK(geom::metric_at(*m, {0.0, 1.0}).isIdentity(1e-14));
    CHECK(geom::gaussian_curvature(*m, {0.3, 2.0}) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("metric2d strictness") {
    CHECK_THROWS_AS(spec_io::parse_manifold(R"({
        "kind": "metric2d", "g11": "1", "g12": "0", "g22": "1",
        "start": [0, 0], "direction": [0, 0]})"),
                    ConfigError);

    // partials must be complete when present
    CHECK(message_of([] {
              spec_io::parse_manifold(R"({
        "kind": "metric2d", "g11": "1", "g12": "0", "g22": "1",
        "partials": {"g11_x": "0"},
        "start": [0, 0], "direction": [1, 0]})");
          }).find("g11_y") != std::string::npos);

    CHECK_THROWS_AS(spec_io::parse_manifold(R"({
        "kind": "metric2d", "g11": "1", "g12": "0", "g22": "1",
        "start": [0, 0], "direction": [1, 0], "steps": 50})"),
                    ConfigError);
    CHECK_THROWS_AS(spec_io::parse_manifold(R"({
        "kind": "metric2d", "g11": "1", "g12": "0", "g22": "1",
        "start": [0, 0], "direction": [1, 0], "fd_step": -1})"),
                    ConfigError);
    CHECK_THROWS_AS(spec_io::parse_manifold(R"({
        "kind": "metric2d", "g11": "1", "g12": "0", "g22": "1",
        "start": [0], "direction": [1, 0]})"),
                    ConfigError);
    // expression errors surface with position info
    CHECK(message_of([] {
              spec_io::parse_manifold(R"({
        "kind": "metric2d", "g11": "1++", "g12": "0", "g22": "1",
        "start": [0, 0], "direction": [1, 0]})");
          }).find("position") != std::string::npos);
}

TEST_CASE("direct specs build the profile verbatim") {
    const auto file = spec_io::parse_manifold(
        R"({"kind": "direct", "entries": [["(2.5*pi)^2", "0"], ["0", "x*2"]]})");
    const auto* dp = std::get_if<geom::DirectProfile>(&file.spec);
    REQUIRE(dp != nullptr);
    CHECK(dp->profile.n_normal == 2);
    const auto s = dp->profile.eval(0.3);
    CHECK(s(0, 0) == doctest::Approx(std::pow(2.5 * M_PI, 2)).epsilon(1e-15));
    CHECK(s(1, 1) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(s(0, 1) == 0.0);

    // textually different but symmetric off-diagonal entries are fine
    const auto sym = spec_io::parse_manifold(
        R"({"kind": "direct", "entries": [["1", "x*2"], ["2*x", "1"]]})");
    CHECK(std::get<geom::DirectProfile>(sym.spec).profile.eval(0.5)(0, 1) == 1.0);
}

TEST_CASE("direct strictness") {
    CHECK_THROWS_AS(spec_io::parse_manifold(R"({"kind": "direct", "entries": []})"),
                    ConfigError);
    CHECK_THROWS_AS(
        spec_io::parse_manifold(R"({"kind": "direct", "entries": [["1", "0"]]})"),
        ConfigError);
    CHECK_THROWS_AS(spec_io::parse_manifold(R"({"kind": "direct", "entries": [["y"]]})"),
                    ConfigError);
    CHECK(message_of([] {
              spec_io::parse_manifold(
                  R"({"kind": "direct", "entries": [["1", "x"], ["1-x", "1"]]})");
          }).find("not symmetric") != std::string::npos);
    CHECK_THROWS_AS(
        spec_io::parse_manifold(R"({"kind": "direct", "entries": [["1"]], "n": 1})"),
        ConfigError);
}

TEST_CASE("malformed documents") {
    CHECK(message_of([] { spec_io::parse_manifold("{nope"); }).find("not valid JSON") !=
          std::string::npos);
    CHECK_THROWS_AS(spec_io::parse_manifold("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(spec_io::parse_manifold(R"({"dim": 2})"), ConfigError);
    CHECK(message_of([] {
              spec_io::parse_manifold(R"({"kind": "torus"})");
          }).find("constant-curvature") != std::string::npos);
}

TEST_CASE("file loading") {
    CHECK_THROWS_AS(spec_io::load_manifold("/nonexistent/manifold.json"), ConfigError);

    const std::string path = "specio_roundtrip_tmp.json";
    {
        std::ofstream out(path);
        out << kHalfplane;
    }
    const auto file = spec_io::load_manifold(path);
    CHECK(std::holds_alternative<geom::Metric2D>(file.spec));
    std::remove(path.c_str());
}

TEST_CASE("a parsed metric matches the built-in construction end to end") {
    const auto file = spec_io::parse_manifold(kHalfplane);
    const auto& m = std::get<geom::Metric2D>(file.spec);
    auto record = geom::shoot_geodesic(m, file.start, file.direction, 1000);
    geom::parallel_frame(m, record);
    const auto profile = geom::curvature_profile(file.spec, record);

    // unit-speed half-plane ray: S(x) = c^2 K = -1 everywhere
    REQUIRE(profile.n_normal == 1);
    for (double x : {0.0, 0.25, 0.5, 1.0})
        CHECK(profile.eval(x)(0, 0) == doctest::Approx(-1.0).epsilon(1e-6));
}
