#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "symcap/body_ops.hpp"
#include "symcap/errors.hpp"
#include "symcap/experiments.hpp"
#include "symcap/volume.hpp"

using namespace symcap;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("symcap_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ExperimentConfig small_config(const std::string& output) {
  ExperimentConfig c = parse_config(json::parse(R"({
    "bodies": [
      {"id": "ball", "kind": "ball"},
      {"id": "cube", "kind": "cube", "dimension": 4},
      {"id": "tri", "kind": "simplex", "dimension": 2},
      {"id": "rnd", "kind": "random-polytope", "dimension": 4, "count": 6}
    ],
    "dimensions": [2, 4],
    "mc_samples": 20000,
    "quality_samples": 10000,
    "master_seed": 11
  })"));
  c.output = output;
  return c;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("generated bodies") {
    BodySpec cube;
    cube.kind = BodyKind::cube;
    cube.dimension = 4;
    const ConvexBody c = generate_body(cube);
    REQUIRE(c.as_vpolytope());
    CHECK(c.as_vpolytope()->vertices.cols() == 16);
    CHECK(volume_exact(c).value == doctest::Approx(16.0).epsilon(1e-13));

    BodySpec l1 = parse_body_spec(json::parse(R"({"id": "l1", "kind": "lp-ball", "p": 1, "dimension": 4})"));
    const ConvexBody x = generate_body(l1);
    CHECK(x.as_vpolytope()->vertices.cols() == 8);
    CHECK(volume_exact(x).value == doctest::Approx(16.0 / 24.0).epsilon(1e-13));

    BodySpec linf = parse_body_spec(json::parse(R"({"id": "li", "kind": "lp-ball", "p": "inf", "dimension": 2})"));
    CHECK(volume_exact(generate_body(linf)).value == doctest::Approx(4.0).epsilon(1e-13));

    BodySpec l3 = parse_body_spec(json::parse(R"({"id": "l3", "kind": "lp-ball", "p": 3, "dimension": 2})"));
    const Matrix v = vertices_of(generate_body(l3));
    for (int k = 0; k < v.cols(); ++k) {
      CHECK(std::pow(std::pow(std::abs(v(0, k)), 3) + std::pow(std::abs(v(1, k)), 3), 1.0 / 3) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }

    BodySpec simplex = parse_body_spec(json::parse(R"({"kind": "simplex", "dimension": 3, "scale": 2})"));
    CHECK(volume_exact(generate_body(simplex)).value == doctest::Approx(8.0 / 6.0).epsilon(1e-13));

    BodySpec ell = parse_body_spec(json::parse(R"({"kind": "ellipsoid", "dimension": 2, "shape": [1, 0, 0, 0.25]})"));
    CHECK(volume(generate_body(ell)).value == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-13));
  }

  TEST_CASE("random polytopes are determined by their spec") {
    BodySpec r = parse_body_spec(json::parse(R"({"kind": "random-polytope", "dimension": 4, "count": 40, "seed": 7})"));
    const Matrix a = vertices_of(generate_body(r));
    const Matrix b = vertices_of(generate_body(r));
    CHECK(a == b);
    r.seed = 8;
    CHECK_FALSE(vertices_of(generate_body(r)) == a);
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_AS(parse_body_spec(json::parse(R"({"kind": "dodecahedron", "dimension": 2})")), InputError);
    CHECK_THROWS_AS(parse_body_spec(json::parse(R"({"kind": "lp-ball", "p": "two", "dimension": 2})")), InputError);
    CHECK_THROWS_AS(generate_body(parse_body_spec(json::parse(R"({"kind": "lp-ball", "p": 0.5, "dimension": 2})"))), InputError);
    CHECK_THROWS_AS(generate_body(parse_body_spec(json::parse(R"({"kind": "cube", "dimension": 2, "scale": -1})"))), InputError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"bodies": 3})")), InputError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"bodies": [], "dump_stages": ["k9"]})")), InputError);
  }

  TEST_CASE("odd dimensions are rejected before any computation") {
    const auto dir = scratch("odd");
    ExperimentConfig c = parse_config(json::parse(R"({"bodies": [{"id": "b", "kind": "ball"}], "dimensions": [2, 3]})"));
    c.output = (dir / "out.csv").string();
    CHECK_THROWS_AS(run_experiment(c), InputError);
    CHECK_FALSE(std::filesystem::exists(dir / "out.csv"));
  }

  TEST_CASE("single ball row") {
    ExperimentConfig c = parse_config(json::parse(R"({"bodies": [{"id": "b", "kind": "ball", "dimension": 6}], "mc_samples": 20000})"));
    const ExperimentReport r = run_experiment(c);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].gamma == doctest::Approx(32.0).epsilon(1e-8));
    CHECK(r.rows[0].error.empty());
    CHECK(r.all_ok());
  }

  TEST_CASE("report is reproducible and self-consistent") {
    const auto dir = scratch("det");
    ExperimentConfig c = small_config((dir / "a.csv").string());
    c.plot = true;
    c.dump_stages = {"k3"};
    const ExperimentReport r1 = run_experiment(c);
    c.output = (dir / "b.csv").string();
    const ExperimentReport r2 = run_experiment(c);
    const std::string a = slurp(dir / "a.csv");
    CHECK(!a.empty());
    CHECK(a == slurp(dir / "b.csv"));
    CHECK(report_csv(r1) == report_csv(r2));
    CHECK(std::filesystem::exists(dir / "a.svg"));
    CHECK(std::filesystem::exists(dir / "cube.k3.json"));
    CHECK_FALSE(std::filesystem::exists(dir / "a.csv.tmp"));

    REQUIRE(r1.rows.size() == 5);
    CHECK(r1.rows[0].id == "ball-d2");
    CHECK(r1.rows[1].id == "ball-d4");
    for (const auto& row : r1.rows) {
      INFO(row.id, " ", row.error);
      CHECK(row.error.empty());
      CHECK(std::abs(row.gamma - (row.upper / std::numbers::pi) / row.volume_term) <= 1e-9);
      CHECK(row.lower <= row.upper);
    }
    CHECK(a.rfind("schema_version,id,kind,dimension,", 0) == 0);
    CHECK(a.find('\r') == std::string::npos);
    CHECK(a.find("\n1,ball-d2,ball,2,") != std::string::npos);
  }

  TEST_CASE("stage dumps round-trip through the body-spec parser") {
    std::mt19937_64 rng(2);
    const ConvexBody k = ConvexBody::polytope(testing::gaussian(4, 9, rng));
    const BodySpec s = parse_body_spec(body_to_json(k, "k"));
    const ConvexBody back = generate_body(s);
    CHECK((vertices_of(back) - vertices_of(k)).norm() == 0.0);
  }

  TEST_CASE("matrix files") {
    const Matrix m = parse_matrix(json::parse(R"({"dimension": 2, "matrix": [1, 2, 3, 4]})"));
    CHECK(m(0, 1) == 2.0);
    CHECK(m(1, 0) == 3.0);
    CHECK_THROWS_AS(parse_matrix(json::parse(R"({"dimension": 2, "matrix": [1, 2, 3]})")), InputError);
  }
}
