#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "symcap/body.hpp"
#include "symcap/linalg.hpp"

namespace symcap {

enum class BodyKind { ball, lp_ball, cube, cross_polytope, simplex, ellipsoid, v_polytope, random_polytope };

struct BodySpec {
  std::string id;
  BodyKind kind = BodyKind::ball;
  int dimension = 0;  // 0: expand over ExperimentConfig::dimensions
  double scale = 1.0;
  double p = 2.0;  // lp-ball exponent, infinity allowed
  std::vector<double> shape;  // ellipsoid, row-major d x d
  std::vector<double> center;  // ellipsoid, optional
  std::vector<std::vector<double>> vertices;  // v-polytope
  int count = 0;  // random-polytope
  std::uint64_t seed = 0;
  bool has_seed = false;
};

struct ExperimentConfig {
  std::vector<BodySpec> bodies;
  std::vector<int> dimensions;
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t quality_samples = 100'000;
  std::uint64_t master_seed = 0;
  Tolerances tol;
  std::string output;
  std::vector<std::string> dump_stages;  // any of k, k1, k2, k3
  bool plot = false;
};

inline constexpr int kSchemaVersion = 1;

struct ExperimentRow {
  std::string id;
  std::string kind;
  int dimension = 0;
  double volume = 0.0;
  std::string volume_method;
  double volume_stderr = 0.0;
  double volume_term = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double r = 0.0;
  double gamma = 0.0;
  double rs_ratio = 0.0;
  double a2 = 0.0;
  double quality_sum = 0.0;
  double quality_intersection = 0.0;
  std::string proxy_source;
  bool inradius_approx = false;
  std::uint64_t mc_seed = 0;
  std::string error;  // empty when the row passed every check
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  bool all_ok() const;
};

// JSON parsing; InputError on malformed input.
BodySpec parse_body_spec(const nlohmann::json& j);
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

// Dense square matrix from {"dimension": d, "matrix": [row-major]}.
Matrix parse_matrix(const nlohmann::json& j);

const char* to_string(BodyKind k);

ConvexBody generate_body(const BodySpec& spec);

// Body-spec JSON (v-polytope or ellipsoid) describing `k`.
nlohmann::json body_to_json(const ConvexBody& k, const std::string& id);

// Bodies without a dimension are expanded over config.dimensions, then every
// dimension is checked to be even. InputError before any computation.
std::vector<BodySpec> expand_bodies(const ExperimentConfig& config);

// Row i uses seed derive_seed(master_seed, i). Writes the CSV (and the SVG
// plot and stage dumps when requested) if config.output is set.
ExperimentReport run_experiment(const ExperimentConfig& config);

std::string report_csv(const ExperimentReport& report);
std::string gamma_svg(const ExperimentReport& report);

// Write to `path` via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace symcap
