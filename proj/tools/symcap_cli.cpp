// symcap: command-line front end for the capacity library.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "json.hpp"
#include "symcap/body_ops.hpp"
#include "symcap/errors.hpp"
#include "symcap/experiments.hpp"
#include "symcap/pipeline.hpp"
#include "symcap/rng.hpp"
#include "symcap/williamson.hpp"

namespace {

using nlohmann::json;
using namespace symcap;

struct Globals {
  std::uint64_t seed = 0;
  std::uint64_t samples = kDefaultMcSamples;
  double tol = -1.0;  // overrides Tolerances::symp when set
  std::string out;
};

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows.push_back(std::vector<double>(m.cols()));
    for (Eigen::Index k = 0; k < m.cols(); ++k) rows.back()[k] = m(i, k);
  }
  return rows;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void emit(const Globals& g, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(g.out, text);
  }
}

Tolerances tolerances(const Globals& g) {
  Tolerances t;
  if (g.tol > 0.0) t.symp = g.tol;
  return t;
}

McOptions mc(const Globals& g) { return McOptions{g.samples, g.seed, Exec::parallel}; }

PipelineOptions pipeline(const Globals& g) {
  PipelineOptions po;
  po.tol = tolerances(g);
  po.mc = mc(g);
  po.proxy.seed = derive_seed(g.seed, 1);
  po.proxy.samples = std::min<std::uint64_t>(g.samples, 100'000);
  return po;
}

ConvexBody load_body(const std::string& path) {
  return generate_body(parse_body_spec(read_json_file(path)));
}

json bound_json(const CapacityBound& b) {
  json j{{"upper", b.upper},
         {"lower", b.lower},
         {"method", to_string(b.method)},
         {"r", b.r.radius},
         {"r_approximate", b.r.approximate}};
  if (b.trace) {
    const auto& t = *b.trace;
    j["trace"] = {{"S", matrix_json(t.S)},
                  {"a2", std::isfinite(t.a2) ? json(t.a2) : json(nullptr)},
                  {"theta_ratios", t.theta_ratios},
                  {"k1_volume", t.k1_volume},
                  {"k2_volume", t.k2_volume},
                  {"proxy_source", to_string(t.proxy.source)},
                  {"quality_sum", t.proxy.quality.sum},
                  {"quality_intersection", t.proxy.quality.intersection},
                  {"certificate_residual", t.certificate.residual},
                  {"certificate_gap", t.certificate.boundary_gap}};
  }
  return j;
}

json volume_json(const VolumeEstimate& v) {
  return {{"value", v.value},
          {"method", v.method == VolumeMethod::exact ? "exact" : "monte-carlo"},
          {"stderr", v.std_error},
          {"samples", v.samples},
          {"seed", v.seed}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Upper bounds on the linearized cylindrical capacity of convex bodies"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Master RNG seed")->capture_default_str();
  app.add_option("--samples", g.samples, "Monte Carlo samples")->capture_default_str();
  app.add_option("--tol", g.tol, "Symplecticity tolerance (default 1e-8)");
  app.add_option("--out", g.out, "Write output here instead of stdout");

  std::string matrix_path, body_path, body_b, config_path, stage = "k3";
  bool force_mc = false, plot = false;

  auto* cmd_will = app.add_subcommand("williamson", "Williamson normal form of a PD matrix");
  cmd_will->add_option("matrix", matrix_path, "JSON with dimension and row-major matrix")->required();
  auto* cmd_wds = app.add_subcommand("wds", "W D S factorization of a volume-preserving matrix");
  cmd_wds->add_option("matrix", matrix_path, "JSON with dimension and row-major matrix")->required();
  auto* cmd_vol = app.add_subcommand("volume", "Volume of a body");
  cmd_vol->add_option("body", body_path, "Body spec JSON")->required();
  cmd_vol->add_flag("--mc", force_mc, "Force Monte Carlo");
  auto* cmd_bound = app.add_subcommand("bound", "Capacity upper bound");
  cmd_bound->add_option("body", body_path, "Body spec JSON")->required();
  auto* cmd_vit = app.add_subcommand("viterbo", "Viterbo ratio gamma of a body");
  cmd_vit->add_option("body", body_path, "Body spec JSON")->required();
  auto* cmd_rs = app.add_subcommand("rogers-shephard", "Vol(K - K) / Vol(K)");
  cmd_rs->add_option("body", body_path, "Body spec JSON")->required();
  auto* cmd_grs = app.add_subcommand("grs", "Vol(A + B)^{1/d} / Vol(A - B)^{1/d}");
  cmd_grs->add_option("a", body_path, "Body spec JSON for A")->required();
  cmd_grs->add_option("b", body_b, "Body spec JSON for B")->required();
  auto* cmd_run = app.add_subcommand("run", "Run an experiment config, write the CSV report");
  cmd_run->add_option("config", config_path, "Experiment config JSON")->required();
  cmd_run->add_flag("--plot", plot, "Also write an SVG of gamma against dimension");
  auto* cmd_dump = app.add_subcommand("dump-stage", "Write one pipeline stage as a body spec");
  cmd_dump->add_option("body", body_path, "Body spec JSON")->required();
  cmd_dump->add_option("--stage", stage, "k1, k2 or k3")->check(CLI::IsMember({"k1", "k2", "k3"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_will) {
      const WilliamsonForm w = williamson(parse_matrix(read_json_file(matrix_path)), tolerances(g));
      emit(g, {{"spectrum", vector_json(w.spectrum)},
               {"S", matrix_json(w.S)},
               {"D", matrix_json(w.D)},
               {"near_degenerate", w.near_degenerate},
               {"reconstruction_residual", w.reconstruction_residual},
               {"symplectic_residual", w.symplectic_residual}});
    } else if (*cmd_wds) {
      const WdsForm f = wds_decompose(parse_matrix(read_json_file(matrix_path)), tolerances(g));
      emit(g, {{"W", matrix_json(f.W)},
               {"D", matrix_json(f.D)},
               {"S", matrix_json(f.S)},
               {"spectrum", vector_json(f.spectrum)},
               {"reconstruction_residual", f.reconstruction_residual},
               {"orthogonality_residual", f.orthogonality_residual},
               {"symplectic_residual", f.symplectic_residual}});
    } else if (*cmd_vol) {
      const ConvexBody k = load_body(body_path);
      emit(g, volume_json(force_mc ? volume_mc(k, mc(g)) : volume(k, mc(g))));
    } else if (*cmd_bound) {
      emit(g, bound_json(cylinder_upper_bound(load_body(body_path), pipeline(g))));
    } else if (*cmd_vit) {
      const ViterboReport r = viterbo_ratio(load_body(body_path), pipeline(g), body_path);
      json j = bound_json(r.bound);
      j["gamma"] = r.gamma;
      j["volume_term"] = r.volume_term;
      j["volume"] = volume_json(r.volume);
      emit(g, j);
    } else if (*cmd_rs) {
      const ConvexBody k = load_body(body_path);
      const double ratio = rogers_shephard_ratio(k, mc(g));
      emit(g, {{"ratio", ratio}, {"bound", std::pow(4.0, k.dimension())}});
    } else if (*cmd_grs) {
      emit(g, {{"ratio", grs_ratio(load_body(body_path), load_body(body_b), mc(g))}});
    } else if (*cmd_run) {
      ExperimentConfig cfg = parse_config(read_json_file(config_path));
      if (!g.out.empty()) cfg.output = g.out;
      if (app.get_option("--seed")->count() > 0) cfg.master_seed = g.seed;
      if (app.get_option("--samples")->count() > 0) cfg.mc_samples = g.samples;
      if (g.tol > 0.0) cfg.tol.symp = g.tol;
      cfg.plot = cfg.plot || plot;
      const ExperimentReport rep = run_experiment(cfg);
      if (cfg.output.empty()) std::cout << report_csv(rep);
      for (const auto& row : rep.rows) {
        if (!row.error.empty()) std::cerr << row.id << ": " << row.error << "\n";
      }
      return rep.all_ok() ? 0 : 1;
    } else if (*cmd_dump) {
      const CapacityBound b = cylinder_upper_bound(load_body(body_path), pipeline(g));
      const auto& t = *b.trace;
      const ConvexBody& k = stage == "k1" ? *t.k1 : stage == "k2" ? *t.k2 : *t.k3;
      emit(g, body_to_json(k, stage));
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
