// Runs the acceptance battery and prints one PASS/FAIL line per criterion.
// Exit status is the number of failed criteria.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "support.hpp"
#include "symcap/body_ops.hpp"
#include "symcap/experiments.hpp"
#include "symcap/pipeline.hpp"
#include "symcap/rng.hpp"
#include "symcap/structure.hpp"
#include "symcap/volume.hpp"
#include "symcap/williamson.hpp"

using namespace symcap;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

char buf[512];

template <class... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PipelineOptions battery_options(std::uint64_t seed) {
  PipelineOptions opt;
  opt.mc.samples = 200'000;
  opt.mc.seed = derive_seed(seed, 0);
  opt.proxy.samples = 100'000;
  opt.proxy.seed = derive_seed(seed, 1);
  return opt;
}

struct BatteryBody {
  std::string id;
  ConvexBody body;
};

std::vector<BatteryBody> battery() {
  std::vector<BatteryBody> out;
  for (int d = 2; d <= 6; d += 2) {
    const std::string s = std::to_string(d);
    out.push_back({"ball-" + s, ConvexBody::ball(d)});
    out.push_back({"cube-" + s, ConvexBody::polytope(testing::cube_points(d), Family::cube)});
    out.push_back({"cross-" + s, ConvexBody::polytope(testing::cross_points(d), Family::cross_polytope)});
    out.push_back({"simplex-" + s, ConvexBody::polytope(testing::simplex_points(d))});
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      std::mt19937_64 rng(1000 * d + seed);
      out.push_back({"random-" + s + "-" + std::to_string(seed),
                     ConvexBody::polytope(testing::gaussian(d, d + 2, rng))});
    }
  }
  return out;
}

// Battery results are shared by criteria 6, 7 and 9.
struct BatteryRow {
  std::string id;
  int d = 0;
  ViterboReport report;
  double rs = 0.0;
  std::string error;
};

std::vector<BatteryRow>& battery_rows() {
  static std::vector<BatteryRow> rows = [] {
    std::vector<BatteryRow> r;
    std::uint64_t i = 0;
    for (const auto& b : battery()) {
      BatteryRow row;
      row.id = b.id;
      row.d = b.body.dimension();
      try {
        row.report = viterbo_ratio(b.body, battery_options(i), b.id);
        McOptions mc;
        mc.samples = 200'000;
        mc.seed = derive_seed(i, 2);
        row.rs = rogers_shephard_ratio(b.body, mc);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      r.push_back(std::move(row));
      ++i;
    }
    return r;
  }();
  return rows;
}

Outcome williamson_reconstruction() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_rec = 0.0, worst_symp = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const Matrix j = testing::j_matrix(n);
    for (std::uint64_t s = 0; s < 100; ++s) {
      const Matrix a = testing::random_pd(2 * n, 7000 + 100 * n + s);
      const WilliamsonForm w = williamson(a);
      worst_rec = std::max(worst_rec, (w.S.transpose() * w.D * w.S - a).norm() / a.norm());
      worst_symp = std::max(worst_symp, (w.S.transpose() * j * w.S - j).norm());
    }
  }
  const double t = seconds_since(t0);
  return {worst_rec <= 1e-9 && worst_symp <= 1e-9 && t < 10.0,
          fmt("max rec %.3g, max symp %.3g, %.2f s", worst_rec, worst_symp, t)};
}

Outcome wds_factorization() {
  double rec = 0.0, orth = 0.0, symp = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const int d = 2 * n;
    const Matrix j = testing::j_matrix(n);
    std::mt19937_64 rng(8000 + n);
    for (int s = 0; s < 100; ++s) {
      Matrix t = testing::gaussian(d, d, rng);
      t /= std::pow(std::abs(t.determinant()), 1.0 / d);
      const WdsForm f = wds_decompose(t);
      rec = std::max(rec, (f.W * f.D * f.S - t).norm() / t.norm());
      orth = std::max(orth, (f.W.transpose() * f.W - Matrix::Identity(d, d)).norm());
      symp = std::max(symp, (f.S.transpose() * j * f.S - j).norm());
    }
  }
  return {rec <= 1e-9 && orth <= 1e-8 && symp <= 1e-8,
          fmt("max rec %.3g, max orth %.3g, max symp %.3g", rec, orth, symp)};
}

Outcome ball_pipeline() {
  double worst_u = 0.0, worst_g = 0.0;
  for (int d = 2; d <= 6; d += 2) {
    const ConvexBody b = ConvexBody::ball(d);
    const PipelineOptions opt = battery_options(d);
    worst_u = std::max(worst_u, std::abs(cylinder_upper_bound(b, opt).upper - 32 * kPi));
    worst_g = std::max(worst_g, std::abs(viterbo_ratio(b, opt).gamma - 32.0));
  }
  return {worst_u <= 1e-6 && worst_g <= 1e-6, fmt("|upper - 32 pi| <= %.3g, |gamma - 32| <= %.3g", worst_u, worst_g)};
}

Outcome square_pipeline() {
  const ConvexBody sq = ConvexBody::polytope(testing::cube_points(2), Family::cube);
  const ViterboReport v = viterbo_ratio(sq, battery_options(2));
  const double area = testing::area2d(testing::cube_points(2));
  const bool ok = std::abs(v.bound.upper - 32 * kPi) <= 1e-6 && std::abs(v.gamma - 8 * kPi) <= 1e-5 &&
                  v.bound.upper >= area;
  return {ok, fmt("upper %.12g, gamma %.12g, area oracle %.3g", v.bound.upper, v.gamma, area)};
}

Outcome ellipsoid_soundness() {
  double min_slack = std::numeric_limits<double>::infinity();
  double area_err = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Matrix a = testing::random_pd(2 * n, 9000 + 100 * n + s);
      const Ellipsoid e{Vector::Zero(2 * n), a};
      const double cap = ellipsoid_capacity(e);
      const double upper = cylinder_upper_bound(ConvexBody::ellipsoid(e.center, a), battery_options(s)).upper;
      min_slack = std::min(min_slack, upper - cap);
      if (n == 1) {
        // pi a b = pi / sqrt(det A)
        const double area = kPi / std::sqrt(a.determinant());
        area_err = std::max(area_err, std::abs(cap - area) / area);
      }
    }
  }
  return {min_slack >= -1e-8 && area_err <= 1e-8,
          fmt("min(upper - capacity) %.4g, planar area rel err %.3g", min_slack, area_err)};
}

// Independent vertex check of the contact constraints |<v, x>|, |<v, ix>| <= r^2.
double vertex_violation(const ConvexBody& k, const ContactCertificate& c) {
  const Matrix v = vertices_of(k);
  const double r2 = c.radius * c.radius;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < v.cols(); ++i) {
    worst = std::max(worst, std::abs(v.col(i).dot(c.point)) / r2 - 1.0);
    worst = std::max(worst, std::abs(v.col(i).dot(c.rotated_point)) / r2 - 1.0);
  }
  return worst;
}

Outcome i_invariant() {
  std::vector<BatteryBody> bodies;
  for (int d = 2; d <= 6; d += 2) {
    bodies.push_back({"cube", ConvexBody::polytope(testing::cube_points(d))});
    bodies.push_back({"cross", ConvexBody::polytope(testing::cross_points(d, 2.0))});
  }
  double worst = -1.0;
  int checked = 0;
  bool chain = true;
  for (const auto& b : bodies) {
    const CapacityBound cb = i_invariant_bound(b.body);
    worst = std::max(worst, vertex_violation(b.body, cb.certificate));
    chain = chain && cb.certificate.holds() && cb.lower <= cb.upper;
    ++checked;
  }
  // K3 of every polytope in the battery is i-invariant.
  for (const auto& row : battery_rows()) {
    if (!row.error.empty() || !row.report.bound.trace || !row.report.bound.trace->k3) continue;
    const ConvexBody& k3 = *row.report.bound.trace->k3;
    if (!k3.as_vpolytope()) continue;
    worst = std::max(worst, vertex_violation(k3, row.report.bound.certificate));
    chain = chain && row.report.bound.certificate.holds() && row.report.bound.lower <= row.report.bound.upper;
    ++checked;
  }
  const double cube4 = i_invariant_bound(ConvexBody::polytope(testing::cube_points(4))).upper;
  const bool ok = worst <= 1e-8 && chain && std::abs(cube4 - 2 * kPi) <= 1e-12;
  return {ok, fmt("%d bodies, max vertex violation %.3g, cube^4 upper %.15g", checked, worst, cube4)};
}

Outcome rogers_shephard() {
  Matrix tri(2, 3);
  tri << 0, 1, 0,
         0, 0, 1;
  const double r2 = rogers_shephard_ratio(ConvexBody::polytope(tri));
  const double r3 = rogers_shephard_ratio(ConvexBody::polytope(testing::simplex_points(3)));
  bool battery_ok = true;
  double worst_rel = 0.0;
  for (const auto& row : battery_rows()) {
    if (!row.error.empty()) {
      battery_ok = false;
      continue;
    }
    const double cap = std::pow(4.0, row.d);
    battery_ok = battery_ok && row.rs <= cap;
    worst_rel = std::max(worst_rel, row.rs / cap);
  }
  double bm_slack = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(4242);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 3;
    const ConvexBody a = ConvexBody::polytope(testing::gaussian(d, d + 3, rng));
    const ConvexBody b = ConvexBody::polytope(testing::gaussian(d, d + 3, rng));
    const double va = volume_exact(a).value, vb = volume_exact(b).value;
    const double vs = volume_exact(minkowski_sum(a, b)).value;
    bm_slack = std::min(bm_slack, std::pow(vs, 1.0 / d) - std::pow(va, 1.0 / d) - std::pow(vb, 1.0 / d));
  }
  const bool ok = std::abs(r2 - 6.0) <= 1e-9 && std::abs(r3 - 20.0) <= 1e-7 && battery_ok && bm_slack >= -1e-7;
  return {ok, fmt("triangle %.15g, 3-simplex %.15g, battery max ratio/4^d %.4g, BM min slack %.3g", r2, r3,
                  worst_rel, bm_slack)};
}

Outcome generalized_rs() {
  std::mt19937_64 rng(5151);
  double sym_err = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 3;
    const ConvexBody a = ConvexBody::polytope(testing::gaussian(d, d + 3, rng));
    const ConvexBody b = difference_body(ConvexBody::polytope(testing::gaussian(d, d + 2, rng)));
    sym_err = std::max(sym_err, std::abs(grs_ratio(a, b) - 1.0));
  }
  const ConvexBody tri = ConvexBody::polytope(testing::simplex_points(2));
  const double tt = grs_ratio(tri, tri);
  double max_ratio = 0.0;
  bool finite = true;
  for (int t = 0; t < 100; ++t) {
    const ConvexBody a = ConvexBody::polytope(testing::gaussian(4, 7, rng));
    const ConvexBody b = ConvexBody::polytope(testing::gaussian(4, 7, rng));
    const double r = grs_ratio(a, b);
    finite = finite && std::isfinite(r) && r > 0.0;
    max_ratio = std::max(max_ratio, r);
  }
  const bool ok = sym_err <= 1e-9 && std::abs(tt - std::sqrt(2.0 / 3.0)) <= 1e-9 && finite;
  return {ok, fmt("symmetric-B max |ratio - 1| %.3g, triangle pair %.15g, max over 100 R^4 pairs %.6g", sym_err, tt,
                  max_ratio)};
}

Outcome dimension_independence() {
  double gmax = 0.0, a2max = 0.0, ball_err = 0.0;
  std::string worst_id, errors;
  bool ok = true;
  for (const auto& row : battery_rows()) {
    if (!row.error.empty()) {
      ok = false;
      errors += " " + row.id + ": " + row.error;
      continue;
    }
    const double g = row.report.gamma;
    if (g > gmax) {
      gmax = g;
      worst_id = row.id;
    }
    const double a2 = row.report.bound.trace ? row.report.bound.trace->a2 : std::nan("");
    if (!std::isfinite(a2)) ok = false;
    a2max = std::max(a2max, a2);
    if (row.id.rfind("ball", 0) == 0) ball_err = std::max(ball_err, std::abs(g - 32.0));
    std::printf("    %-12s d=%d gamma=%-10.5g a2=%-8.5g rs=%.6g\n", row.id.c_str(), row.d, g, a2, row.rs);
  }
  ok = ok && gmax <= 64.0 && a2max <= 2.5 && ball_err <= 1e-6;
  return {ok, fmt("%zu bodies, max gamma %.5g (%s), max A2 %.5g, ball |gamma - 32| %.3g", battery_rows().size(), gmax,
                  worst_id.c_str(), a2max, ball_err) +
                  errors};
}

Outcome volume_engine() {
  const VolumeEstimate b = volume_mc(ConvexBody::ball(4), {1'000'000, 2024});
  const double exact = kPi * kPi / 2;
  const double z = std::abs(b.value - exact) / b.std_error;

  int agree = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    std::mt19937_64 rng(6000 + s);
    const ConvexBody k = ConvexBody::polytope(testing::gaussian(4, 8 + static_cast<int>(s % 5), rng));
    const double ex = volume_exact(k).value;
    const VolumeEstimate mc = volume_mc(k, {200'000, s});
    if (std::abs(mc.value - ex) <= 4 * mc.std_error) ++agree;
  }

  // Reruns with 1, 2 and 4 workers, for a raw estimate and a full report.
  const int saved = omp_get_max_threads();
  const ConvexBody cross = ConvexBody::polytope(testing::cross_points(4));
  ExperimentConfig cfg = parse_config(nlohmann::json::parse(
      R"({"bodies": [{"id": "c", "kind": "cube", "dimension": 4},
                     {"id": "r", "kind": "random-polytope", "dimension": 4, "count": 7}],
          "mc_samples": 50000, "quality_samples": 20000, "master_seed": 5})"));
  std::vector<double> values;
  std::vector<std::string> reports;
  for (int t : {1, 2, 4}) {
    omp_set_num_threads(t);
    values.push_back(volume_mc(cross, {300'000, 31}).value);
    reports.push_back(report_csv(run_experiment(cfg)));
  }
  omp_set_num_threads(saved);
  bool identical = true;
  for (std::size_t i = 1; i < values.size(); ++i) {
    identical = identical && std::memcmp(&values[i], &values[0], sizeof(double)) == 0 && reports[i] == reports[0];
  }
  const bool ok = z <= 3.0 && agree >= 19 && identical;
  return {ok, fmt("B^4 %.6f vs %.6f (%.2f stderr), exact/MC agree %d/20, reruns identical: %s", b.value, exact, z,
                  agree, identical ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Williamson reconstruction", williamson_reconstruction},
      {2, "WDS factorization", wds_factorization},
      {3, "Ball pipeline exactness", ball_pipeline},
      {4, "Square pipeline exactness", square_pipeline},
      {5, "Ellipsoid soundness", ellipsoid_soundness},
      {6, "Contact certificates", i_invariant},
      {7, "Rogers-Shephard", rogers_shephard},
      {8, "Generalized Rogers-Shephard", generalized_rs},
      {9, "Dimension-independence battery", dimension_independence},
      {10, "Volume engine", volume_engine},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
