#include "symcap/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "symcap/body_ops.hpp"
#include "symcap/errors.hpp"
#include "symcap/pipeline.hpp"
#include "symcap/rng.hpp"

namespace symcap {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct KindName {
  BodyKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {BodyKind::ball, "ball"},
    {BodyKind::lp_ball, "lp-ball"},
    {BodyKind::cube, "cube"},
    {BodyKind::cross_polytope, "cross-polytope"},
    {BodyKind::simplex, "simplex"},
    {BodyKind::ellipsoid, "ellipsoid"},
    {BodyKind::v_polytope, "v-polytope"},
    {BodyKind::random_polytope, "random-polytope"},
};

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

double parse_exponent(const json& j) {
  if (!j.contains("p")) return 2.0;
  const json& p = j.at("p");
  if (p.is_string()) {
    const auto s = p.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw InputError("field 'p': expected a number or \"inf\"");
  }
  if (!p.is_number()) throw InputError("field 'p': expected a number or \"inf\"");
  return p.get<double>();
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Matrix cube_vertices(int d, double s) {
  const Eigen::Index m = Eigen::Index{1} << d;
  Matrix v(d, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (int i = 0; i < d; ++i) v(i, k) = ((k >> i) & 1) ? s : -s;
  }
  return v;
}

Matrix cross_vertices(int d, double s) {
  Matrix v = Matrix::Zero(d, 2 * d);
  for (int i = 0; i < d; ++i) {
    v(i, 2 * i) = s;
    v(i, 2 * i + 1) = -s;
  }
  return v;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw InputError(msg);
}

struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back("invariant: " + what);
  }
  std::string joined() const {
    std::string out;
    for (const auto& f : failures) out += (out.empty() ? "" : "; ") + f;
    return out;
  }
};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void dump_stages(const ExperimentConfig& config, const std::string& id, const ConvexBody& k,
                 const PipelineTrace& trace) {
  const std::filesystem::path dir =
      config.output.empty() ? std::filesystem::path(".")
                            : std::filesystem::path(config.output).parent_path();
  for (const auto& stage : config.dump_stages) {
    const ConvexBody* body = nullptr;
    if (stage == "k") body = &k;
    if (stage == "k1") body = &*trace.k1;
    if (stage == "k2") body = &*trace.k2;
    if (stage == "k3") body = &*trace.k3;
    if (!body) continue;
    const auto path = dir / (id + "." + stage + ".json");
    write_file_atomic(path.string(), body_to_json(*body, id + "." + stage).dump(2) + "\n");
  }
}

ExperimentRow process_row(const BodySpec& spec, std::uint64_t row_seed,
                          const ExperimentConfig& config) {
  ExperimentRow row;
  row.id = spec.id;
  row.kind = to_string(spec.kind);
  row.dimension = spec.dimension;
  row.mc_seed = row_seed;
  for (double* f : {&row.volume, &row.volume_stderr, &row.volume_term, &row.upper, &row.lower,
                    &row.r, &row.gamma, &row.rs_ratio, &row.a2, &row.quality_sum,
                    &row.quality_intersection}) {
    *f = kNaN;
  }
  try {
    const ConvexBody body = generate_body(spec);
    PipelineOptions po;
    po.tol = config.tol;
    po.mc = McOptions{config.mc_samples, derive_seed(row_seed, 0), Exec::parallel};
    po.proxy.samples = config.quality_samples;
    po.proxy.seed = derive_seed(row_seed, 1);
    const ViterboReport rep = viterbo_ratio(body, po, spec.id);
    const PipelineTrace& trace = *rep.bound.trace;

    row.volume = rep.volume.value;
    row.volume_method = rep.volume.method == VolumeMethod::exact ? "exact" : "monte-carlo";
    row.volume_stderr = rep.volume.std_error;
    row.volume_term = rep.volume_term;
    row.upper = rep.bound.upper;
    row.lower = rep.bound.lower;
    row.r = trace.r.radius;
    row.gamma = rep.gamma;
    row.a2 = trace.a2;
    row.quality_sum = trace.proxy.quality.sum;
    row.quality_intersection = trace.proxy.quality.intersection;
    row.proxy_source = to_string(trace.proxy.source);
    row.inradius_approx = trace.r.approximate;
    row.rs_ratio =
        rogers_shephard_ratio(body, McOptions{config.mc_samples, derive_seed(row_seed, 2)});

    const int d = spec.dimension;
    const bool exact = rep.volume.method == VolumeMethod::exact;
    Check check;
    check.expect(row.lower <= row.upper + 1e-9, "lower bound exceeds upper bound");
    check.expect(std::abs(row.gamma - (row.upper / std::numbers::pi) / row.volume_term) <=
                     1e-9 * std::max(1.0, row.gamma),
                 "gamma does not recompute from upper and volume_term");
    check.expect(row.rs_ratio <= std::pow(4.0, d) * (exact ? 1.0 + 1e-9 : 1.05),
                 "Rogers-Shephard ratio above 4^d");
    if (std::isfinite(row.a2)) {
      for (double t : trace.theta_ratios) check.expect(t >= 1.0 - 1e-9, "theta ratio below 1");
    }
    if (!row.inradius_approx) {
      check.expect(trace.certificate.holds(1e-8), "contact certificate residual too large");
    }
    row.error = check.joined();
    if (!config.dump_stages.empty()) dump_stages(config, spec.id, body, trace);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

const char* to_string(BodyKind k) {
  for (const auto& kn : kKinds) {
    if (kn.kind == k) return kn.name;
  }
  return "?";
}

BodySpec parse_body_spec(const json& j) {
  require(j.is_object(), "body spec must be a JSON object");
  BodySpec s;
  s.id = field<std::string>(j, "id", "");
  const auto kind = field<std::string>(j, "kind", "");
  bool found = false;
  for (const auto& kn : kKinds) {
    if (kind == kn.name) {
      s.kind = kn.kind;
      found = true;
    }
  }
  require(found, "unknown body kind '" + kind + "'");
  s.dimension = field<int>(j, "dimension", 0);
  s.scale = field<double>(j, "scale", 1.0);
  s.p = parse_exponent(j);
  s.shape = field<std::vector<double>>(j, "shape", {});
  s.center = field<std::vector<double>>(j, "center", {});
  s.vertices = field<std::vector<std::vector<double>>>(j, "vertices", {});
  s.count = field<int>(j, "count", 0);
  s.has_seed = j.contains("seed");
  s.seed = field<std::uint64_t>(j, "seed", 0);

  require(s.dimension >= 0, "dimension must be nonnegative");
  require(std::isfinite(s.scale) && s.scale > 0.0, "scale must be a positive number");
  if (s.kind == BodyKind::lp_ball) require(s.p >= 1.0, "lp-ball needs p >= 1");
  if (s.kind == BodyKind::v_polytope) {
    require(!s.vertices.empty(), "v-polytope needs vertices");
    const auto d = s.vertices.front().size();
    for (const auto& v : s.vertices) require(v.size() == d, "v-polytope vertices differ in length");
    if (s.dimension == 0) s.dimension = static_cast<int>(d);
    require(static_cast<std::size_t>(s.dimension) == d, "v-polytope dimension mismatch");
  }
  if (s.kind == BodyKind::ellipsoid) {
    require(!s.shape.empty(), "ellipsoid needs a shape matrix");
    const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(s.shape.size()))));
    require(static_cast<std::size_t>(d) * d == s.shape.size(), "ellipsoid shape must be square");
    if (s.dimension == 0) s.dimension = d;
    require(s.dimension == d, "ellipsoid dimension mismatch");
    require(s.center.empty() || s.center.size() == static_cast<std::size_t>(d),
            "ellipsoid center length mismatch");
  }
  return s;
}

ExperimentConfig parse_config(const json& j) {
  require(j.is_object(), "config must be a JSON object");
  ExperimentConfig c;
  require(j.contains("bodies") && j.at("bodies").is_array(), "config needs a 'bodies' array");
  for (const auto& b : j.at("bodies")) c.bodies.push_back(parse_body_spec(b));
  c.dimensions = field<std::vector<int>>(j, "dimensions", {});
  c.mc_samples = field<std::uint64_t>(j, "mc_samples", c.mc_samples);
  c.quality_samples = field<std::uint64_t>(j, "quality_samples", c.quality_samples);
  c.master_seed = field<std::uint64_t>(j, "master_seed", 0);
  c.output = field<std::string>(j, "output", "");
  c.dump_stages = field<std::vector<std::string>>(j, "dump_stages", {});
  c.plot = field<bool>(j, "plot", false);
  require(c.mc_samples >= kMinMcSamples, "mc_samples must be at least 10000");
  require(c.quality_samples >= kMinMcSamples, "quality_samples must be at least 10000");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    require(t.is_object(), "'tolerances' must be an object");
    c.tol.sym = field<double>(t, "sym", c.tol.sym);
    c.tol.symp = field<double>(t, "symp", c.tol.symp);
    c.tol.rec = field<double>(t, "rec", c.tol.rec);
    c.tol.pd = field<double>(t, "pd", c.tol.pd);
    c.tol.det = field<double>(t, "det", c.tol.det);
    c.tol.gap = field<double>(t, "gap", c.tol.gap);
  }
  for (const auto& stage : c.dump_stages) {
    require(stage == "k" || stage == "k1" || stage == "k2" || stage == "k3",
            "unknown stage '" + stage + "' (expected k, k1, k2 or k3)");
  }
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

Matrix parse_matrix(const json& j) {
  require(j.is_object() && j.contains("matrix"), "matrix file needs a 'matrix' array");
  const auto entries = field<std::vector<double>>(j, "matrix", {});
  int d = field<int>(j, "dimension", 0);
  if (d == 0) d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(entries.size()))));
  require(d > 0 && static_cast<std::size_t>(d) * d == entries.size(),
          "'matrix' must hold dimension^2 row-major entries");
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) m(i, k) = entries[static_cast<std::size_t>(i) * d + k];
  }
  return m;
}

ConvexBody generate_body(const BodySpec& s) {
  const int d = s.dimension;
  if (d < 1) throw InputError("body '" + s.id + "': dimension must be positive");
  const double sc = s.scale;
  switch (s.kind) {
    case BodyKind::ball:
      return ConvexBody::ball(d, sc);
    case BodyKind::cube:
      return ConvexBody::polytope(cube_vertices(d, sc), Family::cube);
    case BodyKind::cross_polytope:
      return ConvexBody::polytope(cross_vertices(d, sc), Family::cross_polytope);
    case BodyKind::lp_ball: {
      if (s.p < 1.0 || std::isnan(s.p)) throw InputError("lp-ball needs p >= 1");
      if (s.p == 1.0) return ConvexBody::polytope(cross_vertices(d, sc), Family::cross_polytope);
      if (std::isinf(s.p)) return ConvexBody::polytope(cube_vertices(d, sc), Family::cube);
      Matrix pts = sphere_directions(d, ellipsoid_grid_size(d));
      for (Eigen::Index k = 0; k < pts.cols(); ++k) {
        const double norm = std::pow(pts.col(k).cwiseAbs().array().pow(s.p).sum(), 1.0 / s.p);
        pts.col(k) *= sc / norm;
      }
      return ConvexBody::polytope(pts);
    }
    case BodyKind::simplex: {
      Matrix v = Matrix::Zero(d, d + 1);
      v.rightCols(d) = sc * Matrix::Identity(d, d);
      return ConvexBody::polytope(v);
    }
    case BodyKind::ellipsoid: {
      Matrix a(d, d);
      for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) a(i, k) = s.shape[static_cast<std::size_t>(i) * d + k];
      }
      Vector c = Vector::Zero(d);
      for (std::size_t i = 0; i < s.center.size(); ++i) c(static_cast<Eigen::Index>(i)) = s.center[i];
      return ConvexBody::ellipsoid(c, a / (sc * sc));
    }
    case BodyKind::v_polytope: {
      Matrix v(d, static_cast<Eigen::Index>(s.vertices.size()));
      for (std::size_t k = 0; k < s.vertices.size(); ++k) {
        for (int i = 0; i < d; ++i) v(i, static_cast<Eigen::Index>(k)) = sc * s.vertices[k][i];
      }
      return ConvexBody::polytope(v);
    }
    case BodyKind::random_polytope: {
      if (s.count < d + 1) {
        throw InputError("random-polytope '" + s.id + "' needs count >= dimension + 1");
      }
      CounterRng rng(s.seed);
      std::normal_distribution<double> gauss;
      Matrix v(d, s.count);
      for (int k = 0; k < s.count; ++k) {
        for (int i = 0; i < d; ++i) v(i, k) = gauss(rng);
      }
      return ConvexBody::polytope(sc * v);
    }
  }
  throw InputError("unknown body kind");
}

json body_to_json(const ConvexBody& k, const std::string& id) {
  json j;
  j["id"] = id;
  j["dimension"] = k.dimension();
  if (const auto* e = k.as_ellipsoid()) {
    j["kind"] = "ellipsoid";
    std::vector<double> shape;
    for (Eigen::Index i = 0; i < e->shape.rows(); ++i) {
      for (Eigen::Index c = 0; c < e->shape.cols(); ++c) shape.push_back(e->shape(i, c));
    }
    j["shape"] = shape;
    j["center"] = std::vector<double>(e->center.data(), e->center.data() + e->center.size());
    return j;
  }
  const Matrix v = vertices_of(k);
  std::vector<std::vector<double>> verts;
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    verts.emplace_back(v.col(c).data(), v.col(c).data() + v.rows());
  }
  j["kind"] = "v-polytope";
  j["vertices"] = verts;
  return j;
}

std::vector<BodySpec> expand_bodies(const ExperimentConfig& config) {
  std::vector<BodySpec> out;
  for (const auto& b : config.bodies) {
    if (b.dimension > 0) {
      out.push_back(b);
      continue;
    }
    if (config.dimensions.empty()) {
      throw InputError("body '" + b.id + "' has no dimension and the config lists none");
    }
    for (int d : config.dimensions) {
      BodySpec e = b;
      e.dimension = d;
      e.id = b.id + "-d" + std::to_string(d);
      out.push_back(e);
    }
  }
  for (auto& b : out) {
    if (b.dimension < 2 || b.dimension % 2 != 0) {
      throw InputError("body '" + b.id + "': dimension " + std::to_string(b.dimension) +
                       " is not even; capacities live in R^{2n}");
    }
  }
  return out;
}

bool ExperimentReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const ExperimentRow& r) { return r.error.empty(); });
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  std::vector<BodySpec> specs = expand_bodies(config);
  ExperimentReport report;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::uint64_t row_seed = derive_seed(config.master_seed, i);
    if (!specs[i].has_seed) specs[i].seed = derive_seed(row_seed, 3);
    report.rows.push_back(process_row(specs[i], row_seed, config));
  }
  if (!config.output.empty()) {
    write_file_atomic(config.output, report_csv(report));
    if (config.plot) {
      const auto svg = std::filesystem::path(config.output).replace_extension(".svg");
      write_file_atomic(svg.string(), gamma_svg(report));
    }
  }
  return report;
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "schema_version,id,kind,dimension,volume,volume_method,volume_stderr,volume_term,"
         "upper,lower,r,gamma,rs_ratio,a2,quality_sum,quality_intersection,proxy_source,"
         "inradius_approx,mc_seed,error\n";
  for (const auto& r : report.rows) {
    out << kSchemaVersion << ',' << csv_field(r.id) << ',' << r.kind << ',' << r.dimension << ','
        << format_double(r.volume) << ',' << r.volume_method << ','
        << format_double(r.volume_stderr) << ',' << format_double(r.volume_term) << ','
        << format_double(r.upper) << ',' << format_double(r.lower) << ',' << format_double(r.r)
        << ',' << format_double(r.gamma) << ',' << format_double(r.rs_ratio) << ','
        << format_double(r.a2) << ',' << format_double(r.quality_sum) << ','
        << format_double(r.quality_intersection) << ',' << r.proxy_source << ','
        << (r.inradius_approx ? "true" : "false") << ',' << r.mc_seed << ','
        << csv_field(r.error) << '\n';
  }
  return out.str();
}

std::string gamma_svg(const ExperimentReport& report) {
  constexpr double w = 640, h = 400, left = 60, right = 20, top = 20, bottom = 50;
  double dmax = 2, gmax = 64;
  for (const auto& r : report.rows) {
    dmax = std::max(dmax, static_cast<double>(r.dimension));
    if (std::isfinite(r.gamma)) gmax = std::max(gmax, r.gamma);
  }
  gmax *= 1.1;
  const auto px = [&](double d) { return left + (d / (dmax + 2)) * (w - left - right); };
  const auto py = [&](double g) { return h - bottom - (g / gmax) * (h - top - bottom); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << w - right << "\" y2=\""
    << py(0) << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << py(0)
    << "\" stroke=\"black\"/>\n";
  for (double g : {32.0, 64.0}) {
    s << "<line x1=\"" << left << "\" y1=\"" << py(g) << "\" x2=\"" << w - right << "\" y2=\""
      << py(g) << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
    s << "<text x=\"" << left - 8 << "\" y=\"" << py(g) + 4
      << "\" font-size=\"11\" text-anchor=\"end\">" << g << "</text>\n";
  }
  for (int d = 2; d <= static_cast<int>(dmax); d += 2) {
    s << "<text x=\"" << px(d) << "\" y=\"" << h - bottom + 18
      << "\" font-size=\"11\" text-anchor=\"middle\">" << d << "</text>\n";
  }
  s << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 10
    << "\" font-size=\"12\" text-anchor=\"middle\">dimension 2n</text>\n";
  s << "<text x=\"15\" y=\"" << (top + h - bottom) / 2
    << "\" font-size=\"12\" transform=\"rotate(-90 15 " << (top + h - bottom) / 2
    << ")\" text-anchor=\"middle\">gamma</text>\n";
  for (const auto& r : report.rows) {
    if (!std::isfinite(r.gamma)) continue;
    s << "<circle cx=\"" << px(r.dimension) << "\" cy=\"" << py(r.gamma)
      << "\" r=\"4\" fill=\"steelblue\" fill-opacity=\"0.7\"><title>" << xml_escape(r.id) << " "
      << format_double(r.gamma) << "</title></circle>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp + "'");
    out << content;
    if (!out.flush()) throw InputError("write to '" + tmp + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace symcap
