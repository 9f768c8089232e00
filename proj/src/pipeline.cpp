#include "symcap/pipeline.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "symcap/errors.hpp"
#include "symcap/rng.hpp"
#include "symcap/structure.hpp"

namespace symcap {
namespace {

constexpr double kPi = std::numbers::pi;

McOptions substream(const McOptions& opt, std::uint64_t stream) {
  McOptions out = opt;
  out.seed = derive_seed(opt.seed, stream);
  return out;
}

bool theta_grid_available(const ConvexBody& k) {
  if (const auto* vp = k.as_vpolytope()) return vp->hull != nullptr;
  return k.dimension() <= kMaxHullDimension || k.as_ellipsoid() != nullptr;
}

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, CounterRng& rng) {
  std::normal_distribution<double> gauss;
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = gauss(rng);
  }
  return g;
}

double ellipsoid_cap(const Matrix& shape, const Tolerances& tol) {
  return ellipsoid_capacity(Ellipsoid{Vector::Zero(shape.rows()), shape}, tol);
}

// Shape of psi E for E = {<A x, x> <= 1}.
Matrix image_shape(const Matrix& a, const Matrix& psi) {
  const Matrix inv = psi.inverse();
  const Matrix s = inv.transpose() * a * inv;
  return 0.5 * (s + s.transpose());
}

}  // namespace

NormalizeResult symplectic_normalize(const ConvexBody& k, const PipelineOptions& opt) {
  if (k.dimension() % 2 != 0) throw DomainError("symplectic_normalize: dimension must be even");
  if (!is_origin_symmetric(k, 1e-8)) {
    throw DomainError("symplectic_normalize: body must be centrally symmetric about the origin");
  }
  const int d = k.dimension();
  NormalizeResult out;
  out.proxy = m_proxy(k, opt.proxy);
  out.T = m_position_map(out.proxy);
  const WdsForm wds = wds_decompose(out.T, opt.tol);
  out.S = wds.S;
  out.body = linear_image(k, out.S);

  out.theta_ratios.assign(kThetaGrid, std::numeric_limits<double>::quiet_NaN());
  out.a2 = std::numeric_limits<double>::quiet_NaN();
  if (!opt.theta_check || !theta_grid_available(*out.body)) return out;

  const ConvexBody& ks = *out.body;
  const double vol_k = out.proxy.body_volume;
  const double inv_d = 1.0 / d;
  // K is symmetric, so theta and theta + pi give the same sum.
  constexpr int half = kThetaGrid / 2;
  std::vector<double> ratio(half, 0.0);
  std::vector<std::exception_ptr> failure(half);
  const auto one = [&](int j) {
    try {
      if (j == 0) {
        ratio[j] = 2.0 * std::pow(volume(ks, substream(opt.mc, 100)).value / vol_k, inv_d);
      } else {
        const Matrix rot = rotation(d / 2, j * kPi / half);
        const double v = sum_volume(ks, linear_image(ks, rot), substream(opt.mc, 100 + j)).value;
        ratio[j] = std::pow(v / vol_k, inv_d);
      }
    } catch (...) {
      failure[j] = std::current_exception();
    }
  };
  if (opt.mc.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int j = 0; j < half; ++j) one(j);
  } else {
    for (int j = 0; j < half; ++j) one(j);
  }
  for (int j = 0; j < half; ++j) {
    if (failure[j]) std::rethrow_exception(failure[j]);
    out.theta_ratios[j] = ratio[j];
    out.theta_ratios[j + half] = ratio[j];
  }
  out.a2 = *std::max_element(out.theta_ratios.begin(), out.theta_ratios.end());
  return out;
}

CapacityBound i_invariant_bound(const ConvexBody& k) {
  if (k.dimension() % 2 != 0) throw DomainError("i_invariant_bound: dimension must be even");
  if (!is_origin_symmetric(k, 1e-8)) {
    throw DomainError("i_invariant_bound: body must be centrally symmetric about the origin");
  }
  if (!is_i_invariant(k, 1e-8)) {
    throw DomainError("i_invariant_bound: body is not invariant under multiplication by i");
  }
  CapacityBound b;
  b.method = BoundMethod::i_invariant;
  b.r = inradius(k);
  b.certificate = contact_certificate(k, b.r);
  b.upper = 2.0 * kPi * b.r.radius * b.r.radius;
  b.lower = kPi * b.r.radius * b.r.radius;
  return b;
}

CapacityBound cylinder_upper_bound(const ConvexBody& k, const PipelineOptions& opt) {
  const int d = k.dimension();
  if (d % 2 != 0) {
    throw DomainError("cylinder_upper_bound: dimension " + std::to_string(d) + " is odd");
  }
  auto trace = std::make_shared<PipelineTrace>();
  trace->shift = barycenter(k);
  const ConvexBody k0 = trace->shift.norm() == 0.0 ? k : translate(k, -trace->shift);
  const Inradius inner = origin_inradius(k0);

  trace->k1 = difference_body(k0);
  NormalizeResult normalized = symplectic_normalize(*trace->k1, opt);
  trace->S = normalized.S;
  trace->proxy = normalized.proxy;
  trace->theta_ratios = normalized.theta_ratios;
  trace->a2 = normalized.a2;
  trace->k2 = std::move(normalized.body);
  trace->k3 = minkowski_sum(*trace->k2, linear_image(*trace->k2, complex_structure(d / 2)));
  trace->r = inradius(*trace->k3);
  trace->certificate = contact_certificate(*trace->k3, trace->r);
  trace->k1_volume = trace->proxy.body_volume;
  trace->k2_volume = volume(*trace->k2, substream(opt.mc, 1)).value;

  CapacityBound b;
  b.method = BoundMethod::cylinder;
  b.r = trace->r;
  b.certificate = trace->certificate;
  b.upper = 2.0 * kPi * trace->r.radius * trace->r.radius;
  b.lower = kPi * inner.radius * inner.radius;
  b.trace = std::move(trace);
  return b;
}

CapacityBound ellipsoid_bound(const Ellipsoid& e, const Tolerances& tol) {
  CapacityBound b;
  b.method = BoundMethod::ellipsoid_exact;
  b.upper = ellipsoid_capacity(e, tol);
  b.r = origin_inradius(ConvexBody::ellipsoid(e.center, e.shape));
  b.lower = kPi * b.r.radius * b.r.radius;
  return b;
}

ViterboReport viterbo_ratio(const ConvexBody& k, const PipelineOptions& opt, std::string id) {
  ViterboReport rep;
  rep.id = std::move(id);
  rep.dimension = k.dimension();
  rep.bound = cylinder_upper_bound(k, opt);
  rep.volume = volume(k, substream(opt.mc, 2));
  rep.volume_term = viterbo_volume_term(rep.volume.value, rep.dimension);
  rep.gamma = (rep.bound.upper / kPi) / rep.volume_term;
  return rep;
}

double rogers_shephard_ratio(const ConvexBody& k, const McOptions& opt) {
  if (k.as_ellipsoid()) return std::pow(2.0, k.dimension());
  const double vk = volume(k, substream(opt, 0)).value;
  const double vd = volume(difference_body(k), substream(opt, 1)).value;
  return vd / vk;
}

double grs_ratio(const ConvexBody& a, const ConvexBody& b, const McOptions& opt) {
  if (a.dimension() != b.dimension()) throw DomainError("grs_ratio: dimension mismatch");
  const double plus = sum_volume(a, b, substream(opt, 0)).value;
  const double minus = sum_volume(a, scale(b, -1.0), substream(opt, 1)).value;
  return std::pow(plus / minus, 1.0 / a.dimension());
}

bool AxiomReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

Matrix random_symplectic(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  const Matrix g = gaussian_matrix(2 * n, 2 * n, rng);
  const Matrix a = g.transpose() * g + 0.5 * Matrix::Identity(2 * n, 2 * n);
  const double theta = 2.0 * kPi * rng.uniform();
  return rotation(n, theta) * williamson(a).S;
}

AxiomReport capacity_axioms_suite(const std::vector<Ellipsoid>& family, std::uint64_t seed,
                                  const Tolerances& tol) {
  AxiomCheck scaling{"monotonicity: E in 2E, capacity ratio 4", true, 0.0};
  AxiomCheck nested{"monotonicity: shrunk ellipsoid inside E", true, 0.0};
  AxiomCheck conformal{"conformality: psi^T J psi = alpha J", true, 0.0};
  AxiomCheck balls{"normalization: c(B(r)) = pi r^2", true, 0.0};
  AxiomCheck cylinder{"normalization: thin-cylinder limit", true, 0.0};

  std::set<int> halves;
  std::uint64_t stream = 0;
  for (const Ellipsoid& e : family) {
    const int d = static_cast<int>(e.center.size());
    if (d % 2 != 0) throw DomainError("capacity_axioms_suite: odd dimension");
    const int n = d / 2;
    halves.insert(n);
    const double c = ellipsoid_capacity(e, tol);

    const double c2 = ellipsoid_cap(e.shape / 4.0, tol);
    const double v1 = std::max(c - c2, 0.0) / c;
    const double v2 = std::abs(c2 / c - 4.0) / 4.0;
    scaling.worst = std::max({scaling.worst, v1, v2});
    if (v1 > 1e-9 || v2 > 1e-8) scaling.passed = false;

    CounterRng rng(derive_seed(seed, stream++));
    const Matrix g = gaussian_matrix(d, d, rng);
    const double cs = ellipsoid_cap(e.shape + 0.1 * g * g.transpose(), tol);
    const double vn = std::max(cs - c, 0.0);
    nested.worst = std::max(nested.worst, vn);
    if (vn > 1e-9) nested.passed = false;

    const Matrix s = random_symplectic(n, derive_seed(seed, stream++));
    Matrix flip = Matrix::Identity(d, d);
    for (int j = 0; j < n; ++j) flip(2 * j + 1, 2 * j + 1) = -1.0;  // flip^T J flip = -J
    for (double alpha : {2.0, 0.5, -3.0}) {
      const Matrix psi = std::sqrt(std::abs(alpha)) * s * (alpha < 0 ? flip : Matrix::Identity(d, d));
      const double cp = ellipsoid_cap(image_shape(e.shape, psi), tol);
      const double v = std::abs(cp - std::abs(alpha) * c) / (std::abs(alpha) * c);
      conformal.worst = std::max(conformal.worst, v);
      if (v > 1e-8) conformal.passed = false;
    }
  }
  for (int n : halves) {
    const int d = 2 * n;
    for (double r : {0.5, 1.0, 2.0}) {
      const double cb = ellipsoid_cap(Matrix::Identity(d, d) / (r * r), tol);
      const double v = std::abs(cb - kPi * r * r) / (kPi * r * r);
      balls.worst = std::max(balls.worst, v);
      if (v > 1e-12) balls.passed = false;

      Matrix shape = Matrix::Identity(d, d) * 1e-6;
      shape(0, 0) = shape(1, 1) = 1.0 / (r * r);
      const double cc = ellipsoid_cap(shape, tol);
      const double w = std::abs(cc - kPi * r * r) / (kPi * r * r);
      cylinder.worst = std::max(cylinder.worst, w);
      if (w > 1e-9) cylinder.passed = false;
    }
  }
  return AxiomReport{{scaling, nested, conformal, balls, cylinder}};
}

const char* to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::i_invariant:
      return "i-invariant";
    case BoundMethod::cylinder:
      return "cylinder";
    case BoundMethod::ellipsoid_exact:
      return "ellipsoid-exact";
  }
  return "?";
}

}  // namespace symcap
