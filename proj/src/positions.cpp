#include "symcap/positions.hpp"

#include <cmath>
#include <string>

#include "symcap/body_ops.hpp"
#include "symcap/errors.hpp"
#include "symcap/rng.hpp"

namespace symcap {
namespace {

constexpr int kRefreshEvery = 100;

// M_j = q_j^T X^{-1} q_j for every column of q.
Vector leverages(const Matrix& q, const Matrix& xinv) {
  return (q.array() * (xinv * q).array()).colwise().sum().transpose();
}

Matrix weighted_gram(const Matrix& q, const Vector& u) {
  return q * u.asDiagonal() * q.transpose();
}

Matrix inverse_pd(const Matrix& x, const char* what) {
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success || min_eigenvalue(x) <= 1e-14 * max_eigenvalue(x)) {
    throw DomainError(std::string(what) + ": points are not full-dimensional");
  }
  return llt.solve(Matrix::Identity(x.rows(), x.cols()));
}

double ellipsoid_volume(const Ellipsoid& e) {
  return ball_volume(static_cast<int>(e.center.size())) / std::sqrt(e.shape.determinant());
}

McOptions mc_options(const ProxyOptions& opt, std::uint64_t stream) {
  return McOptions{std::max(opt.samples, kMinMcSamples), derive_seed(opt.seed, stream), opt.exec};
}

McOptions substream(const McOptions& opt, std::uint64_t stream) {
  McOptions out = opt;
  out.seed = derive_seed(opt.seed, stream);
  return out;
}

}  // namespace

Ellipsoid loewner_ellipsoid(const Matrix& points, const LoewnerOptions& opt) {
  const Eigen::Index d = points.rows();
  const Eigen::Index m = points.cols();
  if (!(opt.eps > 0.0)) throw DomainError("loewner_ellipsoid: eps must be positive");
  if (m < d + (opt.centered ? 0 : 1)) {
    throw DomainError("loewner_ellipsoid: too few points for a full-dimensional ellipsoid");
  }
  Matrix q;
  if (opt.centered) {
    q = points;
  } else {
    q.resize(d + 1, m);
    q << points, Matrix::Ones(1, m);
  }
  const auto n = static_cast<double>(q.rows());

  Vector u = Vector::Constant(m, 1.0 / static_cast<double>(m));
  Matrix xinv = inverse_pd(weighted_gram(q, u), "loewner_ellipsoid");
  Vector lev = leverages(q, xinv);

  int iter = 0;
  double up = 0.0;
  double down = 0.0;
  for (;; ++iter) {
    Eigen::Index jp = 0;
    const double mp = lev.maxCoeff(&jp);
    Eigen::Index jm = -1;
    double mm = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < m; ++j) {
      if (u(j) > 0.0 && lev(j) < mm) {
        mm = lev(j);
        jm = j;
      }
    }
    up = mp / n - 1.0;
    down = 1.0 - mm / n;
    if (up <= opt.eps && down <= opt.eps) break;
    if (iter >= opt.max_iterations) {
      throw NumericalError("loewner_ellipsoid: no convergence after " +
                           std::to_string(opt.max_iterations) + " iterations (residual " +
                           std::to_string(std::max(up, down)) + ")");
    }

    Eigen::Index j = jp;
    double beta = 0.0;
    if (up >= down) {
      beta = (mp - n) / (n * (mp - 1.0));
    } else {
      // Away step, clipped so that u_j stays nonnegative.
      j = jm;
      beta = std::max((mm - n) / (n * (mm - 1.0)), -u(j) / (1.0 - u(j)));
    }
    u *= (1.0 - beta);
    u(j) += beta;
    if (u(j) < 1e-300) u(j) = 0.0;

    if ((iter + 1) % kRefreshEvery == 0) {
      xinv = inverse_pd(weighted_gram(q, u), "loewner_ellipsoid");
      lev = leverages(q, xinv);
      continue;
    }
    const Vector w = xinv * q.col(j);
    const Vector v = q.transpose() * w;
    const double mj = lev(j);
    const double a = 1.0 / (1.0 - beta);
    const double denom = 1.0 + beta * mj * a;
    const double coeff = beta * a * a / denom;
    xinv = a * xinv - coeff * w * w.transpose();
    lev = a * lev - coeff * v.cwiseAbs2();
  }

  Ellipsoid e;
  Matrix sigma;
  if (opt.centered) {
    e.center = Vector::Zero(d);
    sigma = weighted_gram(points, u);
  } else {
    e.center = points * u;
    sigma = weighted_gram(points, u) - e.center * e.center.transpose();
  }
  e.shape = inverse_pd(0.5 * (sigma + sigma.transpose()), "loewner_ellipsoid") / static_cast<double>(d);
  const Matrix rel = points.colwise() - e.center;
  const double reach = (rel.array() * (e.shape * rel).array()).colwise().sum().maxCoeff();
  e.shape /= reach;
  e.shape = 0.5 * (e.shape + e.shape.transpose());
  return e;
}

Ellipsoid loewner_ellipsoid(const ConvexBody& k, const LoewnerOptions& opt) {
  if (const auto* e = k.as_ellipsoid()) return *e;
  return loewner_ellipsoid(vertices_of(k), opt);
}

MProxy m_proxy(const ConvexBody& k, const ProxyOptions& opt) {
  const int d = k.dimension();
  MProxy proxy;
  if (const auto* e = k.as_ellipsoid()) {
    proxy.ellipsoid = *e;
    proxy.source = ProxySource::known_exact;
    proxy.body_volume = ellipsoid_volume(*e);
    proxy.quality = ProxyQuality{2.0, 1.0, true};
    return proxy;
  }

  proxy.body_volume = volume(k, mc_options(opt, 0)).value;
  const Vector c = barycenter(k);
  if (k.family() == Family::cube || k.family() == Family::cross_polytope) {
    const double radius = std::pow(proxy.body_volume / ball_volume(d), 1.0 / d);
    proxy.ellipsoid = Ellipsoid{c, Matrix::Identity(d, d) / (radius * radius)};
    proxy.source = ProxySource::known_exact;
  } else {
    const ConvexBody sym = scale(difference_body(translate(k, -c)), 0.5);
    LoewnerOptions lo;
    lo.eps = opt.eps;
    lo.centered = true;
    Ellipsoid lw = loewner_ellipsoid(vertices_of(sym), lo);
    lw.shape *= std::pow(ellipsoid_volume(lw) / proxy.body_volume, 2.0 / d);
    lw.center = c;
    proxy.ellipsoid = lw;
    proxy.source = ProxySource::loewner_scaled;
  }

  if (opt.measure_quality) {
    const double sum = sum_with_ellipsoid_volume(k, proxy.ellipsoid, mc_options(opt, 1)).value;
    const double cap =
        intersection_with_ellipsoid_volume(k, proxy.ellipsoid, mc_options(opt, 2)).value;
    proxy.quality.sum = std::pow(sum / proxy.body_volume, 1.0 / d);
    proxy.quality.intersection = std::pow(cap / proxy.body_volume, 1.0 / d);
    proxy.quality.measured = true;
  }
  return proxy;
}

Matrix m_position_map(const MProxy& proxy) {
  const Matrix& a = proxy.ellipsoid.shape;
  const auto d = static_cast<double>(a.rows());
  return std::pow(a.determinant(), -0.5 / d) * sym_sqrt(a);
}

Matrix m_position_map(const ConvexBody& k, const ProxyOptions& opt) {
  ProxyOptions quiet = opt;
  quiet.measure_quality = false;
  return m_position_map(m_proxy(k, quiet));
}

double verify_rbm(const ConvexBody& k1, const ConvexBody& k2, const McOptions& opt) {
  if (k1.dimension() != k2.dimension()) throw DomainError("verify_rbm: dimension mismatch");
  const double inv_d = 1.0 / k1.dimension();
  const double v1 = volume(k1, substream(opt, 0)).value;
  const double v2 = volume(k2, substream(opt, 1)).value;
  const double v12 = sum_volume(k1, k2, substream(opt, 2)).value;
  return std::pow(v12, inv_d) / (std::pow(v1, inv_d) + std::pow(v2, inv_d));
}

std::pair<double, double> verify_with_p(const std::optional<ConvexBody>& p, const ConvexBody& k,
                                        const MProxy& proxy, const McOptions& opt) {
  const double inv_d = 1.0 / k.dimension();
  double with_e = 0.0;
  double with_k = 0.0;
  if (!p) {
    with_e = ellipsoid_volume(proxy.ellipsoid);
    with_k = proxy.body_volume;
  } else {
    if (p->dimension() != k.dimension()) throw DomainError("verify_with_p: dimension mismatch");
    const ConvexBody e = ConvexBody::ellipsoid(proxy.ellipsoid.center, proxy.ellipsoid.shape);
    with_e = sum_volume(*p, e, substream(opt, 0)).value;
    with_k = sum_volume(*p, k, substream(opt, 1)).value;
  }
  const double ratio = std::pow(with_e / with_k, inv_d);
  return {ratio, 1.0 / ratio};
}

const char* to_string(ProxySource s) {
  return s == ProxySource::known_exact ? "known-exact" : "loewner-scaled";
}

}  // namespace symcap
