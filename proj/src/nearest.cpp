#include "symcap/nearest.hpp"

#include <algorithm>
#include <vector>

namespace symcap {
namespace {

enum class Verdict { inside, outside, converged };

// Wolfe's minimum-norm-point iteration. With radius < 0 it runs to convergence.
Verdict wolfe(const Matrix& pts, double radius, Vector& x) {
  const Vector sq = pts.colwise().squaredNorm();
  const double scale = std::max(sq.maxCoeff(), 1e-300);

  Eigen::Index first = 0;
  sq.minCoeff(&first);
  std::vector<Eigen::Index> active{first};
  std::vector<double> lambda{1.0};
  x = pts.col(first);

  for (int major = 0; major < 10000; ++major) {
    const double xx = x.squaredNorm();
    if (radius >= 0.0 && xx <= radius * radius) return Verdict::inside;
    const Vector proj = pts.transpose() * x;
    Eigen::Index j = 0;
    const double low = proj.minCoeff(&j);
    if (radius >= 0.0 && xx > 0.0 && low > radius * std::sqrt(xx)) return Verdict::outside;
    if (low >= xx - 1e-12 * scale) return Verdict::converged;
    if (std::find(active.begin(), active.end(), j) != active.end()) return Verdict::converged;
    active.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      const auto k = static_cast<Eigen::Index>(active.size());
      Matrix ps(pts.rows(), k);
      for (Eigen::Index i = 0; i < k; ++i) ps.col(i) = pts.col(active[i]);
      Matrix sys = Matrix::Zero(k + 1, k + 1);
      sys.topLeftCorner(k, k) = ps.transpose() * ps;
      sys.block(0, k, k, 1).setOnes();
      sys.block(k, 0, 1, k).setOnes();
      Vector rhs = Vector::Zero(k + 1);
      rhs(k) = 1.0;
      const Vector alpha = sys.completeOrthogonalDecomposition().solve(rhs).head(k);
      if (alpha.minCoeff() > 1e-14) {
        for (Eigen::Index i = 0; i < k; ++i) lambda[i] = alpha(i);
        break;
      }
      double theta = 1.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (alpha(i) <= 1e-14) theta = std::min(theta, lambda[i] / (lambda[i] - alpha(i)));
      }
      for (Eigen::Index i = 0; i < k; ++i) lambda[i] += theta * (alpha(i) - lambda[i]);
      std::vector<Eigen::Index> kept;
      std::vector<double> kept_lambda;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (lambda[i] > 1e-14) {
          kept.push_back(active[i]);
          kept_lambda.push_back(lambda[i]);
        }
      }
      if (kept.empty()) {
        kept.push_back(active.back());
        kept_lambda.push_back(1.0);
      }
      active = std::move(kept);
      lambda = std::move(kept_lambda);
    }
    double total = 0.0;
    for (double l : lambda) total += l;
    x.setZero(pts.rows());
    for (std::size_t i = 0; i < active.size(); ++i) x += (lambda[i] / total) * pts.col(active[i]);
  }
  return Verdict::converged;
}

}  // namespace

Vector min_norm_point(const Matrix& pts) {
  Vector x;
  wolfe(pts, -1.0, x);
  return x;
}

bool within_distance(const Matrix& pts, double radius) {
  Vector x;
  switch (wolfe(pts, radius, x)) {
    case Verdict::inside:
      return true;
    case Verdict::outside:
      return false;
    case Verdict::converged:
      break;
  }
  return x.norm() <= radius;
}

}  // namespace symcap
