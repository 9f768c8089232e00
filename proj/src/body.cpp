#include "symcap/body.hpp"

#include <string>

#include "symcap/errors.hpp"
#include "symcap/hull.hpp"

namespace symcap {

ConvexBody ConvexBody::polytope(const Matrix& points, Family family) {
  const Eigen::Index d = points.rows();
  if (d < 1 || points.cols() < d + 1) {
    throw DomainError("polytope: need at least d + 1 vertices in R^" + std::to_string(d));
  }
  if (!points.allFinite()) throw DomainError("polytope: non-finite vertex coordinates");
  VPolytope p;
  if (d <= kMaxHullDimension) {
    HullResult h = convex_hull(points);
    p.vertices = std::move(h.vertices);
    p.hull = std::make_shared<const HullData>(std::move(h.data));
  } else {
    const Vector mean = points.rowwise().mean();
    const Matrix centered = points.colwise() - mean;
    Eigen::JacobiSVD<Matrix> svd(centered);
    const Vector sv = svd.singularValues();
    if (sv(d - 1) <= 1e-10 * std::max(sv(0), 1e-300)) {
      throw DomainError("polytope: vertices are not full-dimensional");
    }
    p.vertices = points;
  }
  return ConvexBody(std::move(p), family);
}

ConvexBody ConvexBody::polytope(VPolytope p, Family family) {
  return ConvexBody(std::move(p), family);
}

ConvexBody ConvexBody::halfspaces(Matrix normals, Vector offsets) {
  if (normals.rows() != offsets.size() || normals.rows() <= normals.cols()) {
    throw DomainError("halfspaces: need more than d inequalities with one offset each");
  }
  for (Eigen::Index i = 0; i < normals.rows(); ++i) {
    if (normals.row(i).norm() == 0.0) throw DomainError("halfspaces: zero normal");
  }
  return ConvexBody(HPolytope{std::move(normals), std::move(offsets)}, Family::generic);
}

ConvexBody ConvexBody::ellipsoid(Vector center, Matrix shape) {
  if (shape.rows() != shape.cols() || shape.rows() != center.size()) {
    throw DomainError("ellipsoid: shape must be d x d with a d-dimensional center");
  }
  if (!is_symmetric(shape, 1e-10)) throw DomainError("ellipsoid: shape matrix is not symmetric");
  const Matrix sym = 0.5 * (shape + shape.transpose());
  if (!(min_eigenvalue(sym) > 0.0)) {
    throw DomainError("ellipsoid: shape matrix is not positive definite");
  }
  return ConvexBody(Ellipsoid{std::move(center), sym}, Family::generic);
}

ConvexBody ConvexBody::ball(int d, double radius) {
  if (d < 1 || !(radius > 0.0)) throw DomainError("ball: need d >= 1 and radius > 0");
  return ellipsoid(Vector::Zero(d), Matrix::Identity(d, d) / (radius * radius));
}

int ConvexBody::dimension() const {
  return std::visit(
      [](const auto& r) -> int {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, VPolytope>) {
          return static_cast<int>(r.vertices.rows());
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          return static_cast<int>(r.normals.cols());
        } else {
          return static_cast<int>(r.center.size());
        }
      },
      rep_);
}

}  // namespace symcap
