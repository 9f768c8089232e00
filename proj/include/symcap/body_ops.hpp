#pragma once

#include <cstdint>

#include "symcap/body.hpp"

namespace symcap {

// Pairwise sums above this count are refused by minkowski_sum.
inline constexpr std::int64_t kMaxPairwiseSums = 5'000'000;

// Hausdorff target of the ellipsoid boundary grid.
inline constexpr double kEllipsoidApproxEps = 0.05;

// M K. VPolytope: vertices mapped (cached facets follow). HPolytope: normals
// a -> M^{-T} a. Ellipsoid: A -> M^{-T} A M^{-1}, c -> M c.
// Throws DomainError for singular or mis-sized M.
ConvexBody linear_image(const ConvexBody& k, const Matrix& m);

ConvexBody translate(const ConvexBody& k, const Vector& shift);

// s K. Keeps the family tag (cubes stay cubes).
ConvexBody scale(const ConvexBody& k, double s);

// P + Q. Homothetic ellipsoids sum in closed form; everything else goes
// through vertex sums and a hull (the result is a V-polytope).
ConvexBody minkowski_sum(const ConvexBody& p, const ConvexBody& q);

// K - K = K + (-K). Centrally symmetric bodies short-cut to 2 (K - center).
ConvexBody difference_body(const ConvexBody& k);

double support(const ConvexBody& k, const Vector& u);

// Minkowski functional min{t > 0 : x in t K}. Needs the origin in the interior
// of K (DomainError otherwise). VPolytopes without cached facets use an LP over
// convex combinations of the vertices.
double gauge(const ConvexBody& k, const Vector& x);

// x in K, with absolute slack `tol`.
bool contains(const ConvexBody& k, const Vector& x, double tol = 0.0);

// Symmetry tests, relative to the body's size.
bool is_origin_symmetric(const ConvexBody& k, double tol = 1e-8);
bool is_i_invariant(const ConvexBody& k, double tol = 1e-8);

struct Inradius {
  double radius = 0.0;
  Vector direction;  // unit vector; radius * direction is a boundary contact point
  bool approximate = false;  // direction-sampling estimate (d > kMaxHullDimension)
};

// Largest r with r B^d inside K, for K symmetric about the origin.
Inradius inradius(const ConvexBody& k);

// Same, for any body with the origin in its interior (no symmetry check).
Inradius origin_inradius(const ConvexBody& k);

// Contact point data for an i-invariant symmetric body: K lies between the
// hyperplanes +-x + x^perp and +-ix + (ix)^perp with |x| = r.
struct ContactCertificate {
  Vector point;  // x
  Vector rotated_point;  // i x
  double radius = 0.0;
  double boundary_gap = 0.0;  // |gauge(x) - 1|
  // max over K of max(|<v, x>|, |<v, ix>|) / r^2 - 1; <= 0 up to rounding.
  double residual = 0.0;

  bool holds(double tol = 1e-8) const { return residual <= tol && boundary_gap <= 1e-6; }
};

ContactCertificate contact_certificate(const ConvexBody& k, const Inradius& r);

Vector barycenter(const ConvexBody& k);

// Number of boundary points used to approximate an ellipsoid in R^d:
// 2 d ceil((1/eps)^{(d-1)/2}).
std::int64_t ellipsoid_grid_size(int d, double eps = kEllipsoidApproxEps);

// `count` unit vectors from a Halton sequence pushed through the normal
// quantile, followed by their antipodes (count is rounded up to even).
// `offset` shifts the Halton start index. d = 2 uses equally spaced angles.
Matrix sphere_directions(int d, std::int64_t count, std::uint64_t offset = 0);

// V-representation: ellipsoids become inscribed boundary grids, H-polytopes
// are converted by polarity.
ConvexBody to_vpolytope(const ConvexBody& k, double eps = kEllipsoidApproxEps);

// Vertex matrix of a V-polytope or of its to_vpolytope conversion.
Matrix vertices_of(const ConvexBody& k);

}  // namespace symcap
