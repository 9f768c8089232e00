#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "symcap/linalg.hpp"

namespace symcap {

// Facet enumeration and exact volumes are attempted only up to this dimension.
inline constexpr int kMaxHullDimension = 6;

// Bodies whose natural ellipsoid is known (used by the M-ellipsoid proxy).
enum class Family { generic, cube, cross_polytope };

// Boundary structure of a full-dimensional V-polytope.
struct HullData {
  // Simplicial boundary pieces; each holds d indices into the vertex matrix.
  std::vector<std::vector<int>> simplices;
  Matrix simplex_normals;  // d x F, unit, outward
  Vector simplex_offsets;  // <n, x> <= offset on the body
  std::vector<int> simplex_facet;  // facet (merged hyperplane) of each simplex
  // Merged facets, in order of first appearance: <normal_k, x> <= offset_k.
  Matrix facet_normals;  // d x H
  Vector facet_offsets;
  Vector interior;  // a strictly interior point
};

struct VPolytope {
  Matrix vertices;  // d x m, one vertex per column
  std::shared_ptr<const HullData> hull;  // null above kMaxHullDimension
};

// { x : <a_i, x> <= b_i }, a_i are the rows of `normals`.
struct HPolytope {
  Matrix normals;
  Vector offsets;
};

// { x : <A (x - c), x - c> <= 1 }
struct Ellipsoid {
  Vector center;
  Matrix shape;
};

class ConvexBody {
 public:
  using Rep = std::variant<VPolytope, HPolytope, Ellipsoid>;

  // Convex hull of the columns of `points`. Up to kMaxHullDimension the vertex
  // list is reduced to extreme points and the facet structure is cached.
  // Throws DomainError when the points do not span R^d.
  static ConvexBody polytope(const Matrix& points, Family family = Family::generic);
  // Trusted constructor for a V-polytope whose hull is already known.
  static ConvexBody polytope(VPolytope p, Family family = Family::generic);
  static ConvexBody halfspaces(Matrix normals, Vector offsets);
  static ConvexBody ellipsoid(Vector center, Matrix shape);
  static ConvexBody ball(int d, double radius = 1.0);

  int dimension() const;
  Family family() const { return family_; }
  const Rep& rep() const { return rep_; }

  const VPolytope* as_vpolytope() const { return std::get_if<VPolytope>(&rep_); }
  const HPolytope* as_hpolytope() const { return std::get_if<HPolytope>(&rep_); }
  const Ellipsoid* as_ellipsoid() const { return std::get_if<Ellipsoid>(&rep_); }

 private:
  ConvexBody(Rep rep, Family family) : rep_(std::move(rep)), family_(family) {}

  Rep rep_;
  Family family_ = Family::generic;
};

}  // namespace symcap
