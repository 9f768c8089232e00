#pragma once

#include "symcap/body.hpp"

namespace symcap {

struct HullResult {
  Matrix vertices;  // extreme points, in input order
  HullData data;    // indices refer to `vertices`
};

// Quickhull in R^d. Points within a relative 1e-12 of each other are merged;
// points closer than a relative 1e-10 to a facet hyperplane count as inside.
// Throws DomainError if the points are not full-dimensional.
HullResult convex_hull(const Matrix& points);

// Sum of simplex volumes of the boundary cone from the interior point.
double hull_volume(const Matrix& vertices, const HullData& hull);

// Center of mass of the polytope.
Vector hull_barycenter(const Matrix& vertices, const HullData& hull);

}  // namespace symcap
