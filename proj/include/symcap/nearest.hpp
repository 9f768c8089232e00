#pragma once

#include "symcap/linalg.hpp"

namespace symcap {

// Minimum-norm point of conv(columns of pts), by Wolfe's algorithm.
Vector min_norm_point(const Matrix& pts);

// Whether dist(0, conv(pts)) <= radius. Stops as soon as either a point of the
// hull within `radius` or a separating direction with margin > radius is found.
bool within_distance(const Matrix& pts, double radius);

}  // namespace symcap
