#pragma once

#include "symcap/linalg.hpp"

namespace symcap {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double value = 0.0;
};

// minimize c^T x subject to A x = b, x >= 0.
// Dense two-phase tableau simplex with Bland's rule; meant for the small
// problems of this library (tens of rows, a few thousand columns).
LpResult solve_standard_lp(const Matrix& a, const Vector& b, const Vector& c);

}  // namespace symcap
