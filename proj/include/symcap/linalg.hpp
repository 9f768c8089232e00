#pragma once

#include <Eigen/Dense>

namespace symcap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Numerical thresholds shared by the symplectic routines.
struct Tolerances {
  double sym = 1e-10;   // symmetry of PD input, relative to max(1, |A|_F)
  double symp = 1e-8;   // |S^T J S - J|_F and |W^T W - I|_F
  double rec = 1e-9;    // relative reconstruction residual
  double pd = 1e-12;    // smallest admissible eigenvalue
  double det = 1e-8;    // | |det T| - 1 | for WDS input
  double gap = 1e-6;    // relative spectral gap below which a warning is raised
};

// Symmetric square root and inverse square root of a PD matrix.
Matrix sym_sqrt(const Matrix& a);
Matrix sym_inv_sqrt(const Matrix& a);

// Largest / smallest eigenvalue of a symmetric matrix.
double max_eigenvalue(const Matrix& a);
double min_eigenvalue(const Matrix& a);

bool is_symmetric(const Matrix& a, double rel_tol);

}  // namespace symcap
