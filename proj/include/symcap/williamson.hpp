#pragma once

#include "symcap/linalg.hpp"

namespace symcap {

struct Ellipsoid;

// A = S^T D S with S symplectic and D = diag(d1, d1, ..., dn, dn) commuting
// with J. The symplectic spectrum d1 >= ... >= dn is stored separately.
struct WilliamsonForm {
  Matrix S;
  Matrix D;
  Vector spectrum;
  bool near_degenerate = false;  // some adjacent spectrum gap below Tolerances::gap
  double reconstruction_residual = 0.0;  // |S^T D S - A|_F / |A|_F
  double symplectic_residual = 0.0;      // |S^T J S - J|_F
};

// T = W D S with W orthogonal, D complex-linear positive diagonal, S symplectic.
struct WdsForm {
  Matrix W;
  Matrix D;
  Matrix S;
  Vector spectrum;  // diagonal pairs of D, descending
  double reconstruction_residual = 0.0;  // |W D S - T|_F / |T|_F
  double orthogonality_residual = 0.0;   // |W^T W - I|_F
  double symplectic_residual = 0.0;      // |S^T J S - J|_F
};

// Williamson normal form of a positive definite matrix.
//
// Route: B = A^{-1/2} J A^{-1/2} is antisymmetric; its real Schur form
// O^T B O = diag(s_j J_2) is built by deflation on N = B^T B, pairing each
// eigenvector u with v = B u / |B u|. Then S = Lambda^{1/2} O^T A^{1/2} and
// d_j = 1 / s_j. Exactly tied eigenvalues are split deterministically by
// projecting the standard basis vectors in order onto the tied eigenspace.
//
// Throws DomainError if A is not symmetric or not positive definite, and
// NumericalError if the result violates its own invariants.
WilliamsonForm williamson(const Matrix& a, const Tolerances& tol = {});

// Symplectic spectrum only (sorted descending).
Vector symplectic_spectrum(const Matrix& a, const Tolerances& tol = {});

// Factor a volume-preserving T as W D S via the Williamson form of T^T T.
WdsForm wds_decompose(const Matrix& t, const Tolerances& tol = {});

// Linear-symplectic capacity of a centered ellipsoid {x : <A x, x> <= 1}:
// pi / d_max where d_max is the largest symplectic eigenvalue of A.
double ellipsoid_capacity(const Ellipsoid& e, const Tolerances& tol = {});

}  // namespace symcap
