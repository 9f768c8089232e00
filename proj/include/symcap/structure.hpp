#pragma once

#include "symcap/linalg.hpp"

namespace symcap {

// Standard symplectic structure on R^{2n} with interleaved coordinates
// (x1, y1, ..., xn, yn). J is multiplication by i: J(x, y) = (-y, x) in every
// coordinate plane, so J^2 = -I and J^T J = I.
Matrix complex_structure(int n);

// e^{i theta}: rotation by theta in every (x_j, y_j) plane.
Matrix rotation(int n, double theta);

// omega(u, v) = <J u, v>. Satisfies omega(v, J v) = |v|^2.
double symplectic_form(const Vector& u, const Vector& v);

// |M^T J M - J|_F. Throws DomainError for non-square or odd-sized M.
double symplectic_residual(const Matrix& m);

bool is_symplectic(const Matrix& m, double tol);

// |M^T M - I|_F
double orthogonality_residual(const Matrix& m);

// Half dimension of an even-sized square matrix; throws otherwise.
int half_dimension(const Matrix& m);

}  // namespace symcap
