#include "symcap/structure.hpp"

#include <cmath>
#include <string>

#include "symcap/errors.hpp"

namespace symcap {

Matrix sym_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

Matrix sym_inv_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

double max_eigenvalue(const Matrix& a) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(a, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

double min_eigenvalue(const Matrix& a) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(a, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.transpose()).norm() <= rel_tol * std::max(1.0, a.norm());
}

int half_dimension(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DomainError("matrix must be square, got " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()));
  }
  if (m.rows() == 0 || m.rows() % 2 != 0) {
    throw DomainError("symplectic routines need an even dimension, got " +
                      std::to_string(m.rows()));
  }
  return static_cast<int>(m.rows() / 2);
}

Matrix complex_structure(int n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    j(2 * k, 2 * k + 1) = -1.0;
    j(2 * k + 1, 2 * k) = 1.0;
  }
  return j;
}

Matrix rotation(int n, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix r = Matrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    r(2 * k, 2 * k) = c;
    r(2 * k, 2 * k + 1) = -s;
    r(2 * k + 1, 2 * k) = s;
    r(2 * k + 1, 2 * k + 1) = c;
  }
  return r;
}

double symplectic_form(const Vector& u, const Vector& v) {
  if (u.size() != v.size() || u.size() % 2 != 0) {
    throw DomainError("symplectic_form: vectors must share an even dimension");
  }
  double acc = 0.0;
  for (Eigen::Index k = 0; k < u.size(); k += 2) {
    // <J u, v> with J u = (-u_y, u_x) per plane
    acc += -u(k + 1) * v(k) + u(k) * v(k + 1);
  }
  return acc;
}

double symplectic_residual(const Matrix& m) {
  const int n = half_dimension(m);
  const Matrix j = complex_structure(n);
  return (m.transpose() * j * m - j).norm();
}

bool is_symplectic(const Matrix& m, double tol) { return symplectic_residual(m) <= tol; }

double orthogonality_residual(const Matrix& m) {
  return (m.transpose() * m - Matrix::Identity(m.cols(), m.cols())).norm();
}

}  // namespace symcap
