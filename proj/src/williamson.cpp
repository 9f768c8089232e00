#include "symcap/williamson.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "symcap/body.hpp"
#include "symcap/errors.hpp"
#include "symcap/structure.hpp"

namespace symcap {
namespace {

// Orthonormal basis of the complement of the columns of `used` (assumed orthonormal).
Matrix complement_basis(const Matrix& used, Eigen::Index d) {
  if (used.cols() == 0) return Matrix::Identity(d, d);
  const Matrix proj = Matrix::Identity(d, d) - used * used.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(proj);
  // eigenvalues are ~0 (used directions) or ~1 (free directions), ascending
  return es.eigenvectors().rightCols(d - used.cols());
}

// First vector of the deterministic tie-broken basis of span(e): project e_0,
// e_1, ... onto the span and take the first projection whose squared norm is
// at least half of the largest one. Sign makes the first nonzero entry positive.
Vector pick_in_span(const Matrix& e) {
  const Eigen::Index d = e.rows();
  const Matrix p = e * e.transpose();
  const Vector norms = p.colwise().squaredNorm();
  const double best = norms.maxCoeff();
  Eigen::Index k = 0;
  while (norms(k) < 0.5 * best) ++k;
  Vector u = p.col(k).normalized();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(u(i)) > 1e-10) {
      if (u(i) < 0) u = -u;
      break;
    }
  }
  return u;
}

void check_pd(const Matrix& a, const Tolerances& tol) {
  half_dimension(a);
  if (!is_symmetric(a, tol.sym)) {
    throw DomainError("williamson: matrix is not symmetric");
  }
  const double lo = min_eigenvalue(0.5 * (a + a.transpose()));
  if (!(lo > tol.pd)) {
    std::ostringstream msg;
    msg << "williamson: matrix is not positive definite (smallest eigenvalue " << lo << ")";
    throw DomainError(msg.str());
  }
}

// Core of the Williamson construction from precomputed A^{1/2} and A^{-1/2}.
// The orthogonal O of the Schur step is returned through `o_out`.
WilliamsonForm williamson_from_roots(const Matrix& a, const Matrix& root, const Matrix& inv_root,
                                     const Tolerances& tol, Matrix* o_out) {
  const Eigen::Index d = a.rows();
  const int n = static_cast<int>(d / 2);
  const Matrix j = complex_structure(n);
  Matrix b = inv_root * j * inv_root;
  b = (0.5 * (b - b.transpose())).eval();
  Matrix nmat = b.transpose() * b;
  nmat = (0.5 * (nmat + nmat.transpose())).eval();
  const double nscale = max_eigenvalue(nmat);

  Matrix o(d, d);
  for (int k = 0; k < n; ++k) {
    const Matrix r = complement_basis(o.leftCols(2 * k), d);
    Matrix nr = r.transpose() * nmat * r;
    nr = (0.5 * (nr + nr.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(nr);
    const Vector& mu = es.eigenvalues();
    Eigen::Index tied = 1;
    while (tied < mu.size() && mu(tied) - mu(0) <= 1e-12 * nscale) ++tied;
    const Vector u = pick_in_span(r * es.eigenvectors().leftCols(tied));
    const Vector bu = b * u;
    o.col(2 * k) = u;
    o.col(2 * k + 1) = bu / bu.norm();
  }

  // O^T B O = diag(s_k J_2); s_k sits at (2k+1, 2k).
  const Matrix sigma = o.transpose() * b * o;
  Vector s(n);
  for (int k = 0; k < n; ++k) s(k) = sigma(2 * k + 1, 2 * k);

  WilliamsonForm wf;
  wf.spectrum = s.cwiseInverse();
  Vector lambda_half(d);
  Vector dpairs(d);
  for (int k = 0; k < n; ++k) {
    lambda_half(2 * k) = lambda_half(2 * k + 1) = std::sqrt(s(k));
    dpairs(2 * k) = dpairs(2 * k + 1) = wf.spectrum(k);
  }
  wf.D = dpairs.asDiagonal();
  wf.S = lambda_half.asDiagonal() * o.transpose() * root;

  for (int k = 0; k + 1 < n; ++k) {
    if (wf.spectrum(k) - wf.spectrum(k + 1) < tol.gap * wf.spectrum(k)) wf.near_degenerate = true;
  }
  wf.reconstruction_residual = (wf.S.transpose() * wf.D * wf.S - a).norm() / a.norm();
  wf.symplectic_residual = symplectic_residual(wf.S);
  if (wf.reconstruction_residual > tol.rec || wf.symplectic_residual > tol.symp) {
    std::ostringstream msg;
    msg << "williamson: residuals out of tolerance (reconstruction "
        << wf.reconstruction_residual << ", symplectic " << wf.symplectic_residual << ")";
    throw NumericalError(msg.str());
  }
  if (o_out) *o_out = o;
  return wf;
}

}  // namespace

WilliamsonForm williamson(const Matrix& a_in, const Tolerances& tol) {
  check_pd(a_in, tol);
  const Matrix a = 0.5 * (a_in + a_in.transpose());
  return williamson_from_roots(a, sym_sqrt(a), sym_inv_sqrt(a), tol, nullptr);
}

Vector symplectic_spectrum(const Matrix& a, const Tolerances& tol) {
  return williamson(a, tol).spectrum;
}

WdsForm wds_decompose(const Matrix& t, const Tolerances& tol) {
  const int n = half_dimension(t);
  Eigen::PartialPivLU<Matrix> lu(t);
  const double det = lu.determinant();
  if (!std::isfinite(det) || det == 0.0 || lu.rcond() < 1e-14) {
    throw DomainError("wds_decompose: matrix is singular");
  }
  if (std::abs(std::abs(det) - 1.0) > tol.det) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "wds_decompose: matrix is not volume preserving (det = " << det << ")";
    throw DomainError(msg.str());
  }

  // T = U Sigma V^T gives (T^T T)^{+-1/2} = V Sigma^{+-1} V^T without squaring the
  // condition number. With S = Lambda^{1/2} O^T P and D = Lambda^{-1/2} we get
  // D S = O^T P, so W = T (D S)^{-1} = U_p O where U_p = U V^T is the polar factor.
  const Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix& v = svd.matrixV();
  const Vector& sv = svd.singularValues();
  const Matrix a = v * sv.cwiseAbs2().asDiagonal() * v.transpose();
  const Matrix root = v * sv.asDiagonal() * v.transpose();
  const Matrix inv_root = v * sv.cwiseInverse().asDiagonal() * v.transpose();
  Matrix o;
  const WilliamsonForm wf = williamson_from_roots(0.5 * (a + a.transpose()), 0.5 * (root + root.transpose()),
                                                  0.5 * (inv_root + inv_root.transpose()), tol, &o);
  WdsForm out;
  out.spectrum = wf.spectrum.cwiseSqrt();
  Vector dpairs(2 * n);
  for (int k = 0; k < n; ++k) dpairs(2 * k) = dpairs(2 * k + 1) = out.spectrum(k);
  out.D = dpairs.asDiagonal();
  out.S = wf.S;
  out.W = svd.matrixU() * v.transpose() * o;

  out.reconstruction_residual = (out.W * out.D * out.S - t).norm() / t.norm();
  out.orthogonality_residual = orthogonality_residual(out.W);
  out.symplectic_residual = wf.symplectic_residual;
  if (out.reconstruction_residual > tol.rec || out.orthogonality_residual > tol.symp) {
    std::ostringstream msg;
    msg << "wds_decompose: residuals out of tolerance (reconstruction "
        << out.reconstruction_residual << ", orthogonality " << out.orthogonality_residual << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

double ellipsoid_capacity(const Ellipsoid& e, const Tolerances& tol) {
  const double reach = 1.0 / std::sqrt(std::max(min_eigenvalue(e.shape), 1e-300));
  if (e.center.norm() > 1e-10 * reach) {
    throw DomainError("ellipsoid_capacity: ellipsoid must be centered at the origin");
  }
  const Vector spectrum = symplectic_spectrum(e.shape, tol);
  return std::numbers::pi / spectrum(0);
}

}  // namespace symcap
