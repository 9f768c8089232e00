#include "symcap/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "symcap/errors.hpp"

namespace symcap {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr int kMaxIterations = 100000;

class Tableau {
 public:
  Tableau(const Matrix& a, const Vector& b) : m_(a.rows()), n_(a.cols()) {
    t_ = Matrix::Zero(m_, n_ + m_ + 1);
    t_.leftCols(n_) = a;
    t_.block(0, n_, m_, m_).setIdentity();
    t_.col(n_ + m_) = b;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (b(i) < 0) {
        t_.row(i).head(n_) *= -1.0;
        t_(i, n_ + m_) *= -1.0;
      }
    }
    basis_.resize(m_);
    for (Eigen::Index i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  // Returns false when the objective is unbounded below.
  bool optimize(const Vector& cost, Eigen::Index allowed_cols) {
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      Vector cb(m_);
      for (Eigen::Index i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
      const Vector rc = cost.head(allowed_cols) - t_.leftCols(allowed_cols).transpose() * cb;
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        if (rc(j) < -1e-10) { enter = j; break; }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double piv = t_(i, enter);
        if (piv <= kPivotTol) continue;
        const double ratio = t_(i, n_ + m_) / piv;
        if (ratio < best - 1e-14 || (ratio <= best + 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw NumericalError("lp: iteration limit reached");
  }

  void pivot(Eigen::Index r, Eigen::Index col) {
    t_.row(r) /= t_(r, col);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i != r && t_(i, col) != 0.0) t_.row(i) -= t_(i, col) * t_.row(r);
    }
    basis_[r] = col;
  }

  // Pivot artificial variables out of the basis where possible.
  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Vector solution() const {
    Vector x = Vector::Zero(n_ + m_);
    for (Eigen::Index i = 0; i < m_; ++i) x(basis_[i]) = t_(i, n_ + m_);
    return x;
  }

  Eigen::Index m_;
  Eigen::Index n_;

 private:
  Matrix t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpResult solve_standard_lp(const Matrix& a, const Vector& b, const Vector& c) {
  if (a.rows() != b.size() || a.cols() != c.size()) {
    throw DomainError("lp: dimension mismatch");
  }
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  Tableau tab(a, b);

  Vector phase1 = Vector::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.optimize(phase1, n + m);
  const Vector x1 = tab.solution();
  LpResult res;
  if (x1.tail(m).sum() > 1e-9 * (1.0 + b.cwiseAbs().sum())) {
    res.status = LpStatus::infeasible;
    return res;
  }
  tab.drive_out_artificials();

  Vector phase2 = Vector::Zero(n + m);
  phase2.head(n) = c;
  if (!tab.optimize(phase2, n)) {
    res.status = LpStatus::unbounded;
    return res;
  }
  res.status = LpStatus::optimal;
  res.x = tab.solution().head(n);
  res.value = c.dot(res.x);
  return res;
}

}  // namespace symcap
