#pragma once

// Oracles and generators shared by the tests. Everything here is written
// independently of the library code it checks.

#include <algorithm>
#include <cmath>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "symcap/linalg.hpp"

namespace testing {

using symcap::Matrix;
using symcap::Vector;

inline Matrix gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = g(rng);
  }
  return m;
}

// Random symmetric positive definite matrix with condition number below ~1e3.
inline Matrix random_pd(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix g = gaussian(d, d, rng);
  return g * g.transpose() / d + 0.05 * Matrix::Identity(d, d);
}

// Standard J built entry by entry, not through the library.
inline Matrix j_matrix(int n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    j(2 * k, 2 * k + 1) = -1.0;
    j(2 * k + 1, 2 * k) = 1.0;
  }
  return j;
}

// exp(J H) with H symmetric is symplectic.
inline Matrix exp_symplectic(int n, std::uint64_t seed, double size = 0.5) {
  std::mt19937_64 rng(seed);
  Matrix h = gaussian(2 * n, 2 * n, rng);
  h = (0.5 * size * (h + h.transpose())).eval();
  const Matrix jh = j_matrix(n) * h;
  return jh.exp();
}

// Symplectic eigenvalues as moduli of the eigenvalues of J A, descending.
inline std::vector<double> spectrum_oracle(const Matrix& a) {
  const int n = static_cast<int>(a.rows()) / 2;
  const Eigen::VectorXcd ev = Matrix(j_matrix(n) * a).eigenvalues();
  std::vector<double> mods;
  for (int i = 0; i < ev.size(); ++i) mods.push_back(std::abs(ev(i)));
  std::sort(mods.begin(), mods.end(), std::greater<>());
  std::vector<double> out;
  for (std::size_t i = 0; i < mods.size(); i += 2) out.push_back(0.5 * (mods[i] + mods[i + 1]));
  return out;
}

// Andrew's monotone chain; returns the hull counter-clockwise.
inline std::vector<std::pair<double, double>> hull2d(std::vector<std::pair<double, double>> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  const auto cross = [](auto o, auto a, auto b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  return h;
}

inline double shoelace(const std::vector<std::pair<double, double>>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += a.first * b.second - a.second * b.first;
  }
  return 0.5 * std::abs(s);
}

// Area of conv(columns of a 2 x m matrix).
inline double area2d(const Matrix& pts) {
  std::vector<std::pair<double, double>> p;
  for (int i = 0; i < pts.cols(); ++i) p.emplace_back(pts(0, i), pts(1, i));
  return shoelace(hull2d(p));
}

inline Matrix cube_points(int d, double s = 1.0) {
  const int m = 1 << d;
  Matrix v(d, m);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < d; ++i) v(i, k) = (k >> i) & 1 ? s : -s;
  }
  return v;
}

inline Matrix cross_points(int d, double s = 1.0) {
  Matrix v = Matrix::Zero(d, 2 * d);
  for (int i = 0; i < d; ++i) {
    v(i, 2 * i) = s;
    v(i, 2 * i + 1) = -s;
  }
  return v;
}

// conv{0, e_1, ..., e_d}
inline Matrix simplex_points(int d) {
  Matrix v = Matrix::Zero(d, d + 1);
  v.rightCols(d) = Matrix::Identity(d, d);
  return v;
}

inline double factorial(int d) {
  double f = 1.0;
  for (int k = 2; k <= d; ++k) f *= k;
  return f;
}

inline double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

}  // namespace testing
