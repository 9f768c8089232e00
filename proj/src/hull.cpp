#include "symcap/hull.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <numeric>
#include <string>

#include "symcap/errors.hpp"

namespace symcap {
namespace {

// Fixed capacity keeps the per-facet work free of heap traffic.
constexpr int kMaxDim = 8;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using IndexList = Eigen::Matrix<int, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

struct Facet {
  IndexList verts;      // d point indices
  IndexList neighbors;  // neighbors[k] is the facet across the ridge opposite verts[k]
  SmallVector normal;
  double offset = 0.0;
  std::vector<int> outside;
  int furthest = -1;
  double furthest_dist = 0.0;
  bool alive = true;
};

struct Ridge {
  std::array<int, kMaxDim> key{};  // sorted vertex indices, unused slots zero
  int facet = 0;
  int slot = 0;

  bool same_key(const Ridge& o) const { return key == o.key; }
  bool operator<(const Ridge& o) const {
    return key != o.key ? key < o.key : facet < o.facet;
  }
};

class Quickhull {
 public:
  Quickhull(const Matrix& pts, double eps) : pts_(pts), d_(static_cast<int>(pts.rows())), eps_(eps) {}

  void run();

  std::vector<Facet> facets;
  Vector interior;

 private:
  double distance(const Facet& f, int p) const { return f.normal.dot(pts_.col(p)) - f.offset; }
  void set_plane(Facet& f) const;
  std::vector<int> initial_simplex() const;
  bool assign(int p, const std::vector<int>& candidates);

  const Matrix& pts_;
  int d_;
  double eps_;
};

// Unit normal of the hyperplane through the facet's vertices: null vector of
// the edge matrix by fully pivoted elimination, QR if a pivot vanishes.
void Quickhull::set_plane(Facet& f) const {
  const SmallVector p0 = pts_.col(f.verts[0]);
  f.normal = SmallVector::Zero(d_);
  if (d_ == 1) {
    f.normal(0) = 1.0;
  } else {
    double a[kMaxDim][kMaxDim];
    int perm[kMaxDim];
    const int rows = d_ - 1;
    for (int c = 0; c < d_; ++c) perm[c] = c;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < d_; ++c) a[r][c] = pts_(c, f.verts[r + 1]) - p0(c);
    }
    bool singular = false;
    for (int k = 0; k < rows && !singular; ++k) {
      int pr = k, pc = k;
      for (int i = k; i < rows; ++i) {
        for (int j = k; j < d_; ++j) {
          if (std::abs(a[i][j]) > std::abs(a[pr][pc])) {
            pr = i;
            pc = j;
          }
        }
      }
      if (a[pr][pc] == 0.0) {
        singular = true;
        break;
      }
      if (pr != k) {
        for (int j = 0; j < d_; ++j) std::swap(a[k][j], a[pr][j]);
      }
      if (pc != k) {
        for (int i = 0; i < rows; ++i) std::swap(a[i][k], a[i][pc]);
        std::swap(perm[k], perm[pc]);
      }
      for (int i = k + 1; i < rows; ++i) {
        const double factor = a[i][k] / a[k][k];
        for (int j = k + 1; j < d_; ++j) a[i][j] -= factor * a[k][j];
      }
    }
    if (!singular) {
      double y[kMaxDim];
      y[d_ - 1] = 1.0;
      for (int k = rows - 1; k >= 0; --k) {
        double acc = 0.0;
        for (int j = k + 1; j < d_; ++j) acc += a[k][j] * y[j];
        y[k] = -acc / a[k][k];
      }
      for (int j = 0; j < d_; ++j) f.normal(perm[j]) = y[j];
      f.normal.normalize();
    } else {
      SmallMatrix diffs(d_, d_ - 1);
      for (int j = 1; j < d_; ++j) diffs.col(j - 1) = pts_.col(f.verts[j]) - p0;
      Eigen::HouseholderQR<SmallMatrix> qr(diffs);
      SmallVector e = SmallVector::Zero(d_);
      e(d_ - 1) = 1.0;
      f.normal = qr.householderQ() * e;
    }
  }
  f.offset = f.normal.dot(p0);
  if (f.normal.dot(interior) - f.offset > 0.0) {
    f.normal = -f.normal;
    f.offset = -f.offset;
  }
}

std::vector<int> Quickhull::initial_simplex() const {
  const int m = static_cast<int>(pts_.cols());
  int first = 0;
  for (int p = 1; p < m; ++p) {
    for (int c = 0; c < d_; ++c) {
      if (pts_(c, p) < pts_(c, first)) { first = p; break; }
      if (pts_(c, p) > pts_(c, first)) break;
    }
  }
  std::vector<int> chosen{first};
  Matrix basis(d_, 0);
  for (int k = 1; k <= d_; ++k) {
    int best = -1;
    double best_dist = -1.0;
    Vector best_r;
    for (int p = 0; p < m; ++p) {
      Vector r = pts_.col(p) - pts_.col(first);
      if (basis.cols() > 0) r -= basis * (basis.transpose() * r);
      const double dist = r.norm();
      if (dist > best_dist) {
        best_dist = dist;
        best = p;
        best_r = r;
      }
    }
    if (best_dist <= eps_) {
      throw DomainError("convex hull: points are not full-dimensional (affine rank " +
                        std::to_string(k - 1) + " in R^" + std::to_string(d_) + ")");
    }
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = best_r / best_dist;
    chosen.push_back(best);
  }
  return chosen;
}

bool Quickhull::assign(int p, const std::vector<int>& candidates) {
  for (int fi : candidates) {
    Facet& f = facets[fi];
    const double dist = distance(f, p);
    if (dist > eps_) {
      f.outside.push_back(p);
      if (dist > f.furthest_dist) {
        f.furthest_dist = dist;
        f.furthest = p;
      }
      return true;
    }
  }
  return false;
}

void Quickhull::run() {
  const int m = static_cast<int>(pts_.cols());
  const std::vector<int> simplex = initial_simplex();
  interior = Vector::Zero(d_);
  for (int s : simplex) interior += pts_.col(s);
  interior /= static_cast<double>(d_ + 1);

  for (int k = 0; k <= d_; ++k) {
    Facet f;
    f.verts.resize(d_);
    f.neighbors.resize(d_);
    for (int i = 0, slot = 0; i <= d_; ++i) {
      if (i == k) continue;
      f.verts(slot) = simplex[i];
      f.neighbors(slot++) = i;
    }
    set_plane(f);
    facets.push_back(std::move(f));
  }

  std::vector<char> in_simplex(m, 0);
  for (int s : simplex) in_simplex[s] = 1;
  std::vector<int> all(facets.size());
  std::iota(all.begin(), all.end(), 0);
  for (int p = 0; p < m; ++p) {
    if (!in_simplex[p]) assign(p, all);
  }

  std::vector<int> stack;
  for (int fi = 0; fi <= d_; ++fi) {
    if (!facets[fi].outside.empty()) stack.push_back(fi);
  }

  std::vector<Ridge> ridges;
  std::vector<int> visit_epoch;
  std::vector<char> visible;
  int epoch = 0;

  while (!stack.empty()) {
    const int start = stack.back();
    stack.pop_back();
    if (!facets[start].alive || facets[start].outside.empty()) continue;
    const int apex = facets[start].furthest;

    ++epoch;
    visit_epoch.resize(facets.size(), 0);
    visible.resize(facets.size(), 0);
    std::vector<int> vis{start};
    visit_epoch[start] = epoch;
    visible[start] = 1;
    for (std::size_t q = 0; q < vis.size(); ++q) {
      for (int nb : facets[vis[q]].neighbors) {
        if (visit_epoch[nb] == epoch) continue;
        visit_epoch[nb] = epoch;
        visible[nb] = distance(facets[nb], apex) > eps_ ? 1 : 0;
        if (visible[nb]) vis.push_back(nb);
      }
    }

    // Cone from the apex over the horizon ridges.
    std::vector<int> created;
    for (int g : vis) {
      for (int k = 0; k < d_; ++k) {
        const int nb = facets[g].neighbors[k];
        if (visible[nb] && visit_epoch[nb] == epoch) continue;
        Facet f;
        f.verts.resize(d_);
        f.neighbors.setConstant(d_, -1);
        for (int j = 0, slot = 0; j < d_; ++j) {
          if (j != k) f.verts(slot++) = facets[g].verts(j);
        }
        f.verts(d_ - 1) = apex;
        f.neighbors(d_ - 1) = nb;
        set_plane(f);
        const int id = static_cast<int>(facets.size());
        for (int t = 0; t < d_; ++t) {
          if (facets[nb].neighbors(t) == g) facets[nb].neighbors(t) = id;
        }
        facets.push_back(std::move(f));
        created.push_back(id);
      }
    }

    // Link the new facets along their shared ridges (those containing the apex).
    ridges.clear();
    for (int id : created) {
      for (int j = 0; j + 1 < d_; ++j) {
        Ridge r;
        r.facet = id;
        r.slot = j;
        for (int t = 0, n = 0; t < d_; ++t) {
          if (t != j) r.key[n++] = facets[id].verts(t);
        }
        std::sort(r.key.begin(), r.key.begin() + d_ - 1);
        ridges.push_back(r);
      }
    }
    std::sort(ridges.begin(), ridges.end());
    for (std::size_t i = 0; i < ridges.size(); i += 2) {
      if (i + 1 >= ridges.size() || !ridges[i].same_key(ridges[i + 1])) {
        throw NumericalError("convex hull: horizon is not a closed ridge cycle");
      }
      facets[ridges[i].facet].neighbors(ridges[i].slot) = ridges[i + 1].facet;
      facets[ridges[i + 1].facet].neighbors(ridges[i + 1].slot) = ridges[i].facet;
    }

    for (int g : vis) {
      for (int p : facets[g].outside) {
        if (p != apex) assign(p, created);
      }
      facets[g].alive = false;
      facets[g].outside.clear();
      facets[g].outside.shrink_to_fit();
    }
    for (int id : created) {
      if (!facets[id].outside.empty()) stack.push_back(id);
    }
  }
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

HullResult convex_hull(const Matrix& points) {
  const int d = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  if (d < 1 || m < d + 1) {
    throw DomainError("convex hull: need at least d + 1 points in R^d");
  }
  if (d > kMaxDim) {
    throw DomainError("convex hull: dimension " + std::to_string(d) + " above " + std::to_string(kMaxDim));
  }
  const double scale = std::max(points.cwiseAbs().maxCoeff(), 1e-300);
  const double merge_tol = 1e-12 * scale;
  const double eps = 1e-10 * scale;

  // Merge near-duplicates, keeping the first occurrence in input order.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (int c = 0; c < d; ++c) {
      if (points(c, a) != points(c, b)) return points(c, a) < points(c, b);
    }
    return a < b;
  });
  std::vector<char> keep(m, 1);
  int group_first = order[0];
  for (int k = 1; k < m; ++k) {
    const int cur = order[k];
    if ((points.col(cur) - points.col(group_first)).cwiseAbs().maxCoeff() <= merge_tol) {
      keep[cur] = 0;
      if (cur < group_first) {
        keep[group_first] = 0;
        keep[cur] = 1;
        group_first = cur;
      }
    } else {
      group_first = cur;
    }
  }
  std::vector<int> kept;
  for (int i = 0; i < m; ++i) {
    if (keep[i]) kept.push_back(i);
  }
  Matrix pts(d, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) pts.col(static_cast<Eigen::Index>(i)) = points.col(kept[i]);
  if (pts.cols() < d + 1) {
    throw DomainError("convex hull: need at least d + 1 distinct points in R^d");
  }

  Quickhull qh(pts, eps);
  qh.run();

  std::vector<int> alive;
  for (std::size_t f = 0; f < qh.facets.size(); ++f) {
    if (qh.facets[f].alive) alive.push_back(static_cast<int>(f));
  }
  std::vector<int> remap(pts.cols(), -1);
  for (int f : alive) {
    for (int v : qh.facets[f].verts) remap[v] = 0;
  }
  int next = 0;
  for (auto& r : remap) {
    if (r == 0) r = next++;
  }

  HullResult out;
  out.vertices.resize(d, next);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    if (remap[i] >= 0) out.vertices.col(remap[i]) = pts.col(i);
  }

  HullData& hd = out.data;
  hd.interior = qh.interior;
  const int nf = static_cast<int>(alive.size());
  std::vector<int> slot(qh.facets.size(), -1);
  for (int i = 0; i < nf; ++i) slot[alive[i]] = i;
  hd.simplex_normals.resize(d, nf);
  hd.simplex_offsets.resize(nf);
  hd.simplices.reserve(nf);
  for (int i = 0; i < nf; ++i) {
    const Facet& f = qh.facets[alive[i]];
    std::vector<int> s(d);
    for (int j = 0; j < d; ++j) s[j] = remap[f.verts(j)];
    hd.simplices.push_back(std::move(s));
    hd.simplex_normals.col(i) = f.normal;
    hd.simplex_offsets(i) = f.offset;
  }

  // Adjacent simplices on a common hyperplane form one facet.
  std::vector<int> parent(nf);
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < nf; ++i) {
    const Facet& f = qh.facets[alive[i]];
    for (int nb : f.neighbors) {
      const int j = slot[nb];
      if (j < 0) continue;
      const Facet& g = qh.facets[nb];
      if ((f.normal - g.normal).norm() <= 1e-9 && std::abs(f.offset - g.offset) <= 1e-9 * scale) {
        const int a = find_root(parent, i);
        const int b = find_root(parent, j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<int> facet_of_root(nf, -1);
  hd.simplex_facet.resize(nf);
  std::vector<int> reps;
  for (int i = 0; i < nf; ++i) {
    const int r = find_root(parent, i);
    if (facet_of_root[r] < 0) {
      facet_of_root[r] = static_cast<int>(reps.size());
      reps.push_back(r);
    }
    hd.simplex_facet[i] = facet_of_root[r];
  }
  hd.facet_normals.resize(d, static_cast<Eigen::Index>(reps.size()));
  hd.facet_offsets.resize(static_cast<Eigen::Index>(reps.size()));
  for (std::size_t k = 0; k < reps.size(); ++k) {
    hd.facet_normals.col(static_cast<Eigen::Index>(k)) = hd.simplex_normals.col(reps[k]);
    hd.facet_offsets(static_cast<Eigen::Index>(k)) = hd.simplex_offsets(reps[k]);
  }
  return out;
}

namespace {

double factorial(int d) {
  double f = 1.0;
  for (int k = 2; k <= d; ++k) f *= k;
  return f;
}

}  // namespace

double hull_volume(const Matrix& vertices, const HullData& hull) {
  const Eigen::Index d = vertices.rows();
  double total = 0.0;
  Matrix cone(d, d);
  for (const auto& s : hull.simplices) {
    for (Eigen::Index j = 0; j < d; ++j) cone.col(j) = vertices.col(s[j]) - hull.interior;
    total += std::abs(cone.determinant());
  }
  return total / factorial(static_cast<int>(d));
}

Vector hull_barycenter(const Matrix& vertices, const HullData& hull) {
  const Eigen::Index d = vertices.rows();
  double total = 0.0;
  Vector moment = Vector::Zero(d);
  Matrix cone(d, d);
  for (const auto& s : hull.simplices) {
    Vector centroid = hull.interior;
    for (Eigen::Index j = 0; j < d; ++j) {
      cone.col(j) = vertices.col(s[j]) - hull.interior;
      centroid += vertices.col(s[j]);
    }
    centroid /= static_cast<double>(d + 1);
    const double w = std::abs(cone.determinant());
    total += w;
    moment += w * centroid;
  }
  return moment / total;
}

}  // namespace symcap
