#include "symcap/body_ops.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "symcap/errors.hpp"
#include "symcap/hull.hpp"
#include "symcap/kernels.hpp"
#include "symcap/lp.hpp"
#include "symcap/structure.hpp"

namespace symcap {
namespace {

double coordinate_scale(const Matrix& v) { return std::max(v.cwiseAbs().maxCoeff(), 1e-300); }

Matrix checked_inverse(const Matrix& m, Eigen::Index d) {
  if (m.rows() != d || m.cols() != d) {
    throw DomainError("linear_image: matrix must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  Eigen::PartialPivLU<Matrix> lu(m);
  if (lu.rcond() < 1e-14 || !std::isfinite(lu.determinant()) || lu.determinant() == 0.0) {
    throw DomainError("linear_image: matrix is singular");
  }
  return lu.inverse();
}

// Push hyperplanes <n, x> <= o through x -> M x, keeping unit normals.
void map_planes(Matrix& normals, Vector& offsets, const Matrix& inv_t) {
  for (Eigen::Index k = 0; k < normals.cols(); ++k) {
    Vector n = inv_t * normals.col(k);
    const double len = n.norm();
    normals.col(k) = n / len;
    offsets(k) /= len;
  }
}

bool is_scalar_multiple_of_identity(const Matrix& m) {
  const double s = m(0, 0);
  return (m - s * Matrix::Identity(m.rows(), m.cols())).norm() <= 1e-14 * std::abs(s);
}

// Every column of `mapped` lies in K (within tol * scale).
bool closed_under(const ConvexBody& k, const Matrix& mapped, double tol) {
  const VPolytope* vp = k.as_vpolytope();
  const double slack = tol * coordinate_scale(vp->vertices);
  if (vp->hull) {
    for (Eigen::Index i = 0; i < mapped.cols(); ++i) {
      if (!contains(k, mapped.col(i), slack)) return false;
    }
    return true;
  }
  for (Eigen::Index i = 0; i < mapped.cols(); ++i) {
    bool found = false;
    for (Eigen::Index j = 0; j < vp->vertices.cols() && !found; ++j) {
      found = (vp->vertices.col(j) - mapped.col(i)).cwiseAbs().maxCoeff() <= slack;
    }
    if (!found) return false;
  }
  return true;
}

// Rows of an H-polytope as unit normals with scaled offsets.
void normalized_rows(const HPolytope& h, Matrix& n, Vector& o) {
  n = h.normals;
  o = h.offsets;
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    const double len = n.row(i).norm();
    n.row(i) /= len;
    o(i) /= len;
  }
}

bool rows_closed_under(const HPolytope& h, const Matrix& map_normals, double tol) {
  Matrix n;
  Vector o;
  normalized_rows(h, n, o);
  const double scale = std::max(o.cwiseAbs().maxCoeff(), 1e-300);
  const Matrix mapped = n * map_normals.transpose();
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    bool found = false;
    for (Eigen::Index j = 0; j < n.rows() && !found; ++j) {
      found = (n.row(j) - mapped.row(i)).norm() <= tol && std::abs(o(j) - o(i)) <= tol * scale;
    }
    if (!found) return false;
  }
  return true;
}

Vector chebyshev_center(const HPolytope& h) {
  const Eigen::Index m = h.normals.rows();
  const Eigen::Index d = h.normals.cols();
  Matrix a(m, 2 * d + 1 + m);
  a << h.normals, -h.normals, h.normals.rowwise().norm(), Matrix::Identity(m, m);
  Vector c = Vector::Zero(2 * d + 1 + m);
  c(2 * d) = -1.0;
  const LpResult res = solve_standard_lp(a, h.offsets, c);
  if (res.status == LpStatus::unbounded) throw DomainError("halfspaces: region is unbounded");
  if (res.status != LpStatus::optimal || res.x(2 * d) <= 1e-12) {
    throw DomainError("halfspaces: region has empty interior");
  }
  return res.x.head(d) - res.x.segment(d, d);
}

ConvexBody hpolytope_to_v(const HPolytope& h) {
  const Eigen::Index d = h.normals.cols();
  if (d > kMaxHullDimension) {
    throw DomainError("halfspaces: vertex enumeration limited to d <= " +
                      std::to_string(kMaxHullDimension));
  }
  if (h.offsets.minCoeff() <= 0.0) {
    const Vector c = chebyshev_center(h);
    HPolytope shifted{h.normals, h.offsets - h.normals * c};
    return translate(hpolytope_to_v(shifted), c);
  }
  // Polarity: vertices of {<a_i / b_i, x> <= 1} are n / o over facets of conv(a_i / b_i).
  Matrix dual(d, h.normals.rows());
  for (Eigen::Index i = 0; i < h.normals.rows(); ++i) {
    dual.col(i) = h.normals.row(i).transpose() / h.offsets(i);
  }
  const HullResult hr = convex_hull(dual);
  const Vector& offs = hr.data.facet_offsets;
  if (offs.minCoeff() <= 1e-12 * offs.maxCoeff()) {
    throw DomainError("halfspaces: region is unbounded");
  }
  Matrix verts(d, offs.size());
  for (Eigen::Index k = 0; k < offs.size(); ++k) {
    verts.col(k) = hr.data.facet_normals.col(k) / offs(k);
  }
  return ConvexBody::polytope(verts);
}

ConvexBody ellipsoid_to_v(const Ellipsoid& e, double eps) {
  const int d = static_cast<int>(e.center.size());
  const Matrix dirs = sphere_directions(d, ellipsoid_grid_size(d, eps));
  const Matrix pts = (sym_inv_sqrt(e.shape) * dirs).colwise() + e.center;
  return ConvexBody::polytope(pts);
}

double radical_inverse(std::uint64_t k, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

Inradius sampled_inradius(const Matrix& verts) {
  const int d = static_cast<int>(verts.rows());
  const Matrix dirs = sphere_directions(d, 10000);
  const Vector h = support_values(verts, dirs);
  const auto hval = [&](const Vector& u) { return (verts.transpose() * u).maxCoeff(); };

  std::vector<Eigen::Index> order(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + 10, order.end(),
                    [&](Eigen::Index a, Eigen::Index b) { return h(a) < h(b); });

  Inradius best;
  best.radius = std::numeric_limits<double>::infinity();
  best.approximate = true;
  for (int s = 0; s < 10; ++s) {
    Vector u = dirs.col(order[s]);
    double val = h(order[s]);
    double step = 0.1;
    while (step > 1e-9) {
      bool improved = false;
      for (int k = 0; k < d && !improved; ++k) {
        for (double sign : {1.0, -1.0}) {
          Vector cand = u;
          cand(k) += sign * step;
          cand.normalize();
          const double cv = hval(cand);
          if (cv < val) {
            u = cand;
            val = cv;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (val < best.radius) {
      best.radius = val;
      best.direction = u;
    }
  }
  if (!(best.radius > 0.0)) throw DomainError("inradius: origin is not interior");
  return best;
}

}  // namespace

ConvexBody linear_image(const ConvexBody& k, const Matrix& m) {
  const Eigen::Index d = k.dimension();
  const Matrix inv = checked_inverse(m, d);
  const Matrix inv_t = inv.transpose();
  const Family fam = is_scalar_multiple_of_identity(m) ? k.family() : Family::generic;
  if (const auto* vp = k.as_vpolytope()) {
    VPolytope out;
    out.vertices = m * vp->vertices;
    if (vp->hull) {
      auto hd = std::make_shared<HullData>(*vp->hull);
      map_planes(hd->simplex_normals, hd->simplex_offsets, inv_t);
      map_planes(hd->facet_normals, hd->facet_offsets, inv_t);
      hd->interior = m * vp->hull->interior;
      out.hull = std::move(hd);
    }
    return ConvexBody::polytope(std::move(out), fam);
  }
  if (const auto* hp = k.as_hpolytope()) {
    return ConvexBody::halfspaces(hp->normals * inv, hp->offsets);
  }
  const auto& e = *k.as_ellipsoid();
  Matrix shape = inv_t * e.shape * inv;
  shape = (0.5 * (shape + shape.transpose())).eval();
  return ConvexBody::ellipsoid(m * e.center, shape);
}

ConvexBody translate(const ConvexBody& k, const Vector& shift) {
  if (shift.size() != k.dimension()) throw DomainError("translate: dimension mismatch");
  if (const auto* vp = k.as_vpolytope()) {
    VPolytope out;
    out.vertices = vp->vertices.colwise() + shift;
    if (vp->hull) {
      auto hd = std::make_shared<HullData>(*vp->hull);
      hd->simplex_offsets += hd->simplex_normals.transpose() * shift;
      hd->facet_offsets += hd->facet_normals.transpose() * shift;
      hd->interior += shift;
      out.hull = std::move(hd);
    }
    return ConvexBody::polytope(std::move(out), k.family());
  }
  if (const auto* hp = k.as_hpolytope()) {
    return ConvexBody::halfspaces(hp->normals, hp->offsets + hp->normals * shift);
  }
  const auto& e = *k.as_ellipsoid();
  return ConvexBody::ellipsoid(e.center + shift, e.shape);
}

ConvexBody scale(const ConvexBody& k, double s) {
  if (s == 0.0 || !std::isfinite(s)) throw DomainError("scale: factor must be finite and nonzero");
  const Eigen::Index d = k.dimension();
  ConvexBody out = linear_image(k, s * Matrix::Identity(d, d));
  if (const auto* vp = out.as_vpolytope()) return ConvexBody::polytope(*vp, k.family());
  return out;
}

ConvexBody minkowski_sum(const ConvexBody& p, const ConvexBody& q) {
  if (p.dimension() != q.dimension()) throw DomainError("minkowski_sum: dimension mismatch");
  const auto* ep = p.as_ellipsoid();
  const auto* eq = q.as_ellipsoid();
  if (ep && eq) {
    const double lambda = ep->shape.trace() / eq->shape.trace();
    if ((ep->shape - lambda * eq->shape).norm() <= 1e-9 * ep->shape.norm()) {
      // p = q / sqrt(lambda) up to translation, so p + q = (1 + 1/sqrt(lambda)) q
      const double t = 1.0 + 1.0 / std::sqrt(lambda);
      return ConvexBody::ellipsoid(ep->center + eq->center, eq->shape / (t * t));
    }
  }
  const Matrix vp = vertices_of(p);
  const Matrix vq = vertices_of(q);
  if (static_cast<std::int64_t>(vp.cols()) * vq.cols() > kMaxPairwiseSums) {
    throw DomainError("minkowski_sum: " + std::to_string(vp.cols()) + " x " +
                      std::to_string(vq.cols()) + " vertex sums exceed the supported size");
  }
  const Family fam = p.family() == q.family() ? p.family() : Family::generic;
  return ConvexBody::polytope(pairwise_sums(vp, vq), fam);
}

ConvexBody difference_body(const ConvexBody& k) {
  if (const auto* e = k.as_ellipsoid()) {
    return ConvexBody::ellipsoid(Vector::Zero(e->center.size()), e->shape / 4.0);
  }
  if (const auto* vp = k.as_vpolytope()) {
    const Vector mean = vp->vertices.rowwise().mean();
    const ConvexBody centered = translate(k, -mean);
    if (is_origin_symmetric(centered, 1e-10)) return scale(centered, 2.0);
  }
  return minkowski_sum(k, scale(k, -1.0));
}

double support(const ConvexBody& k, const Vector& u) {
  if (u.size() != k.dimension()) throw DomainError("support: dimension mismatch");
  if (const auto* vp = k.as_vpolytope()) return (vp->vertices.transpose() * u).maxCoeff();
  if (const auto* hp = k.as_hpolytope()) {
    const Eigen::Index m = hp->normals.rows();
    const Eigen::Index d = hp->normals.cols();
    Matrix a(m, 2 * d + m);
    a << hp->normals, -hp->normals, Matrix::Identity(m, m);
    Vector c = Vector::Zero(2 * d + m);
    c.head(d) = -u;
    c.segment(d, d) = u;
    const LpResult res = solve_standard_lp(a, hp->offsets, c);
    if (res.status == LpStatus::unbounded) throw DomainError("support: region is unbounded");
    if (res.status != LpStatus::optimal) throw DomainError("support: region is empty");
    return -res.value;
  }
  const auto& e = *k.as_ellipsoid();
  return u.dot(e.center) + std::sqrt(u.dot(e.shape.llt().solve(u)));
}

double gauge(const ConvexBody& k, const Vector& x) {
  if (x.size() != k.dimension()) throw DomainError("gauge: dimension mismatch");
  if (const auto* vp = k.as_vpolytope()) {
    if (vp->hull) {
      const Vector& o = vp->hull->facet_offsets;
      if (o.minCoeff() <= 1e-12 * coordinate_scale(vp->vertices)) {
        throw DomainError("gauge: origin is not in the interior of the body");
      }
      const Vector ratios = (vp->hull->facet_normals.transpose() * x).cwiseQuotient(o);
      return std::max(0.0, ratios.maxCoeff());
    }
    if (x.norm() == 0.0) return 0.0;
    const LpResult res =
        solve_standard_lp(vp->vertices, x, Vector::Ones(vp->vertices.cols()));
    if (res.status != LpStatus::optimal) {
      throw DomainError("gauge: origin is not in the interior of the body");
    }
    return res.value;
  }
  if (const auto* hp = k.as_hpolytope()) {
    if (hp->offsets.minCoeff() <= 0.0) {
      throw DomainError("gauge: origin is not in the interior of the body");
    }
    return std::max(0.0, (hp->normals * x).cwiseQuotient(hp->offsets).maxCoeff());
  }
  const auto& e = *k.as_ellipsoid();
  const double cc = e.center.dot(e.shape * e.center);
  if (cc >= 1.0) throw DomainError("gauge: origin is not in the interior of the body");
  const double xx = x.dot(e.shape * x);
  if (xx == 0.0) return 0.0;
  // s^2 xx - 2 s xc + cc - 1 = 0, gauge = 1 / s_max
  const double xc = x.dot(e.shape * e.center);
  const double s = (xc + std::sqrt(xc * xc - xx * (cc - 1.0))) / xx;
  return 1.0 / s;
}

bool contains(const ConvexBody& k, const Vector& x, double tol) {
  if (const auto* vp = k.as_vpolytope()) {
    if (vp->hull) {
      return (vp->hull->facet_normals.transpose() * x - vp->hull->facet_offsets).maxCoeff() <= tol;
    }
    const Eigen::Index m = vp->vertices.cols();
    Matrix a(vp->vertices.rows() + 1, m);
    a << vp->vertices, Matrix::Ones(1, m);
    Vector b(x.size() + 1);
    b << x, 1.0;
    return solve_standard_lp(a, b, Vector::Zero(m)).status == LpStatus::optimal;
  }
  if (const auto* hp = k.as_hpolytope()) {
    const Vector viol = (hp->normals * x - hp->offsets).cwiseQuotient(hp->normals.rowwise().norm());
    return viol.maxCoeff() <= tol;
  }
  const auto& e = *k.as_ellipsoid();
  const Vector y = x - e.center;
  return std::sqrt(y.dot(e.shape * y)) <= 1.0 + tol;
}

bool is_origin_symmetric(const ConvexBody& k, double tol) {
  if (const auto* e = k.as_ellipsoid()) {
    const double reach = 1.0 / std::sqrt(min_eigenvalue(e->shape));
    return e->center.norm() <= tol * reach;
  }
  if (const auto* hp = k.as_hpolytope()) {
    return rows_closed_under(*hp, -Matrix::Identity(hp->normals.cols(), hp->normals.cols()), tol);
  }
  return closed_under(k, -k.as_vpolytope()->vertices, tol);
}

bool is_i_invariant(const ConvexBody& k, double tol) {
  const int d = k.dimension();
  if (d % 2 != 0) return false;
  const Matrix j = complex_structure(d / 2);
  if (const auto* e = k.as_ellipsoid()) {
    const double reach = 1.0 / std::sqrt(min_eigenvalue(e->shape));
    return (j.transpose() * e->shape * j - e->shape).norm() <= tol * e->shape.norm() &&
           (j * e->center - e->center).norm() <= tol * reach;
  }
  if (const auto* hp = k.as_hpolytope()) return rows_closed_under(*hp, j, tol);
  return closed_under(k, j * k.as_vpolytope()->vertices, tol);
}

Inradius inradius(const ConvexBody& k) {
  if (!is_origin_symmetric(k, 1e-8)) {
    throw DomainError("inradius: body must be centrally symmetric about the origin");
  }
  return origin_inradius(k);
}

Inradius origin_inradius(const ConvexBody& k) {
  Inradius out;
  if (const auto* vp = k.as_vpolytope()) {
    if (!vp->hull) return sampled_inradius(vp->vertices);
    const Vector& o = vp->hull->facet_offsets;
    const double scale = coordinate_scale(vp->vertices);
    Eigen::Index best = 0;
    for (Eigen::Index f = 1; f < o.size(); ++f) {
      if (o(f) < o(best) - 1e-12 * scale) best = f;
    }
    if (o(best) <= 1e-12 * scale) throw DomainError("inradius: origin is not interior");
    out.radius = o(best);
    out.direction = vp->hull->facet_normals.col(best);
    return out;
  }
  if (const auto* hp = k.as_hpolytope()) {
    Matrix n;
    Vector o;
    normalized_rows(*hp, n, o);
    Eigen::Index best = 0;
    o.minCoeff(&best);
    if (o(best) <= 0.0) throw DomainError("inradius: origin is not interior");
    out.radius = o(best);
    out.direction = n.row(best).transpose();
    return out;
  }
  const auto& e = *k.as_ellipsoid();
  if (!is_origin_symmetric(k, 1e-10)) {
    throw DomainError("inradius: ellipsoid must be centered at the origin");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(e.shape);
  const Eigen::Index top = e.shape.rows() - 1;
  out.radius = 1.0 / std::sqrt(es.eigenvalues()(top));
  out.direction = es.eigenvectors().col(top);
  return out;
}

ContactCertificate contact_certificate(const ConvexBody& k, const Inradius& r) {
  if (!is_i_invariant(k, 1e-8)) {
    throw DomainError("contact_certificate: body is not invariant under multiplication by i");
  }
  const int d = k.dimension();
  const Matrix j = complex_structure(d / 2);
  ContactCertificate c;
  c.radius = r.radius;
  c.point = r.radius * r.direction;
  c.rotated_point = j * c.point;
  c.boundary_gap = std::abs(gauge(k, c.point) - 1.0);
  if (!r.approximate && c.boundary_gap > 1e-6) {
    throw NumericalError("contact_certificate: no contact point within 1e-6 of the boundary");
  }
  const double reach = std::max({support(k, c.point), support(k, -c.point),
                                 support(k, c.rotated_point), support(k, -c.rotated_point)});
  c.residual = reach / (r.radius * r.radius) - 1.0;
  return c;
}

Vector barycenter(const ConvexBody& k) {
  if (const auto* e = k.as_ellipsoid()) return e->center;
  if (k.as_hpolytope()) return barycenter(to_vpolytope(k));
  const auto& vp = *k.as_vpolytope();
  if (vp.hull) return hull_barycenter(vp.vertices, *vp.hull);
  const Vector mean = vp.vertices.rowwise().mean();
  if (is_origin_symmetric(translate(k, -mean), 1e-10)) return mean;
  throw DomainError("barycenter: asymmetric polytopes above d = " +
                    std::to_string(kMaxHullDimension) + " are not supported");
}

std::int64_t ellipsoid_grid_size(int d, double eps) {
  const double per_dim = std::ceil(std::pow(1.0 / eps, 0.5 * (d - 1)));
  return 2 * static_cast<std::int64_t>(d) * static_cast<std::int64_t>(per_dim);
}

Matrix sphere_directions(int d, std::int64_t count, std::uint64_t offset) {
  const std::int64_t half = (count + 1) / 2;
  Matrix dirs(d, 2 * half);
  if (d == 1) {
    for (std::int64_t i = 0; i < half; ++i) {
      dirs(0, i) = 1.0;
      dirs(0, half + i) = -1.0;
    }
    return dirs;
  }
  if (d == 2) {
    for (std::int64_t i = 0; i < half; ++i) {
      const double a = std::numbers::pi * (static_cast<double>(i) + 0.5 * static_cast<double>(offset % 2)) /
                       static_cast<double>(half);
      dirs(0, i) = std::cos(a);
      dirs(1, i) = std::sin(a);
    }
  } else {
    static constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    if (d > 16) throw DomainError("sphere_directions: dimension above 16");
    const boost::math::normal normal;
    for (std::int64_t i = 0; i < half; ++i) {
      const std::uint64_t index = offset + static_cast<std::uint64_t>(i) + 1;
      for (int c = 0; c < d; ++c) {
        dirs(c, i) = boost::math::quantile(normal, radical_inverse(index, kPrimes[c]));
      }
      dirs.col(i).normalize();
    }
  }
  dirs.rightCols(half) = -dirs.leftCols(half);
  return dirs;
}

ConvexBody to_vpolytope(const ConvexBody& k, double eps) {
  if (k.as_vpolytope()) return k;
  if (const auto* hp = k.as_hpolytope()) return hpolytope_to_v(*hp);
  return ellipsoid_to_v(*k.as_ellipsoid(), eps);
}

Matrix vertices_of(const ConvexBody& k) {
  if (const auto* vp = k.as_vpolytope()) return vp->vertices;
  return to_vpolytope(k).as_vpolytope()->vertices;
}

}  // namespace symcap
