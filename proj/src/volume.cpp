#include "symcap/volume.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "symcap/body_ops.hpp"
#include "symcap/errors.hpp"
#include "symcap/hull.hpp"
#include "symcap/nearest.hpp"
#include "symcap/positions.hpp"

namespace symcap {
namespace {

// Sampled proposal slightly larger than the ellipsoid it stands for, so that
// boundary points of the target never fall outside through rounding.
constexpr double kProposalInflation = 1.0 + 1e-9;

McProposal proposal_from(const Vector& center, const Matrix& cov_root) {
  return McProposal{center, kProposalInflation * cov_root};
}

double proposal_volume(const McProposal& p) {
  return ball_volume(static_cast<int>(p.center.size())) * std::abs(p.factor.determinant());
}

VolumeEstimate run_mc(const McProposal& proposal, const Membership& inside, const McOptions& opt,
                      const char* what) {
  if (opt.samples < kMinMcSamples) {
    throw DomainError(std::string(what) + ": at least " + std::to_string(kMinMcSamples) +
                      " samples are required");
  }
  const std::uint64_t hits = count_hits(proposal, inside, opt.samples, opt.seed, opt.exec);
  const double n = static_cast<double>(opt.samples);
  const double rate = static_cast<double>(hits) / n;
  if (rate < kMinAcceptance) {
    throw NumericalError(std::string(what) + ": acceptance rate " + std::to_string(rate) +
                         " below 1e-4; use the exact method or reposition the body");
  }
  const double vol = proposal_volume(proposal);
  VolumeEstimate est;
  est.value = vol * rate;
  // Agresti-Coull adjusted rate, so that all-hit or all-miss runs still
  // report a nonzero error.
  const double adj = (static_cast<double>(hits) + 2.0) / (n + 4.0);
  est.std_error = vol * std::sqrt(adj * (1.0 - adj) / (n + 4.0));
  est.method = VolumeMethod::monte_carlo;
  est.samples = opt.samples;
  est.seed = opt.seed;
  return est;
}

McProposal enclosing_proposal(const ConvexBody& k) {
  if (const auto* e = k.as_ellipsoid()) return proposal_from(e->center, sym_inv_sqrt(e->shape));
  const Ellipsoid lw = loewner_ellipsoid(vertices_of(k));
  return proposal_from(lw.center, sym_inv_sqrt(lw.shape));
}

bool exact_available(const ConvexBody& k) {
  if (k.as_ellipsoid()) return true;
  if (const auto* vp = k.as_vpolytope()) return vp->hull != nullptr;
  return k.dimension() <= kMaxHullDimension;
}

}  // namespace

double ball_volume(int d) {
  if (d < 1) throw DomainError("ball_volume: dimension must be positive");
  const double h = 0.5 * d;
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

bool inside_body(const ConvexBody& k, const Vector& x) {
  if (const auto* vp = k.as_vpolytope()) {
    if (vp->hull) {
      return (vp->hull->facet_normals.transpose() * x - vp->hull->facet_offsets).maxCoeff() <= 0.0;
    }
    const double scale = vp->vertices.cwiseAbs().maxCoeff();
    return within_distance(vp->vertices.colwise() - x, 1e-12 * scale);
  }
  if (const auto* hp = k.as_hpolytope()) return (hp->normals * x - hp->offsets).maxCoeff() <= 0.0;
  const auto& e = *k.as_ellipsoid();
  const Vector y = x - e.center;
  return y.dot(e.shape * y) <= 1.0;
}

VolumeEstimate volume_exact(const ConvexBody& k) {
  VolumeEstimate est;
  if (const auto* e = k.as_ellipsoid()) {
    est.value = ball_volume(k.dimension()) / std::sqrt(e->shape.determinant());
    return est;
  }
  if (k.dimension() > kMaxHullDimension) {
    throw DomainError("volume_exact: exact volumes are limited to d <= " +
                      std::to_string(kMaxHullDimension) + "; use volume_mc");
  }
  const ConvexBody v = to_vpolytope(k);
  const auto* vp = v.as_vpolytope();
  if (!vp->hull) throw DomainError("volume_exact: polytope carries no facet structure");
  est.value = hull_volume(vp->vertices, *vp->hull);
  return est;
}

VolumeEstimate volume_mc(const ConvexBody& k, const McOptions& opt) {
  const McProposal proposal = enclosing_proposal(k);
  return run_mc(proposal, [&k](const Vector& x) { return inside_body(k, x); }, opt, "volume_mc");
}

VolumeEstimate volume(const ConvexBody& k, const McOptions& opt) {
  return exact_available(k) ? volume_exact(k) : volume_mc(k, opt);
}

VolumeEstimate sum_with_ellipsoid_volume(const ConvexBody& p, const Ellipsoid& e,
                                         const McOptions& opt) {
  if (p.dimension() != e.center.size()) {
    throw DomainError("sum_with_ellipsoid_volume: dimension mismatch");
  }
  const Matrix verts = vertices_of(p);
  const Ellipsoid lw = loewner_ellipsoid(verts);
  const Matrix cov1 = lw.shape.inverse();
  const Matrix cov2 = e.shape.inverse();
  // E1 + E2 lies in the ellipsoid with covariance (1 + 1/t) cov1 + (1 + t) cov2.
  const double t = std::sqrt(cov1.trace() / cov2.trace());
  Matrix cov = (1.0 + 1.0 / t) * cov1 + (1.0 + t) * cov2;
  cov = (0.5 * (cov + cov.transpose())).eval();
  const McProposal proposal = proposal_from(lw.center + e.center, sym_sqrt(cov));

  const Matrix lt = e.shape.llt().matrixU();  // shape = L L^T, lt = L^T
  const Matrix mapped = lt * verts;
  const Vector shift = e.center;
  const auto inside = [&](const Vector& x) {
    const Vector y = lt * (x - shift);
    return within_distance(mapped.colwise() - y, 1.0);
  };
  return run_mc(proposal, inside, opt, "sum_with_ellipsoid_volume");
}

VolumeEstimate intersection_with_ellipsoid_volume(const ConvexBody& k, const Ellipsoid& e,
                                                  const McOptions& opt) {
  if (k.dimension() != e.center.size()) {
    throw DomainError("intersection_with_ellipsoid_volume: dimension mismatch");
  }
  const McProposal proposal = proposal_from(e.center, sym_inv_sqrt(e.shape));
  return run_mc(proposal, [&k](const Vector& x) { return inside_body(k, x); }, opt,
                "intersection_with_ellipsoid_volume");
}

VolumeEstimate sum_volume(const ConvexBody& a, const ConvexBody& b, const McOptions& opt) {
  const auto* ea = a.as_ellipsoid();
  const auto* eb = b.as_ellipsoid();
  if (ea && eb) {
    const ConvexBody s = minkowski_sum(a, b);
    if (s.as_ellipsoid()) return volume_exact(s);
  }
  if (eb && !ea) return sum_with_ellipsoid_volume(a, *eb, opt);
  if (ea && !eb) return sum_with_ellipsoid_volume(b, *ea, opt);
  if (ea && eb) return sum_with_ellipsoid_volume(to_vpolytope(a), *eb, opt);
  return volume(minkowski_sum(a, b), opt);
}

double viterbo_volume_term(double vol, int d) {
  if (d % 2 != 0) {
    throw DomainError("viterbo_volume_term: dimension " + std::to_string(d) + " is odd");
  }
  return std::pow(vol / ball_volume(d), 2.0 / d);
}

double viterbo_volume_term(const ConvexBody& k, const McOptions& opt) {
  if (k.dimension() % 2 != 0) {
    throw DomainError("viterbo_volume_term: dimension " + std::to_string(k.dimension()) +
                      " is odd");
  }
  return viterbo_volume_term(volume(k, opt).value, k.dimension());
}

}  // namespace symcap
