#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "symcap/body.hpp"
#include "symcap/volume.hpp"

namespace symcap {

struct LoewnerOptions {
  double eps = 1e-4;
  int max_iterations = 100'000;
  // Force the center to the origin (for point sets symmetric about 0).
  bool centered = false;
};

// Minimum-volume enclosing ellipsoid of the columns of `points`, by Khachiyan's
// barycentric ascent with Todd-Yildirim away steps. The result is rescaled so
// that every point has gauge <= 1 exactly, which keeps containment while the
// volume stays within the (1 + eps) accuracy of the solver.
// DomainError for degenerate input, NumericalError if the cap is hit.
Ellipsoid loewner_ellipsoid(const Matrix& points, const LoewnerOptions& opt = {});
Ellipsoid loewner_ellipsoid(const ConvexBody& k, const LoewnerOptions& opt = {});

enum class ProxySource { loewner_scaled, known_exact };

struct ProxyQuality {
  double sum = 0.0;           // (Vol(K + E) / Vol(K))^{1/d}
  double intersection = 0.0;  // (Vol(K cap E) / Vol(K))^{1/d}
  bool measured = false;
};

struct MProxy {
  Ellipsoid ellipsoid;  // centered at the barycenter, Vol(E) = Vol(K)
  ProxySource source = ProxySource::loewner_scaled;
  ProxyQuality quality;
  double body_volume = 0.0;
};

struct ProxyOptions {
  double eps = 1e-4;
  bool measure_quality = true;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
  Exec exec = Exec::parallel;
};

// M-ellipsoid proxy: known natural ellipsoid for balls, ellipsoids, cubes and
// cross-polytopes; otherwise the Loewner ellipsoid of (K - K) / 2 about the
// barycenter, rescaled to the volume of K.
MProxy m_proxy(const ConvexBody& k, const ProxyOptions& opt = {});

// Volume-preserving T = det(A)^{-1/(2d)} A^{1/2} taking the proxy {<A x, x> <= 1}
// to a ball of equal volume.
Matrix m_position_map(const MProxy& proxy);
Matrix m_position_map(const ConvexBody& k, const ProxyOptions& opt = {});

// Vol(K1 + K2)^{1/d} / (Vol(K1)^{1/d} + Vol(K2)^{1/d}).
double verify_rbm(const ConvexBody& k1, const ConvexBody& k2, const McOptions& opt = {});

// (Vol(P + E_K)^{1/d} / Vol(P + K)^{1/d}, Vol(P + K)^{1/d} / Vol(P + E_K)^{1/d}),
// with P = {0} when `p` is empty.
std::pair<double, double> verify_with_p(const std::optional<ConvexBody>& p, const ConvexBody& k,
                                        const MProxy& proxy, const McOptions& opt = {});

const char* to_string(ProxySource s);

}  // namespace symcap
