#pragma once

#include <cstdint>

#include "symcap/body.hpp"
#include "symcap/kernels.hpp"

namespace symcap {

enum class VolumeMethod { exact, monte_carlo };

struct VolumeEstimate {
  double value = 0.0;
  VolumeMethod method = VolumeMethod::exact;
  double std_error = 0.0;  // 0 for exact results
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kDefaultMcSamples = 1'000'000;
inline constexpr std::uint64_t kMinMcSamples = 10'000;
inline constexpr double kMinAcceptance = 1e-4;

struct McOptions {
  std::uint64_t samples = kDefaultMcSamples;
  std::uint64_t seed = 0;
  Exec exec = Exec::parallel;
};

// pi^{d/2} / Gamma(d/2 + 1)
double ball_volume(int d);

// Exact volume: pyramid decomposition of the hull for polytopes up to
// kMaxHullDimension, closed form for ellipsoids. Throws DomainError above
// that dimension (use volume_mc).
VolumeEstimate volume_exact(const ConvexBody& k);

// Rejection sampling inside the (slightly inflated) Loewner ellipsoid of K.
// Bit-identical for a given (seed, samples) whatever the thread count.
VolumeEstimate volume_mc(const ConvexBody& k, const McOptions& opt = {});

// Exact when available, otherwise Monte Carlo.
VolumeEstimate volume(const ConvexBody& k, const McOptions& opt = {});

// Vol(P + E) for a polytope P and an ellipsoid E. Membership of x is decided
// by the E-distance from x - c_E to P (Wolfe's min-norm point).
VolumeEstimate sum_with_ellipsoid_volume(const ConvexBody& p, const Ellipsoid& e,
                                         const McOptions& opt = {});

// Vol(K cap E), sampled inside E.
VolumeEstimate intersection_with_ellipsoid_volume(const ConvexBody& k, const Ellipsoid& e,
                                                  const McOptions& opt = {});

// Vol(A + B) by the cheapest available route.
VolumeEstimate sum_volume(const ConvexBody& a, const ConvexBody& b, const McOptions& opt = {});

// (Vol(K) / Vol(B^{2n}))^{1/n}; DomainError for odd dimension.
double viterbo_volume_term(const ConvexBody& k, const McOptions& opt = {});
double viterbo_volume_term(double vol, int d);

// Membership predicate used by the sampler (no tolerance).
bool inside_body(const ConvexBody& k, const Vector& x);

}  // namespace symcap
