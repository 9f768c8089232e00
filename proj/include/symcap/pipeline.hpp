#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symcap/body.hpp"
#include "symcap/body_ops.hpp"
#include "symcap/positions.hpp"
#include "symcap/volume.hpp"
#include "symcap/williamson.hpp"

namespace symcap {

// theta = k pi / 8, k = 0..15
inline constexpr int kThetaGrid = 16;

struct PipelineOptions {
  ProxyOptions proxy;
  McOptions mc;
  Tolerances tol;
  // Vol(K2 + e^{i theta} K2) on the theta grid. Polytopes above
  // kMaxHullDimension skip it (a2 is then NaN).
  bool theta_check = true;
};

struct NormalizeResult {
  Matrix S;
  std::optional<ConvexBody> body;  // S K
  Matrix T;                        // M-position map of K
  MProxy proxy;
  std::vector<double> theta_ratios;  // Vol(SK + e^{i theta} SK)^{1/d} / Vol(K)^{1/d}
  double a2 = 0.0;                   // max of theta_ratios
};

struct PipelineTrace {
  Vector shift;  // barycenter subtracted from K
  std::optional<ConvexBody> k1;  // K - K
  std::optional<ConvexBody> k2;  // S K1
  std::optional<ConvexBody> k3;  // K2 + i K2
  Matrix S;
  MProxy proxy;
  Inradius r;
  ContactCertificate certificate;
  std::vector<double> theta_ratios;
  double a2 = 0.0;
  double k1_volume = 0.0;
  double k2_volume = 0.0;
};

enum class BoundMethod { i_invariant, cylinder, ellipsoid_exact };

struct CapacityBound {
  double upper = 0.0;
  double lower = 0.0;
  BoundMethod method = BoundMethod::cylinder;
  Inradius r;  // of the body the cylinder bound was read from
  ContactCertificate certificate;
  std::shared_ptr<const PipelineTrace> trace;  // cylinder bound only
};

struct ViterboReport {
  std::string id;
  int dimension = 0;
  double gamma = 0.0;
  double volume_term = 0.0;
  VolumeEstimate volume;
  CapacityBound bound;
};

// S from the W D S factorization of the M-position map of a symmetric K.
NormalizeResult symplectic_normalize(const ConvexBody& k, const PipelineOptions& opt = {});

// 2 pi r^2 for a symmetric i-invariant K, with r its inradius.
CapacityBound i_invariant_bound(const ConvexBody& k);

// K1 = K - K (after barycenter translation), K2 = S K1, K3 = K2 + i K2,
// upper = 2 pi inradius(K3)^2, lower = pi inradius(K)^2.
CapacityBound cylinder_upper_bound(const ConvexBody& k, const PipelineOptions& opt = {});

// Exact linear-symplectic capacity of a centered ellipsoid, wrapped as a bound.
CapacityBound ellipsoid_bound(const Ellipsoid& e, const Tolerances& tol = {});

// gamma = (upper / pi) / (Vol(K) / Vol(B^{2n}))^{1/n}
ViterboReport viterbo_ratio(const ConvexBody& k, const PipelineOptions& opt = {},
                            std::string id = {});

// Vol(K - K) / Vol(K)
double rogers_shephard_ratio(const ConvexBody& k, const McOptions& opt = {});

// Vol(A + B)^{1/d} / Vol(A - B)^{1/d}
double grs_ratio(const ConvexBody& a, const ConvexBody& b, const McOptions& opt = {});

struct AxiomCheck {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // largest violation seen
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool all_passed() const;
};

// Monotonicity, conformality and normalization of ellipsoid_capacity on a
// family of centered ellipsoids.
AxiomReport capacity_axioms_suite(const std::vector<Ellipsoid>& family, std::uint64_t seed,
                                  const Tolerances& tol = {});

// Random symplectic matrix: the Williamson factor of a random PD matrix,
// composed with a random rotation e^{i theta}.
Matrix random_symplectic(int n, std::uint64_t seed);

const char* to_string(BoundMethod m);

}  // namespace symcap
