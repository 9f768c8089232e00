#pragma once

#include <cstdint>
#include <functional>

#include "symcap/linalg.hpp"

namespace symcap {

// Every data-parallel kernel has a serial reference path. Both paths return
// bit-identical results for the same inputs regardless of thread count.
enum class Exec { serial, parallel };

// Columns p_i + q_j for all pairs, ordered by (i, j).
Matrix pairwise_sums(const Matrix& p, const Matrix& q, Exec exec = Exec::parallel);

// h(u_k) = max_i <v_i, u_k> for every direction column u_k.
Vector support_values(const Matrix& vertices, const Matrix& directions,
                      Exec exec = Exec::parallel);

// Uniform proposal inside the ellipsoid {center + factor * u : |u| <= 1}.
struct McProposal {
  Vector center;
  Matrix factor;
};

using Membership = std::function<bool(const Vector&)>;

// Samples are drawn in fixed chunks of kMcChunk; chunk c uses CounterRng with
// key derive_seed(seed, c). Hits are reduced in chunk order.
inline constexpr std::uint64_t kMcChunk = 4096;

std::uint64_t count_hits(const McProposal& proposal, const Membership& inside,
                         std::uint64_t samples, std::uint64_t seed,
                         Exec exec = Exec::parallel);

}  // namespace symcap
