#include "symcap/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "symcap/rng.hpp"

namespace symcap {
namespace {

std::uint64_t chunk_hits(const McProposal& proposal, const Membership& inside,
                         std::uint64_t begin, std::uint64_t end, std::uint64_t seed,
                         std::uint64_t chunk) {
  const Eigen::Index d = proposal.center.size();
  CounterRng rng(derive_seed(seed, chunk));
  std::normal_distribution<double> gauss;
  Vector g(d);
  std::uint64_t hits = 0;
  for (std::uint64_t s = begin; s < end; ++s) {
    for (Eigen::Index k = 0; k < d; ++k) g(k) = gauss(rng);
    const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    const Vector x = proposal.center + proposal.factor * (g * (radius / g.norm()));
    if (inside(x)) ++hits;
  }
  return hits;
}

}  // namespace

Matrix pairwise_sums(const Matrix& p, const Matrix& q, Exec exec) {
  const Eigen::Index np = p.cols();
  const Eigen::Index nq = q.cols();
  Matrix out(p.rows(), np * nq);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < np; ++i) {
      for (Eigen::Index j = 0; j < nq; ++j) out.col(i * nq + j) = p.col(i) + q.col(j);
    }
  } else {
    for (Eigen::Index i = 0; i < np; ++i) {
      for (Eigen::Index j = 0; j < nq; ++j) out.col(i * nq + j) = p.col(i) + q.col(j);
    }
  }
  return out;
}

Vector support_values(const Matrix& vertices, const Matrix& directions, Exec exec) {
  const Eigen::Index n = directions.cols();
  Vector h(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index k = 0; k < n; ++k) {
      h(k) = (vertices.transpose() * directions.col(k)).maxCoeff();
    }
  } else {
    for (Eigen::Index k = 0; k < n; ++k) {
      h(k) = (vertices.transpose() * directions.col(k)).maxCoeff();
    }
  }
  return h;
}

std::uint64_t count_hits(const McProposal& proposal, const Membership& inside,
                         std::uint64_t samples, std::uint64_t seed, Exec exec) {
  const std::uint64_t chunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<std::uint64_t> per_chunk(chunks, 0);
  const auto run = [&](std::uint64_t c) {
    const std::uint64_t begin = c * kMcChunk;
    const std::uint64_t end = std::min(samples, begin + kMcChunk);
    per_chunk[c] = chunk_hits(proposal, inside, begin, end, seed, c);
  };
  if (exec == Exec::parallel) {
    const auto count = static_cast<std::int64_t>(chunks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < count; ++c) run(static_cast<std::uint64_t>(c));
  } else {
    for (std::uint64_t c = 0; c < chunks; ++c) run(c);
  }
  std::uint64_t total = 0;
  for (std::uint64_t h : per_chunk) total += h;
  return total;
}

}  // namespace symcap
