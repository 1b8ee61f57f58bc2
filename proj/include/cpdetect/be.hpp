#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "labeling.hpp"
#include "random.hpp"

namespace cpdetect {

namespace detail {

// Pearson correlation between the lower-triangular entries of A and of the
// idealized single-pair matrix B (B_ij = 1 unless both endpoints are
// periphery). Both vectors are binary, so the correlation reduces to counts:
//   pairs  = N(N-1)/2         sum_a  = M
//   sum_b  = pairs - Np(Np-1)/2
//   sum_ab = M - M_pp         (edges with at least one core endpoint)
inline double be_correlation(std::uint64_t pairs, std::uint64_t edges,
                             std::uint64_t periphery, std::uint64_t pp_edges) {
  using real = long double;
  const real p = static_cast<real>(pairs);
  const real sum_a = static_cast<real>(edges);
  const real np = static_cast<real>(periphery);
  const real sum_b = p - np * (np - 1) / 2;
  const real sum_ab = static_cast<real>(edges - pp_edges);
  const real cov = p * sum_ab - sum_a * sum_b;
  const real var = sum_a * (p - sum_a) * sum_b * (p - sum_b);
  return static_cast<double>(cov / std::sqrt(var));
}

// B is constant (all ones) unless at least two periphery nodes exist, and
// all zeros when nobody is core.
constexpr bool be_pattern_defined(std::size_t n, std::size_t periphery) noexcept {
  return periphery >= 2 && periphery < n;
}

}  // namespace detail

// Correlation between adjacency and the idealized single-pair pattern.
inline double be_quality(std::span<const std::uint8_t> core, const Network& net) {
  const auto n = net.node_count();
  if (core.size() != n) throw DomainError("coreness assignment does not cover every node");
  if (n < 3) throw DomainError("be_quality needs at least three nodes");
  if (net.is_empty_graph() || net.is_complete()) {
    throw DomainError("constant adjacency: correlation undefined");
  }
  std::size_t periphery = 0;
  for (auto x : core) periphery += (x == 0);
  if (!detail::be_pattern_defined(n, periphery)) {
    throw DomainError("constant idealized pattern: correlation undefined");
  }
  std::uint64_t pp_edges = 0;
  for (auto [i, j] : net.edges()) pp_edges += (!core[i] && !core[j]);
  return detail::be_correlation(net.pair_count(), net.edge_count(), periphery, pp_edges);
}

inline std::size_t default_be_restarts(std::size_t node_count) noexcept {
  return node_count <= 500 ? 50 : 10;
}

namespace detail {

// Steepest-ascent single-flip search from one random start.
inline SinglePairAssignment be_local_search(const Network& net, std::uint64_t seed) {
  const auto n = net.node_count();
  Rng rng(seed);
  Coreness core(n);
  std::size_t periphery = 0;
  do {
    periphery = 0;
    for (auto& x : core) {
      x = bernoulli(rng, 0.5) ? 1 : 0;
      periphery += (x == 0);
    }
  } while (!be_pattern_defined(n, periphery));

  // periphery_neighbors[v] = neighbors of v currently in the periphery.
  std::vector<std::uint32_t> periphery_neighbors(n, 0);
  std::uint64_t pp_edges = 0;
  for (NodeIndex v = 0; v < n; ++v) {
    for (NodeIndex u : net.neighbors(v)) {
      if (!core[u]) {
        ++periphery_neighbors[v];
        if (!core[v] && u > v) ++pp_edges;
      }
    }
  }

  const auto pairs = net.pair_count();
  const auto edges = net.edge_count();
  double current = be_correlation(pairs, edges, periphery, pp_edges);
  constexpr double kMinGain = 1e-12;

  for (;;) {
    std::size_t best_node = n;
    double best = current;
    for (NodeIndex v = 0; v < n; ++v) {
      const std::size_t next_periphery = core[v] ? periphery + 1 : periphery - 1;
      if (!be_pattern_defined(n, next_periphery)) continue;
      const std::uint64_t next_pp =
          core[v] ? pp_edges + periphery_neighbors[v] : pp_edges - periphery_neighbors[v];
      const double q = be_correlation(pairs, edges, next_periphery, next_pp);
      if (q > best + kMinGain) {
        best = q;
        best_node = v;
      }
    }
    if (best_node == n) break;

    const NodeIndex v = static_cast<NodeIndex>(best_node);
    if (core[v]) {
      pp_edges += periphery_neighbors[v];
      ++periphery;
      for (NodeIndex u : net.neighbors(v)) ++periphery_neighbors[u];
    } else {
      pp_edges -= periphery_neighbors[v];
      --periphery;
      for (NodeIndex u : net.neighbors(v)) --periphery_neighbors[u];
    }
    core[v] ^= 1;
    current = best;
  }
  return SinglePairAssignment{std::move(core), current, std::nullopt};
}

}  // namespace detail

// Best of `restarts` steepest-ascent runs; restart r is seeded with seed + r
// and the lowest restart index wins ties, so the result does not depend on
// execution order.
inline SinglePairAssignment detect_be(const Network& net, std::size_t restarts, std::uint64_t seed) {
  if (net.node_count() < 3) throw DomainError("detect_be needs at least three nodes");
  if (net.is_empty_graph() || net.is_complete()) {
    throw DomainError("constant adjacency");
  }
  if (restarts == 0) throw DomainError("detect_be needs at least one restart");
  SinglePairAssignment best;
  double best_quality = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    auto candidate = detail::be_local_search(net, seed + r);
    if (*candidate.quality > best_quality) {
      best_quality = *candidate.quality;
      best = std::move(candidate);
    }
  }
  best.quality = be_quality(best.core, net);
  return best;
}

inline SinglePairAssignment detect_be(const Network& net, std::uint64_t seed) {
  return detect_be(net, default_be_restarts(net.node_count()), seed);
}

}  // namespace cpdetect
