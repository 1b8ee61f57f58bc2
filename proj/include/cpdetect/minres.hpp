#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "be.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "labeling.hpp"

namespace cpdetect {

// Binary MINRES residual: missing core-core edges plus present
// periphery-periphery edges. Core-periphery pairs are ignored.
inline std::uint64_t minres_cost(std::span<const std::uint8_t> core, const Network& net) {
  if (core.size() != net.node_count()) {
    throw DomainError("coreness assignment does not cover every node");
  }
  std::uint64_t n_core = 0;
  for (auto x : core) n_core += x;
  std::uint64_t cc_edges = 0;
  std::uint64_t pp_edges = 0;
  for (auto [i, j] : net.edges()) {
    cc_edges += (core[i] && core[j]);
    pp_edges += (!core[i] && !core[j]);
  }
  const std::uint64_t cc_pairs = n_core < 2 ? 0 : n_core * (n_core - 1) / 2;
  return (cc_pairs - cc_edges) + pp_edges;
}

// Evaluates every prefix of the degree ordering (descending degree, ties by
// node index) as the core and keeps the cheapest, smallest core on ties.
inline SinglePairAssignment detect_minres(const Network& net) {
  const auto n = net.node_count();
  if (n < 2) throw DomainError("detect_minres needs at least two nodes");

  std::vector<NodeIndex> order(n);
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    return net.degree(a) > net.degree(b);
  });

  Coreness in_core(n, 0);
  std::uint64_t cc_missing = 0;
  std::uint64_t pp_edges = net.edge_count();
  std::uint64_t best_cost = pp_edges;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const NodeIndex v = order[k];
    std::uint64_t to_core = 0;
    for (NodeIndex u : net.neighbors(v)) to_core += in_core[u];
    cc_missing += k - to_core;
    pp_edges -= net.degree(v) - to_core;
    in_core[v] = 1;
    const std::uint64_t cost = cc_missing + pp_edges;
    if (cost < best_cost) {
      best_cost = cost;
      best_k = k + 1;
    }
  }

  SinglePairAssignment result;
  result.core.assign(n, 0);
  for (std::size_t k = 0; k < best_k; ++k) result.core[order[k]] = 1;
  result.cost = best_cost;
  std::size_t periphery = n - best_k;
  if (n >= 3 && !net.is_empty_graph() && !net.is_complete() &&
      detail::be_pattern_defined(n, periphery)) {
    result.quality = be_quality(result.core, net);
  }
  return result;
}

}  // namespace cpdetect
