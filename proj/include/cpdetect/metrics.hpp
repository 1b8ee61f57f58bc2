#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "labeling.hpp"

namespace cpdetect {

struct BlockDensities {
  std::uint32_t k = 0;
  std::size_t n_core = 0;
  std::size_t n_periphery = 0;
  double rho_cc = 0.0;
  double rho_cp = 0.0;
  double rho_pp = 0.0;
};

struct BlockEdgeCounts {
  std::uint64_t cc = 0;
  std::uint64_t cp = 0;
  std::uint64_t pp = 0;
};

inline BlockEdgeCounts block_edge_counts(const Labeling& lab, const Network& net, std::uint32_t k) {
  BlockEdgeCounts counts;
  for (auto [i, j] : net.edges()) {
    if (lab.pair[i] != k || lab.pair[j] != k) continue;
    const int cores = lab.core[i] + lab.core[j];
    if (cores == 2) {
      ++counts.cc;
    } else if (cores == 1) {
      ++counts.cp;
    } else {
      ++counts.pp;
    }
  }
  return counts;
}

// Within-core, core-periphery and within-periphery edge densities of pair k.
// The periphery block is normalized by N_P(N_P-1)/2; empty denominators give 0.
inline BlockDensities block_densities(const Labeling& lab, const Network& net, std::uint32_t k) {
  if (lab.node_count() != net.node_count()) throw DomainError("labeling does not cover every node");
  if (k < 1 || k > lab.pair_count) throw DomainError("unknown pair index " + std::to_string(k));
  BlockDensities d;
  d.k = k;
  d.n_core = lab.core_count(k);
  d.n_periphery = lab.periphery_count(k);
  const auto counts = block_edge_counts(lab, net, k);
  auto ratio = [](std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  const std::uint64_t nc = d.n_core;
  const std::uint64_t np = d.n_periphery;
  d.rho_cc = ratio(counts.cc, nc < 2 ? 0 : nc * (nc - 1) / 2);
  d.rho_pp = ratio(counts.pp, np < 2 ? 0 : np * (np - 1) / 2);
  d.rho_cp = ratio(counts.cp, nc * np);
  return d;
}

enum class StructureClass { standard, bipartite_like, other };

inline const char* to_string(StructureClass c) {
  switch (c) {
    case StructureClass::standard: return "standard";
    case StructureClass::bipartite_like: return "bipartite-like";
    case StructureClass::other: return "other";
  }
  return "other";
}

// standard: rho_cc > rho_cp > rho_pp; bipartite-like: rho_cp > rho_cc.
inline StructureClass classify_structure(const BlockDensities& d) {
  if (d.rho_cc > d.rho_cp && d.rho_cp > d.rho_pp) return StructureClass::standard;
  if (d.rho_cp > d.rho_cc) return StructureClass::bipartite_like;
  return StructureClass::other;
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) throw DomainError("jaccard of two empty sets is undefined");
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

struct AttributeShare {
  std::optional<double> core;       // absent when the block is empty
  std::optional<double> periphery;
};

// Fraction of pair k's core (and periphery) nodes carrying each attribute.
inline std::map<std::string, AttributeShare> attribute_fractions(const Labeling& lab, const Network& net,
                                                                 std::uint32_t k) {
  if (lab.node_count() != net.node_count()) throw DomainError("labeling does not cover every node");
  if (k < 1 || k > lab.pair_count) throw DomainError("unknown pair index " + std::to_string(k));
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  std::vector<std::string> missing;
  std::size_t n_core = 0;
  std::size_t n_periphery = 0;
  for (NodeIndex i = 0; i < lab.node_count(); ++i) {
    if (lab.pair[i] != k) continue;
    auto attr = net.attribute(i);
    if (!attr) {
      missing.push_back(net.id(i));
      continue;
    }
    auto& c = counts[*attr];
    if (lab.core[i]) {
      ++c.first;
      ++n_core;
    } else {
      ++c.second;
      ++n_periphery;
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw DomainError("nodes without attributes: " + list);
  }
  std::map<std::string, AttributeShare> out;
  for (const auto& [attr, c] : counts) {
    AttributeShare share;
    if (n_core > 0) share.core = static_cast<double>(c.first) / static_cast<double>(n_core);
    if (n_periphery > 0) share.periphery = static_cast<double>(c.second) / static_cast<double>(n_periphery);
    out.emplace(attr, share);
  }
  return out;
}

inline constexpr const char* kResidualGroup = "residual";
inline constexpr const char* kInactiveGroup = "inactive";

// node id -> alluvial group ("<k>:core", "<k>:periphery" or "residual").
using NodeGroups = std::map<std::string, std::string>;

// Labelings without significance flags count every pair as significant.
inline NodeGroups node_groups(const Labeling& lab, const Network& net) {
  if (lab.node_count() != net.node_count()) throw DomainError("labeling does not cover every node");
  NodeGroups groups;
  for (NodeIndex i = 0; i < lab.node_count(); ++i) {
    if (!lab.node_significant(i)) {
      groups.emplace(net.id(i), kResidualGroup);
    } else {
      groups.emplace(net.id(i), std::to_string(lab.pair[i]) + (lab.core[i] ? ":core" : ":periphery"));
    }
  }
  return groups;
}

struct FlowRow {
  std::string from;
  std::string to;
  std::size_t count = 0;

  friend bool operator==(const FlowRow&, const FlowRow&) = default;
};

// Node counts moving between groups of consecutive windows. Nodes active in
// only one window flow from or to "inactive". Rows sorted by (from, to).
inline std::vector<FlowRow> alluvial_flows(const NodeGroups& before, const NodeGroups& after) {
  std::map<std::pair<std::string, std::string>, std::size_t> tally;
  for (const auto& [id, group] : before) {
    auto it = after.find(id);
    tally[{group, it == after.end() ? kInactiveGroup : it->second}]++;
  }
  for (const auto& [id, group] : after) {
    if (before.count(id) == 0) tally[{kInactiveGroup, group}]++;
  }
  std::vector<FlowRow> rows;
  rows.reserve(tally.size());
  for (const auto& [key, count] : tally) rows.push_back(FlowRow{key.first, key.second, count});
  return rows;
}

// The main pair is the largest significant one, i.e. the lowest canonical
// index flagged significant (pair 1 when no flags are present).
inline std::optional<std::uint32_t> main_pair(const Labeling& lab) {
  if (lab.pair_count == 0) return std::nullopt;
  if (!lab.pair_significant) return 1;
  for (std::uint32_t k = 1; k <= lab.pair_count; ++k) {
    if ((*lab.pair_significant)[k - 1]) return k;
  }
  return std::nullopt;
}

inline std::set<std::string> main_core(const Labeling& lab, const Network& net) {
  std::set<std::string> out;
  const auto k = main_pair(lab);
  if (!k) return out;
  for (NodeIndex i = 0; i < lab.node_count(); ++i) {
    if (lab.pair[i] == *k && lab.core[i]) out.insert(net.id(i));
  }
  return out;
}

// Pairwise Jaccard indices of main cores; unset where both cores are empty.
inline std::vector<std::vector<std::optional<double>>> jaccard_matrix(
    const std::vector<std::set<std::string>>& cores) {
  const auto n = cores.size();
  std::vector<std::vector<std::optional<double>>> out(n, std::vector<std::optional<double>>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!cores[a].empty() || !cores[b].empty()) out[a][b] = jaccard(cores[a], cores[b]);
    }
  }
  return out;
}

}  // namespace cpdetect
