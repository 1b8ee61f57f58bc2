#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace cpdetect {

using Coreness = std::vector<std::uint8_t>;  // 1 = core, 0 = periphery

// Output of a single-pair detector (BE or MINRES).
struct SinglePairAssignment {
  Coreness core;
  std::optional<double> quality;     // be_quality, when defined
  std::optional<std::uint64_t> cost; // MINRES residual, MINRES only

  std::size_t core_count() const {
    return static_cast<std::size_t>(std::count(core.begin(), core.end(), std::uint8_t{1}));
  }
};

// Partition of the nodes into core-periphery pairs. Pair indices are 1..C.
struct Labeling {
  std::vector<std::uint32_t> pair;
  Coreness core;
  double q_value = 0.0;
  std::size_t pair_count = 0;
  // One flag per pair (index k-1) once a significance test has run.
  std::optional<std::vector<bool>> pair_significant;

  std::size_t node_count() const noexcept { return pair.size(); }

  bool node_significant(NodeIndex i) const {
    if (!pair_significant) return true;
    return (*pair_significant)[pair.at(i) - 1];
  }

  std::vector<NodeIndex> members(std::uint32_t k) const {
    std::vector<NodeIndex> out;
    for (NodeIndex i = 0; i < pair.size(); ++i) {
      if (pair[i] == k) out.push_back(i);
    }
    return out;
  }

  std::size_t core_count(std::uint32_t k) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < pair.size(); ++i) n += (pair[i] == k && core[i]);
    return n;
  }

  std::size_t periphery_count(std::uint32_t k) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < pair.size(); ++i) n += (pair[i] == k && !core[i]);
    return n;
  }
};

// Relabels arbitrary pair ids to 1..C ordered by decreasing pair size, ties
// broken by the smallest node index contained. Returns C.
inline std::size_t canonicalize_pairs(std::span<std::uint32_t> pair) {
  if (pair.empty()) return 0;
  const auto max_id = *std::max_element(pair.begin(), pair.end());
  std::vector<std::size_t> size(max_id + 1, 0);
  std::vector<std::size_t> first(max_id + 1, pair.size());
  for (std::size_t i = 0; i < pair.size(); ++i) {
    ++size[pair[i]];
    first[pair[i]] = std::min(first[pair[i]], i);
  }
  std::vector<std::uint32_t> used;
  for (std::uint32_t c = 0; c <= max_id; ++c) {
    if (size[c] > 0) used.push_back(c);
  }
  std::sort(used.begin(), used.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (size[a] != size[b]) return size[a] > size[b];
    return first[a] < first[b];
  });
  std::vector<std::uint32_t> relabel(max_id + 1, 0);
  for (std::size_t r = 0; r < used.size(); ++r) relabel[used[r]] = static_cast<std::uint32_t>(r + 1);
  for (auto& c : pair) c = relabel[c];
  return used.size();
}

inline Labeling make_labeling(std::vector<std::uint32_t> pair, Coreness core) {
  if (pair.size() != core.size()) throw DomainError("pair and coreness vectors differ in length");
  Labeling lab;
  lab.pair_count = canonicalize_pairs(pair);
  lab.pair = std::move(pair);
  lab.core = std::move(core);
  return lab;
}

// Single-pair assignment viewed as a one-pair labeling.
inline Labeling as_labeling(const SinglePairAssignment& assignment) {
  return make_labeling(std::vector<std::uint32_t>(assignment.core.size(), 1), assignment.core);
}

// Same partition and coreness, ignoring pair numbering.
inline bool equivalent(const Labeling& a, const Labeling& b) {
  if (a.pair.size() != b.pair.size() || a.core != b.core) return false;
  auto pa = a.pair;
  auto pb = b.pair;
  canonicalize_pairs(pa);
  canonicalize_pairs(pb);
  return pa == pb;
}

}  // namespace cpdetect
