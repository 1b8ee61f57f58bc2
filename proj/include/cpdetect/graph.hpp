#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace cpdetect {

using NodeIndex = std::uint32_t;
using IndexEdge = std::pair<NodeIndex, NodeIndex>;
using IdEdge = std::pair<std::string, std::string>;
using AttributeMap = std::map<std::string, std::string>;

// Undirected simple binary graph. Node identifiers are opaque strings mapped
// to dense indices 0..N-1; adjacency lists are sorted. Immutable once built.
class Network {
 public:
  Network() = default;

  // Self-pairs are dropped and (i,j)/(j,i)/duplicates collapsed. Nodes keep
  // the order of `ids`, so isolated nodes are allowed.
  static Network from_indexed(std::vector<std::string> ids,
                              std::span<const IndexEdge> edges,
                              AttributeMap attributes = {}) {
    Network net;
    const auto n = ids.size();
    net.index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!net.index_.emplace(ids[i], static_cast<NodeIndex>(i)).second) {
        throw DomainError("duplicate node id '" + ids[i] + "'");
      }
    }
    net.ids_ = std::move(ids);
    net.adjacency_.assign(n, {});
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw DomainError("edge endpoint out of range");
      if (u == v) continue;
      net.adjacency_[u].push_back(v);
      net.adjacency_[v].push_back(u);
    }
    std::size_t twice_m = 0;
    for (auto& nbrs : net.adjacency_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
      twice_m += nbrs.size();
    }
    net.edge_count_ = twice_m / 2;
    for (auto it = attributes.begin(); it != attributes.end();) {
      if (net.index_.count(it->first) == 0) {
        it = attributes.erase(it);
      } else {
        ++it;
      }
    }
    net.attributes_ = std::move(attributes);
    return net;
  }

  std::size_t node_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const std::string> ids() const noexcept { return ids_; }
  const std::string& id(NodeIndex i) const { return ids_.at(i); }

  std::optional<NodeIndex> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  NodeIndex index_of(const std::string& id) const {
    auto found = find(id);
    if (!found) throw DomainError("unknown node id '" + id + "'");
    return *found;
  }

  std::span<const NodeIndex> neighbors(NodeIndex i) const { return adjacency_.at(i); }
  std::size_t degree(NodeIndex i) const { return adjacency_.at(i).size(); }

  bool has_edge(NodeIndex i, NodeIndex j) const {
    const auto& nbrs = adjacency_.at(i);
    return std::binary_search(nbrs.begin(), nbrs.end(), j);
  }

  // Edges as (i, j) with i < j, lexicographically ordered.
  std::vector<IndexEdge> edges() const {
    std::vector<IndexEdge> out;
    out.reserve(edge_count_);
    for (NodeIndex i = 0; i < adjacency_.size(); ++i) {
      for (NodeIndex j : adjacency_[i]) {
        if (i < j) out.emplace_back(i, j);
      }
    }
    return out;
  }

  std::vector<IdEdge> id_edges() const {
    std::vector<IdEdge> out;
    out.reserve(edge_count_);
    for (auto [i, j] : edges()) out.emplace_back(ids_[i], ids_[j]);
    return out;
  }

  const AttributeMap& attributes() const noexcept { return attributes_; }
  bool has_attributes() const noexcept { return !attributes_.empty(); }

  std::optional<std::string> attribute(NodeIndex i) const {
    auto it = attributes_.find(ids_.at(i));
    if (it == attributes_.end()) return std::nullopt;
    return it->second;
  }

  Network with_attributes(AttributeMap attributes) const {
    return from_indexed(ids_, edges(), std::move(attributes));
  }

  std::uint64_t pair_count() const noexcept {
    const std::uint64_t n = ids_.size();
    return n < 2 ? 0 : n * (n - 1) / 2;
  }

  bool is_empty_graph() const noexcept { return edge_count_ == 0; }
  bool is_complete() const noexcept { return edge_count_ == pair_count(); }

  friend bool operator==(const Network& a, const Network& b) {
    return a.ids_ == b.ids_ && a.adjacency_ == b.adjacency_ &&
           a.attributes_ == b.attributes_;
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<std::vector<NodeIndex>> adjacency_;
  std::size_t edge_count_ = 0;
  AttributeMap attributes_;
};

// Node set = all endpoints, indexed in lexicographic id order.
inline Network build_network(std::span<const IdEdge> edges, AttributeMap attributes = {}) {
  if (edges.empty()) throw DomainError("empty edge sequence: degenerate window");
  std::vector<std::string> ids;
  ids.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    if (a.empty() || b.empty()) throw DomainError("empty node identifier in edge list");
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<std::string, NodeIndex> lookup;
  lookup.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) lookup.emplace(ids[i], static_cast<NodeIndex>(i));
  std::vector<IndexEdge> indexed;
  indexed.reserve(edges.size());
  for (const auto& [a, b] : edges) indexed.emplace_back(lookup.at(a), lookup.at(b));
  return Network::from_indexed(std::move(ids), indexed, std::move(attributes));
}

// M / (N(N-1)/2).
inline double density(const Network& net) {
  if (net.node_count() < 2) throw DomainError("density needs at least two nodes");
  return static_cast<double>(net.edge_count()) / static_cast<double>(net.pair_count());
}

// Keeps every requested node, even those left isolated. Output order follows
// the parent's node order.
inline Network induced_subgraph(const Network& net, std::span<const NodeIndex> nodes) {
  std::vector<NodeIndex> keep(nodes.begin(), nodes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::vector<std::int64_t> local(net.node_count(), -1);
  std::vector<std::string> ids;
  ids.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= net.node_count()) throw DomainError("induced_subgraph: node index out of range");
    local[keep[k]] = static_cast<std::int64_t>(k);
    ids.push_back(net.id(keep[k]));
  }
  std::vector<IndexEdge> edges;
  for (NodeIndex u : keep) {
    for (NodeIndex v : net.neighbors(u)) {
      if (u < v && local[v] >= 0) {
        edges.emplace_back(static_cast<NodeIndex>(local[u]), static_cast<NodeIndex>(local[v]));
      }
    }
  }
  AttributeMap attrs;
  for (const auto& id : ids) {
    if (auto it = net.attributes().find(id); it != net.attributes().end()) attrs.insert(*it);
  }
  return Network::from_indexed(std::move(ids), edges, std::move(attrs));
}

inline Network induced_subgraph(const Network& net, std::span<const std::string> ids) {
  std::vector<NodeIndex> nodes;
  nodes.reserve(ids.size());
  for (const auto& id : ids) nodes.push_back(net.index_of(id));
  return induced_subgraph(net, std::span<const NodeIndex>(nodes));
}

namespace detail {

// Uniform m-subset of [0, universe) via Floyd's algorithm, sorted.
inline std::vector<std::uint64_t> sample_subset(std::uint64_t universe, std::uint64_t m, Rng& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(m) * 2);
  for (std::uint64_t j = universe - m; j < universe; ++j) {
    const auto t = uniform_below(rng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Uniform draw from G(n, m): all simple graphs on n labeled nodes with
// exactly m edges. Node ids are "0".."n-1".
inline Network sample_er(std::size_t n, std::uint64_t m, std::uint64_t seed) {
  const std::uint64_t pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (m > pairs) {
    throw DomainError("sample_er: m=" + std::to_string(m) + " exceeds n(n-1)/2=" +
                      std::to_string(pairs));
  }
  Rng rng(seed);
  // Sample the smaller of the edge set and its complement.
  const bool complement = m > pairs / 2;
  const auto picked = detail::sample_subset(pairs, complement ? pairs - m : m, rng);

  std::vector<IndexEdge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::size_t cursor = 0;
  std::uint64_t linear = 0;
  for (NodeIndex i = 0; i + 1 < n; ++i) {
    for (NodeIndex j = i + 1; j < n; ++j, ++linear) {
      const bool hit = cursor < picked.size() && picked[cursor] == linear;
      if (hit) ++cursor;
      if (hit != complement) edges.emplace_back(i, j);
    }
  }
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return Network::from_indexed(std::move(ids), edges);
}

}  // namespace cpdetect
