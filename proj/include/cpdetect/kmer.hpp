#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "labeling.hpp"
#include "random.hpp"

namespace cpdetect {

// Q^cp: realized minus ER-expected edges over the idealized multi-pair
// pattern, sum over i<j of (A_ij - rho)(x_i + x_j - x_i x_j) delta(c_i, c_j).
//
// Per pair, the idealized dyads are all within-pair dyads except the
// periphery-periphery ones, so the sum reduces to
//   (edges inside pairs with a core endpoint) - rho * sum_k [n_k(n_k-1) - p_k(p_k-1)] / 2.
inline double qcp(std::span<const std::uint32_t> pair, std::span<const std::uint8_t> core,
                  const Network& net) {
  const auto n = net.node_count();
  if (pair.size() != n || core.size() != n) throw DomainError("labeling does not cover every node");
  if (n < 2) throw DomainError("qcp needs at least two nodes");
  const double rho = density(net);
  std::uint32_t max_pair = 0;
  for (auto c : pair) max_pair = std::max(max_pair, c);
  std::vector<std::uint64_t> members(max_pair + 1, 0);
  std::vector<std::uint64_t> periphery(max_pair + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++members[pair[i]];
    periphery[pair[i]] += (core[i] == 0);
  }
  std::uint64_t idealized_dyads = 0;
  for (std::size_t c = 0; c <= max_pair; ++c) {
    const auto m = members[c];
    const auto p = periphery[c];
    idealized_dyads += (m * (m - (m > 0))) / 2 - (p * (p - (p > 0))) / 2;
  }
  std::uint64_t realized = 0;
  for (auto [i, j] : net.edges()) realized += (pair[i] == pair[j] && (core[i] || core[j]));
  return static_cast<double>(realized) - rho * static_cast<double>(idealized_dyads);
}

inline double qcp(const Labeling& lab, const Network& net) { return qcp(lab.pair, lab.core, net); }

namespace detail {

// Mutable label-switching state. Pair ids are 0..N-1 while running (initial
// c_i = i); pairs may empty out and are compacted at the end.
class KmerState {
 public:
  KmerState(const Network& net, std::vector<std::uint32_t> pair, Coreness core)
      : net_(net),
        rho_(density(net)),
        pair_(std::move(pair)),
        core_(std::move(core)),
        pair_core_(net.node_count(), 0),
        pair_periphery_(net.node_count(), 0),
        nbr_core_(net.node_count(), 0),
        nbr_periphery_(net.node_count(), 0) {
    for (std::size_t i = 0; i < pair_.size(); ++i) {
      if (pair_[i] >= net.node_count()) throw DomainError("pair id out of range");
      (core_[i] ? pair_core_ : pair_periphery_)[pair_[i]]++;
    }
    q_ = qcp(pair_, core_, net_);
  }

  double rho() const noexcept { return rho_; }
  double q() const noexcept { return q_; }
  std::span<const std::uint32_t> pair() const noexcept { return pair_; }
  std::span<const std::uint8_t> core() const noexcept { return core_; }

  // Tallies v's neighbors by (pair, coreness). Must precede gain() calls for v.
  void load_neighborhood(NodeIndex v) {
    clear_neighborhood();
    for (NodeIndex u : net_.neighbors(v)) {
      const auto c = pair_[u];
      if (nbr_core_[c] == 0 && nbr_periphery_[c] == 0) touched_.push_back(c);
      (core_[u] ? nbr_core_ : nbr_periphery_)[c]++;
    }
  }

  // Q^cp change if v moved to (target_pair, target_core).
  double gain(NodeIndex v, std::uint32_t target_pair, bool target_core) const {
    return contribution(v, target_pair, target_core) - contribution(v, pair_[v], core_[v] != 0);
  }

  void move(NodeIndex v, std::uint32_t target_pair, bool target_core, double delta) {
    (core_[v] ? pair_core_ : pair_periphery_)[pair_[v]]--;
    pair_[v] = target_pair;
    core_[v] = target_core ? 1 : 0;
    (core_[v] ? pair_core_ : pair_periphery_)[pair_[v]]++;
    q_ += delta;
  }

  void set_q(double q) noexcept { q_ = q; }

 private:
  // Sum over u in pair d, u != v, of (A_vu - rho) * [x_v or x_u].
  double contribution(NodeIndex v, std::uint32_t d, bool as_core) const {
    const bool inside = pair_[v] == d;
    if (as_core) {
      const auto others = pair_core_[d] + pair_periphery_[d] - (inside ? 1 : 0);
      return static_cast<double>(nbr_core_[d] + nbr_periphery_[d]) - rho_ * static_cast<double>(others);
    }
    const auto others = pair_core_[d] - (inside && core_[v] ? 1 : 0);
    return static_cast<double>(nbr_core_[d]) - rho_ * static_cast<double>(others);
  }

  void clear_neighborhood() {
    for (auto c : touched_) {
      nbr_core_[c] = 0;
      nbr_periphery_[c] = 0;
    }
    touched_.clear();
  }

  const Network& net_;
  double rho_;
  std::vector<std::uint32_t> pair_;
  Coreness core_;
  std::vector<std::uint32_t> pair_core_;
  std::vector<std::uint32_t> pair_periphery_;
  std::vector<std::uint32_t> nbr_core_;
  std::vector<std::uint32_t> nbr_periphery_;
  std::vector<std::uint32_t> touched_;
  double q_ = 0.0;
};

// Increments at or below this are treated as zero.
inline constexpr double kMinIncrement = 1e-10;

}  // namespace detail

// Q^cp change for moving `node` to (new_pair, new_core) in `lab`. new_pair is
// a 1-based pair index of lab; evaluated from the node's neighborhood and
// per-pair counts only.
inline double delta_qcp(const Labeling& lab, const Network& net, NodeIndex node,
                        std::uint32_t new_pair, bool new_core) {
  const auto n = net.node_count();
  if (lab.node_count() != n) throw DomainError("labeling does not cover every node");
  if (node >= n) throw DomainError("delta_qcp: node out of range");
  if (new_pair < 1 || new_pair > n) throw DomainError("delta_qcp: pair index out of range");
  // Shift to 0-based ids for the working state.
  std::vector<std::uint32_t> zero_based(lab.pair.size());
  for (std::size_t i = 0; i < zero_based.size(); ++i) {
    if (lab.pair[i] < 1 || lab.pair[i] > n) throw DomainError("labeling pair index out of range");
    zero_based[i] = lab.pair[i] - 1;
  }
  detail::KmerState state(net, std::move(zero_based), lab.core);
  state.load_neighborhood(node);
  return state.gain(node, new_pair - 1, new_core);
}

struct CommitEvent {
  std::size_t run = 0;
  std::size_t sweep = 0;
  NodeIndex node = 0;
  double q_before = 0.0;
  double q_after = 0.0;  // incremental value
};

struct KmerOptions {
  std::size_t runs = 10;
  std::uint64_t seed = 0;
  // Recompute Q^cp from scratch after every committed move and throw
  // std::logic_error if it decreased or drifted from the incremental value.
  bool verify_moves = false;
  std::function<void(const CommitEvent&)> on_commit;
};

namespace detail {

inline Labeling kmer_run(const Network& net, std::size_t run, const KmerOptions& options) {
  const auto n = net.node_count();
  std::vector<std::uint32_t> initial(n);
  std::iota(initial.begin(), initial.end(), std::uint32_t{0});
  KmerState state(net, std::move(initial), Coreness(n, 1));
  Rng rng(options.seed + run);

  std::vector<NodeIndex> order(n);
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::vector<NodeIndex> scan;
  const std::size_t max_sweeps = 100 * n;

  for (std::size_t sweep = 0;; ++sweep) {
    if (sweep >= max_sweeps) {
      throw std::logic_error("label switching did not converge within " + std::to_string(max_sweeps) +
                             " sweeps");
    }
    bool changed = false;
    shuffle(std::span<NodeIndex>(order), rng);
    for (NodeIndex v : order) {
      const auto nbrs = net.neighbors(v);
      if (nbrs.empty()) continue;
      scan.assign(nbrs.begin(), nbrs.end());
      shuffle(std::span<NodeIndex>(scan), rng);
      state.load_neighborhood(v);

      double best = kMinIncrement;
      std::uint32_t best_pair = 0;
      bool best_core = false;
      bool found = false;
      for (NodeIndex j : scan) {
        const auto target = state.pair()[j];
        // Periphery first: equal gains keep the core small.
        for (bool as_core : {false, true}) {
          const double g = state.gain(v, target, as_core);
          if (g > best) {
            best = g;
            best_pair = target;
            best_core = as_core;
            found = true;
          }
        }
      }
      if (!found) continue;

      const double before = state.q();
      state.move(v, best_pair, best_core, best);
      changed = true;
      if (options.verify_moves) {
        const double full = qcp(state.pair(), state.core(), net);
        if (full < before - 1e-9 || std::abs(full - state.q()) > 1e-8) {
          throw std::logic_error("Q^cp decreased or drifted after a committed move");
        }
      }
      if (options.on_commit) options.on_commit(CommitEvent{run, sweep, v, before, state.q()});
    }
    if (!changed) break;
  }

  std::vector<std::uint32_t> pair(state.pair().begin(), state.pair().end());
  Coreness core(state.core().begin(), state.core().end());
  Labeling lab = make_labeling(std::move(pair), std::move(core));
  lab.q_value = qcp(lab, net);
  return lab;
}

}  // namespace detail

// Multiple core-periphery pairs by label switching. Every run starts from
// x_i = 1, c_i = i; runs differ only in their seeded sweep and neighbor scan
// orders (run r uses seed + r). The highest Q^cp wins, lowest run on ties.
inline Labeling detect_kmer(const Network& net, const KmerOptions& options = {}) {
  if (net.node_count() < 2) throw DomainError("detect_kmer needs at least two nodes");
  if (options.runs == 0) throw DomainError("detect_kmer needs at least one run");
  Labeling best;
  bool have = false;
  for (std::size_t r = 0; r < options.runs; ++r) {
    auto candidate = detail::kmer_run(net, r, options);
    if (!have || candidate.q_value > best.q_value) {
      best = std::move(candidate);
      have = true;
    }
  }
  return best;
}

inline Labeling detect_kmer(const Network& net, std::size_t runs, std::uint64_t seed) {
  KmerOptions options;
  options.runs = runs;
  options.seed = seed;
  return detect_kmer(net, options);
}

}  // namespace cpdetect
