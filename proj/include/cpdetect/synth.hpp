#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "ingest.hpp"
#include "labeling.hpp"
#include "random.hpp"

namespace cpdetect {

struct PlantedPair {
  std::size_t n_core = 1;
  std::size_t n_periphery = 1;
  double p_cc = 1.0;
  double p_cp = 1.0;
  double p_pp = 0.0;
};

struct PlantedNetwork {
  Network network;
  Labeling truth;
  std::vector<std::string> dropped;  // isolated nodes removed after drawing
};

inline std::string planted_node_id(std::size_t index, std::size_t total) {
  std::size_t width = 1;
  for (std::size_t t = total > 0 ? total - 1 : 0; t >= 10; t /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof buf, "v%0*zu", static_cast<int>(width), index);
  return buf;
}

// Draws every block independently: core-core, core-periphery and
// periphery-periphery dyads of each pair with that pair's probabilities,
// dyads across pairs with p_inter. Nodes are laid out pair by pair, cores
// first; ids are zero-padded so lexicographic and generation order agree.
inline PlantedNetwork plant_cp_network(std::span<const PlantedPair> pairs, double p_inter,
                                       std::uint64_t seed) {
  auto valid = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (pairs.empty()) throw DomainError("plant_cp_network: no pairs given");
  if (!valid(p_inter)) throw DomainError("plant_cp_network: p_inter outside [0, 1]");
  std::vector<std::uint32_t> pair_of;
  Coreness core;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& spec = pairs[k];
    if (spec.n_core < 1 || spec.n_periphery < 1) throw DomainError("plant_cp_network: block sizes must be >= 1");
    if (!valid(spec.p_cc) || !valid(spec.p_cp) || !valid(spec.p_pp)) {
      throw DomainError("plant_cp_network: probability outside [0, 1]");
    }
    for (std::size_t i = 0; i < spec.n_core + spec.n_periphery; ++i) {
      pair_of.push_back(static_cast<std::uint32_t>(k));
      core.push_back(i < spec.n_core ? 1 : 0);
    }
  }
  const auto n = pair_of.size();
  Rng rng(seed);
  std::vector<IndexEdge> edges;
  for (NodeIndex i = 0; i < n; ++i) {
    for (NodeIndex j = i + 1; j < n; ++j) {
      double p = p_inter;
      if (pair_of[i] == pair_of[j]) {
        const auto& spec = pairs[pair_of[i]];
        const int cores = core[i] + core[j];
        p = cores == 2 ? spec.p_cc : cores == 1 ? spec.p_cp : spec.p_pp;
      }
      if (bernoulli(rng, p)) edges.emplace_back(i, j);
    }
  }
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(planted_node_id(i, n));
  auto full = Network::from_indexed(std::move(ids), edges);

  PlantedNetwork out;
  std::vector<NodeIndex> keep;
  for (NodeIndex i = 0; i < n; ++i) {
    if (full.degree(i) > 0) {
      keep.push_back(i);
    } else {
      out.dropped.push_back(full.id(i));
    }
  }
  out.network = out.dropped.empty() ? std::move(full) : induced_subgraph(full, std::span<const NodeIndex>(keep));
  std::vector<std::uint32_t> truth_pair;
  Coreness truth_core;
  for (auto i : keep) {
    truth_pair.push_back(pair_of[i]);
    truth_core.push_back(core[i]);
  }
  out.truth = make_labeling(std::move(truth_pair), std::move(truth_core));
  return out;
}

struct BruteForceResult {
  Labeling labeling;
  double q_star = 0.0;
};

// Exhaustive maximum of Q^cp over all set partitions (restricted-growth
// strings) and all per-node coreness bits. Q^cp splits over pairs, so each
// block's best coreness is tabulated once per node subset. N <= 9.
inline BruteForceResult brute_force_qcp(const Network& net) {
  const auto n = net.node_count();
  if (n > 9) throw DomainError("brute_force_qcp: N=" + std::to_string(n) + " exceeds 9");
  if (n < 2) throw DomainError("brute_force_qcp needs at least two nodes");
  const double rho = static_cast<double>(net.edge_count()) / static_cast<double>(n * (n - 1) / 2);
  std::vector<std::vector<double>> weight(n, std::vector<double>(n, -rho));
  for (auto [i, j] : net.edges()) weight[i][j] = weight[j][i] = 1.0 - rho;

  const std::uint32_t full = (1u << n) - 1;
  std::vector<double> block_best(full + 1, 0.0);
  std::vector<std::uint32_t> block_core(full + 1, 0);
  for (std::uint32_t subset = 1; subset <= full; ++subset) {
    bool have = false;
    for (std::uint32_t cores = 0; cores <= full; ++cores) {
      if ((cores & ~subset) != 0) continue;
      double value = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(subset >> i & 1u)) continue;
        for (std::size_t j = 0; j < i; ++j) {
          if ((subset >> j & 1u) && ((cores >> i & 1u) || (cores >> j & 1u))) value += weight[i][j];
        }
      }
      if (!have || value > block_best[subset] + 1e-12) {
        block_best[subset] = value;
        block_core[subset] = cores;
        have = true;
      }
    }
  }

  // Restricted-growth strings: rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i-1]).
  std::vector<std::uint32_t> rgs(n, 0);
  std::vector<std::uint32_t> prefix_max(n, 0);
  std::vector<std::uint32_t> best_rgs;
  double best_value = 0.0;
  bool have = false;
  std::vector<std::uint32_t> masks(n);
  for (;;) {
    std::fill(masks.begin(), masks.end(), 0u);
    std::uint32_t blocks = 0;
    for (std::size_t i = 0; i < n; ++i) {
      masks[rgs[i]] |= 1u << i;
      blocks = std::max(blocks, rgs[i] + 1);
    }
    double value = 0.0;
    for (std::uint32_t b = 0; b < blocks; ++b) value += block_best[masks[b]];
    if (!have || value > best_value + 1e-12) {
      best_value = value;
      best_rgs = rgs;
      have = true;
    }
    // Next string in lexicographic order.
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[j - 1];
    }
  }

  std::fill(masks.begin(), masks.end(), 0u);
  for (std::size_t i = 0; i < n; ++i) masks[best_rgs[i]] |= 1u << i;
  Coreness core(n, 0);
  for (std::size_t i = 0; i < n; ++i) core[i] = (block_core[masks[best_rgs[i]]] >> i & 1u) ? 1 : 0;
  BruteForceResult out;
  out.labeling = make_labeling(best_rgs, std::move(core));
  out.labeling.q_value = best_value;
  out.q_star = best_value;
  return out;
}

// One planted regime, in force from `from_window` until the next regime.
struct Regime {
  std::size_t from_window = 0;
  std::vector<PlantedPair> pairs;
  double p_inter = 0.0;
};

struct TransactionConfig {
  Date start = std::chrono::sys_days{std::chrono::year{2000} / 1 / 1};
  Scale scale = Scale::month;
  std::size_t windows = 1;
  std::vector<Regime> regimes;
  std::size_t max_trades_per_edge = 3;
};

struct PlantedWindow {
  std::string label;
  PlantedNetwork planted;
};

struct SyntheticLog {
  TransactionLog log;
  std::vector<PlantedWindow> windows;
};

namespace detail {

inline WindowKey next_window(const WindowKey& current, Scale scale) {
  return window_of(current.end + std::chrono::days{1}, scale);
}

}  // namespace detail

// Realizes each window's planted network as trades: every edge becomes
// 1..max_trades_per_edge trades in random directions at uniformly spread
// times inside the window, with log-uniform amounts in [0.1, 100].
inline SyntheticLog synth_transactions(const TransactionConfig& config, std::uint64_t seed) {
  using namespace std::chrono;
  if (config.regimes.empty()) throw DomainError("synth_transactions: empty regime list");
  if (config.windows == 0) throw DomainError("synth_transactions: zero windows");
  if (config.scale == Scale::full) throw DomainError("synth_transactions: static scale has no window sequence");
  auto regimes = config.regimes;
  std::stable_sort(regimes.begin(), regimes.end(),
                   [](const Regime& a, const Regime& b) { return a.from_window < b.from_window; });
  if (regimes.front().from_window != 0) throw DomainError("synth_transactions: no regime covers window 0");
  for (const auto& r : regimes) {
    if (r.pairs.empty()) throw DomainError("synth_transactions: regime with no pairs");
  }

  SyntheticLog out;
  auto key = window_of(config.start, config.scale);
  for (std::size_t w = 0; w < config.windows; ++w, key = detail::next_window(key, config.scale)) {
    const Regime* regime = &regimes.front();
    for (const auto& r : regimes) {
      if (r.from_window <= w) regime = &r;
    }
    auto planted = plant_cp_network(regime->pairs, regime->p_inter, derive_seed(seed, 2 * w));
    Rng rng(derive_seed(seed, 2 * w + 1));
    const auto span_seconds = static_cast<std::uint64_t>(
        duration_cast<seconds>(key.end + days{1} - key.start).count());
    const auto& net = planted.network;
    for (auto [i, j] : net.edges()) {
      const auto trades = 1 + uniform_below(rng, std::max<std::size_t>(config.max_trades_per_edge, 1));
      for (std::uint64_t t = 0; t < trades; ++t) {
        TransactionRecord rec;
        rec.timestamp = Timestamp{key.start} + seconds{static_cast<std::int64_t>(uniform_below(rng, span_seconds))};
        const bool forward = bernoulli(rng, 0.5);
        rec.lender = net.id(forward ? i : j);
        rec.borrower = net.id(forward ? j : i);
        rec.amount = std::pow(10.0, -1.0 + 3.0 * uniform_unit(rng));
        out.log.push_back(std::move(rec));
      }
    }
    out.windows.push_back(PlantedWindow{key.label, std::move(planted)});
  }
  std::stable_sort(out.log.begin(), out.log.end(),
                   [](const TransactionRecord& a, const TransactionRecord& b) { return a.timestamp < b.timestamp; });
  for (std::size_t i = 0; i < out.log.size(); ++i) out.log[i].line = i + 2;
  return out;
}

}  // namespace cpdetect
