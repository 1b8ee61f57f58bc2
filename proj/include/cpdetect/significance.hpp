#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "be.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "labeling.hpp"
#include "random.hpp"

namespace cpdetect {

// Per-test level that keeps the family-wise error at alpha_prime over C tests.
inline double sidak_alpha(double alpha_prime, std::size_t pair_count) {
  if (pair_count == 0) throw DomainError("sidak_alpha: C must be positive");
  if (!(alpha_prime > 0.0 && alpha_prime < 1.0)) {
    throw DomainError("sidak_alpha: alpha' must lie in (0, 1)");
  }
  // 1 - (1 - a)^(1/C), written to stay accurate for small a.
  return -std::expm1(std::log1p(-alpha_prime) / static_cast<double>(pair_count));
}

enum class NullMode { pair_matched, full_network };

// Where a pair's quality is evaluated: on the pair's induced subgraph, or on
// the whole network with everyone outside the pair's core as periphery.
enum class QualityScope { induced_subgraph, whole_network };

inline const char* to_string(NullMode mode) {
  return mode == NullMode::pair_matched ? "pair" : "full";
}

inline const char* to_string(QualityScope scope) {
  return scope == QualityScope::induced_subgraph ? "induced-subgraph" : "whole-network";
}

// Reason codes for pairs whose quality is undefined.
inline constexpr const char* kTooSmall = "too-small";
inline constexpr const char* kNoCore = "no-core";
inline constexpr const char* kConstantPattern = "constant-idealized-pattern";
inline constexpr const char* kConstantAdjacency = "constant-adjacency";

// Why pair k cannot be scored, or nullopt when its quality is defined.
inline std::optional<std::string> untestable_reason(const Labeling& lab, const Network& net,
                                                    std::uint32_t k,
                                                    QualityScope scope = QualityScope::induced_subgraph) {
  if (k < 1 || k > lab.pair_count) throw DomainError("unknown pair index " + std::to_string(k));
  const auto members = lab.members(k);
  const auto n_core = lab.core_count(k);
  if (scope == QualityScope::induced_subgraph) {
    if (members.size() < 3) return kTooSmall;
    if (n_core == 0) return kNoCore;
    if (!detail::be_pattern_defined(members.size(), members.size() - n_core)) return kConstantPattern;
    const auto sub = induced_subgraph(net, std::span<const NodeIndex>(members));
    if (sub.is_empty_graph() || sub.is_complete()) return kConstantAdjacency;
    return std::nullopt;
  }
  if (net.node_count() < 3) return kTooSmall;
  if (n_core == 0) return kNoCore;
  if (!detail::be_pattern_defined(net.node_count(), net.node_count() - n_core)) return kConstantPattern;
  if (net.is_empty_graph() || net.is_complete()) return kConstantAdjacency;
  return std::nullopt;
}

// Single-pair quality of pair k: be_quality with coreness restricted to
// the pair. Throws DomainError carrying the reason code when undefined.
inline double pair_quality(const Labeling& lab, const Network& net, std::uint32_t k,
                           QualityScope scope = QualityScope::induced_subgraph) {
  if (lab.node_count() != net.node_count()) throw DomainError("labeling does not cover every node");
  if (auto reason = untestable_reason(lab, net, k, scope)) throw DomainError(*reason);
  if (scope == QualityScope::induced_subgraph) {
    const auto members = lab.members(k);
    const auto sub = induced_subgraph(net, std::span<const NodeIndex>(members));
    Coreness core;
    core.reserve(members.size());
    for (auto i : members) core.push_back(lab.core[i]);
    return be_quality(core, sub);
  }
  Coreness core(net.node_count(), 0);
  for (NodeIndex i = 0; i < core.size(); ++i) core[i] = (lab.pair[i] == k && lab.core[i]) ? 1 : 0;
  return be_quality(core, net);
}

struct PairVerdict {
  std::uint32_t k = 0;
  std::optional<double> q;
  std::optional<double> threshold;
  bool significant = false;
  std::size_t n_core = 0;
  std::size_t n_periphery = 0;
  std::optional<std::string> reason;  // set when untestable
};

struct SignificanceReport {
  std::vector<PairVerdict> pairs;
  double alpha_prime = 0.05;
  double corrected_alpha = 0.05;
  std::size_t samples = 1000;
  NullMode null_mode = NullMode::pair_matched;
  QualityScope scope = QualityScope::induced_subgraph;
  std::uint64_t seed = 0;
};

struct SignificanceOptions {
  std::size_t samples = 1000;
  double alpha_prime = 0.05;
  NullMode null_mode = NullMode::pair_matched;
  QualityScope scope = QualityScope::induced_subgraph;
  std::uint64_t seed = 0;
  std::size_t null_restarts = 10;
  // 0 = std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

struct SignificanceResult {
  SignificanceReport report;
  Labeling labeling;  // copy carrying per-pair significance flags
};

// Sorted BE qualities of `samples` G(n, m) draws. Sample s uses a network seed
// and a BE seed derived from (seed, s), so the distribution is independent
// of how samples are scheduled across threads.
inline std::vector<double> null_qualities(std::size_t n, std::uint64_t m, std::size_t samples,
                                          std::uint64_t seed, std::size_t restarts,
                                          std::size_t threads = 0) {
  std::vector<double> out(samples);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t s = begin; s < samples; s += stride) {
      const auto net = sample_er(n, m, derive_seed(seed, 2 * s));
      out[s] = *detect_be(net, restarts, derive_seed(seed, 2 * s + 1)).quality;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(samples, 1));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Empirical (1 - alpha) quantile: a quality strictly above it beats at least
// a fraction 1 - alpha of the null samples.
inline double null_threshold(const std::vector<double>& sorted_null, double alpha) {
  if (sorted_null.empty()) throw DomainError("empty null distribution");
  const double target = (1.0 - alpha) * static_cast<double>(sorted_null.size());
  auto rank = static_cast<std::size_t>(std::ceil(target - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted_null.size());
  return sorted_null[rank - 1];
}

// Tests every pair of `lab` against BE qualities on Erdos-Renyi nulls with a
// Sidak-corrected level. Untestable pairs are reported with a reason and
// treated as insignificant.
inline SignificanceResult test_significance(const Labeling& lab, const Network& net,
                                            const SignificanceOptions& options = {}) {
  if (lab.node_count() != net.node_count()) throw DomainError("labeling does not cover every node");
  if (options.samples < 100) throw DomainError("significance test needs at least 100 null samples");
  if (lab.pair_count == 0) throw DomainError("labeling has no pairs");

  SignificanceReport report;
  report.alpha_prime = options.alpha_prime;
  report.corrected_alpha = sidak_alpha(options.alpha_prime, lab.pair_count);
  report.samples = options.samples;
  report.null_mode = options.null_mode;
  report.scope = options.scope;
  report.seed = options.seed;

  std::map<std::pair<std::size_t, std::uint64_t>, std::vector<double>> nulls;
  auto null_for = [&](std::size_t n, std::uint64_t m) -> const std::vector<double>& {
    auto key = std::make_pair(n, m);
    auto it = nulls.find(key);
    if (it == nulls.end()) {
      it = nulls.emplace(key, null_qualities(n, m, options.samples, options.seed,
                                             options.null_restarts, options.threads))
               .first;
    }
    return it->second;
  };

  const bool full_null_defined = net.node_count() >= 3 && !net.is_empty_graph() && !net.is_complete();
  std::vector<bool> flags(lab.pair_count, false);
  for (std::uint32_t k = 1; k <= lab.pair_count; ++k) {
    PairVerdict verdict;
    verdict.k = k;
    verdict.n_core = lab.core_count(k);
    verdict.n_periphery = lab.periphery_count(k);
    verdict.reason = untestable_reason(lab, net, k, options.scope);
    if (!verdict.reason && options.null_mode == NullMode::full_network && !full_null_defined) {
      verdict.reason = kConstantAdjacency;
    }
    if (!verdict.reason) {
      verdict.q = pair_quality(lab, net, k, options.scope);
      std::size_t n = net.node_count();
      std::uint64_t m = net.edge_count();
      if (options.null_mode == NullMode::pair_matched && options.scope == QualityScope::induced_subgraph) {
        const auto members = lab.members(k);
        const auto sub = induced_subgraph(net, std::span<const NodeIndex>(members));
        n = sub.node_count();
        m = sub.edge_count();
      }
      verdict.threshold = null_threshold(null_for(n, m), report.corrected_alpha);
      verdict.significant = *verdict.q > *verdict.threshold;
    }
    flags[k - 1] = verdict.significant;
    report.pairs.push_back(std::move(verdict));
  }

  Labeling flagged = lab;
  flagged.pair_significant = std::move(flags);
  return SignificanceResult{std::move(report), std::move(flagged)};
}

}  // namespace cpdetect
