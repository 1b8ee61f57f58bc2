#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "graph.hpp"
#include "ingest.hpp"
#include "labeling.hpp"
#include "significance.hpp"

namespace cpdetect {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// Fixed six-decimal rendering used by every CSV.
inline std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

// One edge per line, two whitespace-separated ids. Blank lines and lines
// starting with '#' are ignored.
inline std::vector<IdEdge> read_edge_list(std::istream& in) {
  std::vector<IdEdge> edges;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::string a;
    if (!(fields >> a) || a.front() == '#') continue;
    std::string b;
    std::string extra;
    if (!(fields >> b) || (fields >> extra)) {
      throw ParseError("edge list line " + std::to_string(number) + ": expected two node ids");
    }
    edges.emplace_back(std::move(a), std::move(b));
  }
  return edges;
}

inline void write_edge_list(std::ostream& out, const Network& net) {
  for (const auto& [a, b] : net.id_edges()) out << a << ' ' << b << '\n';
}

inline Network load_network(const std::filesystem::path& path, AttributeMap attributes = {}) {
  std::istringstream in(read_text_file(path));
  auto edges = read_edge_list(in);
  if (edges.empty()) throw DomainError("'" + path.string() + "' contains no edges");
  return build_network(edges, std::move(attributes));
}

// `node_id,attribute` rows; a header row with exactly those names is skipped.
inline AttributeMap read_attributes(std::istream& in) {
  AttributeMap attrs;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto view = detail::trim(line);
    if (view.empty()) continue;
    const auto comma = view.find(',');
    if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("attribute line " + std::to_string(number) + ": expected 'node_id,attribute'");
    }
    auto id = detail::trim(view.substr(0, comma));
    auto attr = detail::trim(view.substr(comma + 1));
    if (number == 1 && id == "node_id" && attr == "attribute") continue;
    if (id.empty() || attr.empty()) {
      throw ParseError("attribute line " + std::to_string(number) + ": empty field");
    }
    attrs[std::string(id)] = std::string(attr);
  }
  return attrs;
}

inline void write_manifest(std::ostream& out, const WindowedNetworkSeries& series) {
  out << "window_label,start,end,n_nodes,n_edges\n";
  for (const auto& w : series.windows) {
    out << w.label << ',' << format_date(w.start) << ',' << format_date(w.end) << ','
        << w.network.node_count() << ',' << w.network.edge_count() << '\n';
  }
}

inline void write_transactions(std::ostream& out, const TransactionLog& log) {
  out << "timestamp,lender,borrower,amount\n";
  char amount[64];
  for (const auto& rec : log) {
    std::snprintf(amount, sizeof amount, "%.4f", rec.amount);
    out << format_timestamp(rec.timestamp) << ',' << rec.lender << ',' << rec.borrower << ',' << amount << '\n';
  }
}

// Labeling document:
// {schema, window, algorithm, seed, q_value, nodes:[{id, pair, core, significant}]}
inline Json labeling_to_json(const std::string& window, const std::string& algorithm, std::uint64_t seed,
                             std::optional<double> q_value, const Labeling& lab, const Network& net) {
  if (lab.node_count() != net.node_count()) throw DomainError("labeling does not cover every node");
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["window"] = window;
  doc["algorithm"] = algorithm;
  doc["seed"] = seed;
  doc["q_value"] = q_value ? Json(*q_value) : Json(nullptr);
  Json nodes = Json::array();
  for (NodeIndex i = 0; i < lab.node_count(); ++i) {
    Json node;
    node["id"] = net.id(i);
    node["pair"] = lab.pair[i];
    node["core"] = lab.core[i] != 0;
    node["significant"] = lab.pair_significant ? Json(lab.node_significant(i)) : Json(nullptr);
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);
  return doc;
}

struct LoadedLabeling {
  std::string window;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::optional<double> q_value;
  Labeling labeling;  // aligned with the network's node indices
};

inline LoadedLabeling labeling_from_json(const Json& doc, const Network& net) {
  try {
    if (doc.at("schema").get<int>() != kSchemaVersion) throw ParseError("unsupported labeling schema");
    LoadedLabeling out;
    out.window = doc.at("window").get<std::string>();
    out.algorithm = doc.at("algorithm").get<std::string>();
    out.seed = doc.at("seed").get<std::uint64_t>();
    if (!doc.at("q_value").is_null()) out.q_value = doc.at("q_value").get<double>();
    const auto n = net.node_count();
    std::vector<std::uint32_t> pair(n, 0);
    Coreness core(n, 0);
    std::vector<std::optional<bool>> sig(n);
    std::vector<bool> seen(n, false);
    for (const auto& node : doc.at("nodes")) {
      const auto i = net.index_of(node.at("id").get<std::string>());
      if (seen[i]) throw ParseError("duplicate node '" + net.id(i) + "' in labeling");
      seen[i] = true;
      pair[i] = node.at("pair").get<std::uint32_t>();
      core[i] = node.at("core").get<bool>() ? 1 : 0;
      if (!node.at("significant").is_null()) sig[i] = node.at("significant").get<bool>();
    }
    for (NodeIndex i = 0; i < n; ++i) {
      if (!seen[i]) throw ParseError("labeling misses node '" + net.id(i) + "'");
      if (pair[i] == 0) throw ParseError("pair indices must start at 1");
    }
    const auto original = pair;
    out.labeling = make_labeling(std::move(pair), std::move(core));
    if (out.labeling.pair != original) throw ParseError("pair indices are not in canonical order");
    if (std::any_of(sig.begin(), sig.end(), [](const auto& s) { return s.has_value(); })) {
      std::vector<std::optional<bool>> per_pair(out.labeling.pair_count);
      for (NodeIndex i = 0; i < n; ++i) {
        if (!sig[i]) throw ParseError("significance flags must be set on all nodes or none");
        auto& flag = per_pair[out.labeling.pair[i] - 1];
        if (flag && *flag != *sig[i]) throw ParseError("inconsistent significance flags within a pair");
        flag = sig[i];
      }
      std::vector<bool> flags;
      for (const auto& f : per_pair) flags.push_back(*f);
      out.labeling.pair_significant = std::move(flags);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed labeling JSON: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("labeling does not match network: ") + e.what());
  }
}

// {schema, window, pairs:[{k, q, threshold, significant, n_core, n_periphery,
// reason}], alpha_prime, corrected_alpha, samples, null_mode, quality_scope, seed}
inline Json report_to_json(const std::string& window, const SignificanceReport& report) {
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["window"] = window;
  Json pairs = Json::array();
  for (const auto& v : report.pairs) {
    Json p;
    p["k"] = v.k;
    p["q"] = v.q ? Json(*v.q) : Json(nullptr);
    p["threshold"] = v.threshold ? Json(*v.threshold) : Json(nullptr);
    p["significant"] = v.significant;
    p["n_core"] = v.n_core;
    p["n_periphery"] = v.n_periphery;
    p["reason"] = v.reason ? Json(*v.reason) : Json(nullptr);
    pairs.push_back(std::move(p));
  }
  doc["pairs"] = std::move(pairs);
  doc["alpha_prime"] = report.alpha_prime;
  doc["corrected_alpha"] = report.corrected_alpha;
  doc["samples"] = report.samples;
  doc["null_mode"] = to_string(report.null_mode);
  doc["quality_scope"] = to_string(report.scope);
  doc["seed"] = report.seed;
  return doc;
}

inline std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

inline Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + origin + "': " + e.what());
  }
}

}  // namespace cpdetect
