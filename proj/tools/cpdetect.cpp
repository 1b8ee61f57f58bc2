#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <cpdetect/cpdetect.hpp>

namespace fs = std::filesystem;
using namespace cpdetect;

namespace {

constexpr const char* kEdgesSuffix = ".edges";
constexpr const char* kLabelingSuffix = ".labeling.json";
constexpr const char* kReportSuffix = ".significance.json";

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string strip_suffix(const std::string& s, const std::string& suffix) {
  return s.substr(0, s.size() - suffix.size());
}

// Files with `suffix` under `input` (a directory, or a single file), sorted by name.
std::vector<fs::path> collect_inputs(const fs::path& input, const std::string& suffix) {
  std::error_code ec;
  if (fs::is_regular_file(input, ec)) return {input};
  if (!fs::is_directory(input, ec)) throw IoError("input '" + input.string() + "' does not exist");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && ends_with(entry.path().filename().string(), suffix)) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw IoError("no '*" + suffix + "' files in '" + input.string() + "'");
  return out;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
}

fs::path network_path(const fs::path& networks, const std::string& window) {
  return networks / (window + kEdgesSuffix);
}

// ---------------------------------------------------------------- aggregate

struct AggregateArgs {
  std::string input;
  std::string scale = "static";
  std::string out;
  bool lenient = false;
};

int run_aggregate(const AggregateArgs& args) {
  const auto scale = parse_scale(args.scale);
  std::istringstream in(read_text_file(args.input));
  auto parsed = parse_transactions(in, args.lenient ? ParseMode::lenient : ParseMode::strict);
  for (const auto& issue : parsed.skipped) {
    std::cerr << "skipped line " << issue.line << ": " << issue.message << '\n';
  }
  auto series = aggregate(parsed.log, scale);
  for (const auto& w : series.warnings) std::cerr << "warning: " << w << '\n';

  ensure_directory(args.out);
  const fs::path out(args.out);
  for (const auto& w : series.windows) {
    std::ostringstream edges;
    write_edge_list(edges, w.network);
    write_text_file(out / (std::string(to_string(scale)) + "_" + w.label + kEdgesSuffix), edges.str());
  }
  std::ostringstream manifest;
  write_manifest(manifest, series);
  write_text_file(out / "manifest.csv", manifest.str());
  return 0;
}

// ------------------------------------------------------------------ detect

struct DetectArgs {
  std::string algorithm = "kmer";
  std::size_t runs = 10;
  std::optional<std::size_t> restarts;
  std::uint64_t seed = 0;
  std::string in;
  std::string out;
};

int run_detect(const DetectArgs& args) {
  const auto inputs = collect_inputs(args.in, kEdgesSuffix);
  ensure_directory(args.out);
  const fs::path out(args.out);
  std::ostringstream log;
  log << "window,status,reason\n";
  for (const auto& path : inputs) {
    const auto window = strip_suffix(path.filename().string(), kEdgesSuffix);
    const auto net = load_network(path);
    Labeling lab;
    std::optional<double> q;
    std::string algorithm = args.algorithm;
    try {
      if (args.algorithm == "be") {
        if (net.node_count() < 3) throw DomainError("fewer than three nodes");
        if (net.is_empty_graph() || net.is_complete()) throw DomainError("constant adjacency");
        const auto restarts = args.restarts.value_or(default_be_restarts(net.node_count()));
        auto result = detect_be(net, restarts, args.seed);
        q = result.quality;
        lab = as_labeling(result);
      } else if (args.algorithm == "minres") {
        algorithm = "minres-binary";
        auto result = detect_minres(net);
        q = result.quality;
        lab = as_labeling(result);
      } else {
        lab = detect_kmer(net, args.runs, args.seed);
        q = lab.q_value;
      }
    } catch (const DomainError& e) {
      log << window << ",skipped," << e.what() << '\n';
      continue;
    }
    if (args.algorithm != "kmer") lab.q_value = qcp(lab, net);
    write_text_file(out / (window + kLabelingSuffix),
                    dump(labeling_to_json(window, algorithm, args.seed, q, lab, net)));
    log << window << ",ok,\n";
  }
  write_text_file(out / "detect_log.csv", log.str());
  return 0;
}

// -------------------------------------------------------------------- test

struct TestArgs {
  std::string in;
  std::string networks;
  std::string out;
  std::size_t samples = 1000;
  double alpha = 0.05;
  std::string null_mode = "pair";
  std::string scope = "subgraph";
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

int run_test(const TestArgs& args) {
  const auto inputs = collect_inputs(args.in, kLabelingSuffix);
  const fs::path networks = args.networks.empty()
                                ? (fs::is_directory(args.in) ? fs::path(args.in) : fs::path(args.in).parent_path())
                                : fs::path(args.networks);
  ensure_directory(args.out);
  const fs::path out(args.out);

  SignificanceOptions options;
  options.samples = args.samples;
  options.alpha_prime = args.alpha;
  options.null_mode = args.null_mode == "full" ? NullMode::full_network : NullMode::pair_matched;
  options.scope = args.scope == "whole" ? QualityScope::whole_network : QualityScope::induced_subgraph;
  options.seed = args.seed;
  options.threads = args.threads;

  for (const auto& path : inputs) {
    const auto doc = parse_json(read_text_file(path), path.string());
    const auto window = doc.value("window", strip_suffix(path.filename().string(), kLabelingSuffix));
    const auto net = load_network(network_path(networks, window));
    auto loaded = labeling_from_json(doc, net);
    auto result = test_significance(loaded.labeling, net, options);
    write_text_file(out / (window + kReportSuffix), dump(report_to_json(window, result.report)));
    write_text_file(out / (window + kLabelingSuffix),
                    dump(labeling_to_json(window, loaded.algorithm, loaded.seed, loaded.q_value,
                                          result.labeling, net)));
  }
  return 0;
}

// ----------------------------------------------------------------- metrics

struct MetricsArgs {
  std::string in;
  std::string networks;
  std::string attributes;
  std::string out;
};

std::string join_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) row += (i ? "," : "") + cells[i];
  return row + "\n";
}

int run_metrics(const MetricsArgs& args) {
  const auto inputs = collect_inputs(args.in, kLabelingSuffix);
  const fs::path networks = args.networks.empty() ? fs::path(args.in) : fs::path(args.networks);
  AttributeMap attrs;
  if (!args.attributes.empty()) {
    std::istringstream in(read_text_file(args.attributes));
    attrs = read_attributes(in);
  }
  ensure_directory(args.out);
  const fs::path out(args.out);

  std::ostringstream metrics, counts, shares, flows, jac;
  metrics << "window,k,n_core,n_periphery,rho_cc,rho_cp,rho_pp,class,significant\n";
  counts << "window,n_pairs,n_significant\n";
  shares << "window,k,attribute,core_fraction,periphery_fraction\n";
  flows << "window_from,window_to,group_from,group_to,count\n";

  std::vector<std::string> windows;
  std::vector<std::set<std::string>> cores;
  std::vector<NodeGroups> groups;
  for (const auto& path : inputs) {
    const auto doc = parse_json(read_text_file(path), path.string());
    const auto window = doc.value("window", strip_suffix(path.filename().string(), kLabelingSuffix));
    const auto net = load_network(network_path(networks, window), attrs);
    const auto loaded = labeling_from_json(doc, net);
    const auto& lab = loaded.labeling;
    std::size_t n_significant = 0;
    for (std::uint32_t k = 1; k <= lab.pair_count; ++k) {
      const auto d = block_densities(lab, net, k);
      std::string sig;
      if (lab.pair_significant) {
        const bool s = (*lab.pair_significant)[k - 1];
        n_significant += s;
        sig = s ? "true" : "false";
      }
      metrics << join_row({window, std::to_string(k), std::to_string(d.n_core), std::to_string(d.n_periphery),
                           format_fixed(d.rho_cc), format_fixed(d.rho_cp), format_fixed(d.rho_pp),
                           to_string(classify_structure(d)), sig});
      if (!attrs.empty()) {
        for (const auto& [attr, share] : attribute_fractions(lab, net, k)) {
          shares << join_row({window, std::to_string(k), attr, share.core ? format_fixed(*share.core) : "",
                              share.periphery ? format_fixed(*share.periphery) : ""});
        }
      }
    }
    counts << join_row({window, std::to_string(lab.pair_count),
                        lab.pair_significant ? std::to_string(n_significant) : ""});
    windows.push_back(window);
    cores.push_back(main_core(lab, net));
    groups.push_back(node_groups(lab, net));
  }

  for (std::size_t w = 0; w + 1 < windows.size(); ++w) {
    for (const auto& row : alluvial_flows(groups[w], groups[w + 1])) {
      flows << join_row({windows[w], windows[w + 1], row.from, row.to, std::to_string(row.count)});
    }
  }
  const auto matrix = jaccard_matrix(cores);
  jac << "window";
  for (const auto& w : windows) jac << ',' << w;
  jac << '\n';
  for (std::size_t a = 0; a < windows.size(); ++a) {
    jac << windows[a];
    for (std::size_t b = 0; b < windows.size(); ++b) {
      jac << ',' << (matrix[a][b] ? format_fixed(*matrix[a][b]) : "");
    }
    jac << '\n';
  }

  write_text_file(out / "metrics.csv", metrics.str());
  write_text_file(out / "pair_counts.csv", counts.str());
  write_text_file(out / "alluvial.csv", flows.str());
  write_text_file(out / "jaccard.csv", jac.str());
  if (!attrs.empty()) write_text_file(out / "attributes.csv", shares.str());
  return 0;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = ".";
};

std::vector<PlantedPair> pairs_from_json(const Json& list) {
  std::vector<PlantedPair> pairs;
  for (const auto& p : list) {
    PlantedPair pair;
    pair.n_core = p.at("n_core").get<std::size_t>();
    pair.n_periphery = p.at("n_periphery").get<std::size_t>();
    pair.p_cc = p.at("p_cc").get<double>();
    pair.p_cp = p.at("p_cp").get<double>();
    pair.p_pp = p.at("p_pp").get<double>();
    pairs.push_back(pair);
  }
  return pairs;
}

Json truth_json(const std::string& window, std::uint64_t seed, const PlantedNetwork& planted) {
  auto truth = planted.truth;
  std::optional<double> q;
  if (planted.network.node_count() >= 2) q = qcp(truth, planted.network);
  auto doc = labeling_to_json(window, "planted", seed, q, truth, planted.network);
  doc["dropped"] = planted.dropped;
  return doc;
}

int run_generate(const GenerateArgs& args) {
  const auto config = parse_json(read_text_file(args.config), args.config);
  ensure_directory(args.out);
  const fs::path out(args.out);
  try {
    const auto kind = config.value("kind", std::string("network"));
    if (kind == "network") {
      const auto pairs = pairs_from_json(config.at("pairs"));
      const auto planted = plant_cp_network(pairs, config.value("p_inter", 0.0), args.seed);
      if (planted.network.node_count() == 0) throw DomainError("planted network has no edges");
      std::ostringstream edges;
      write_edge_list(edges, planted.network);
      write_text_file(out / "network.edges", edges.str());
      write_text_file(out / "truth.json", dump(truth_json("network", args.seed, planted)));
      for (const auto& id : planted.dropped) std::cerr << "dropped isolated node " << id << '\n';
      return 0;
    }
    if (kind == "transactions") {
      TransactionConfig tc;
      const auto start = parse_timestamp(config.value("start", std::string("2000-01-01")));
      if (!start) throw ParseError("config: bad start date");
      tc.start = std::chrono::floor<std::chrono::days>(*start);
      tc.scale = parse_scale(config.value("scale", std::string("month")));
      tc.windows = config.at("windows").get<std::size_t>();
      tc.max_trades_per_edge = config.value("max_trades_per_edge", std::size_t{3});
      for (const auto& r : config.at("regimes")) {
        Regime regime;
        regime.from_window = r.value("from_window", std::size_t{0});
        regime.pairs = pairs_from_json(r.at("pairs"));
        regime.p_inter = r.value("p_inter", 0.0);
        tc.regimes.push_back(std::move(regime));
      }
      const auto synth = synth_transactions(tc, args.seed);
      std::ostringstream csv;
      write_transactions(csv, synth.log);
      write_text_file(out / "transactions.csv", csv.str());
      Json truth;
      truth["schema"] = kSchemaVersion;
      truth["seed"] = args.seed;
      Json windows = Json::array();
      for (const auto& w : synth.windows) {
        const auto name = std::string(to_string(tc.scale)) + "_" + w.label;
        if (w.planted.network.node_count() == 0) continue;
        windows.push_back(truth_json(name, args.seed, w.planted));
      }
      truth["windows"] = std::move(windows);
      write_text_file(out / "truth.json", dump(truth));
      return 0;
    }
    throw Error(ErrorKind::usage, "config: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

// ------------------------------------------------------------------ oracle

struct OracleArgs {
  std::string in;
  std::string out;
};

int run_oracle(const OracleArgs& args) {
  const auto net = load_network(args.in);
  const auto result = brute_force_qcp(net);
  const auto text = dump(labeling_to_json(fs::path(args.in).stem().string(), "brute-force", 0, result.q_star,
                                          result.labeling, net));
  if (args.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(args.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cpdetect: core-periphery detection for transaction networks"};
  app.require_subcommand(1);

  AggregateArgs agg;
  auto* aggregate_cmd = app.add_subcommand("aggregate", "Bucket a transaction CSV into windowed edge lists");
  aggregate_cmd->add_option("--input", agg.input, "Transaction CSV")->required();
  aggregate_cmd->add_option("--scale", agg.scale, "Window length")
      ->check(CLI::IsMember({"static", "quarter", "month", "week", "day"}));
  aggregate_cmd->add_option("--out", agg.out, "Output directory")->required();
  aggregate_cmd->add_flag("--lenient", agg.lenient, "Skip malformed rows instead of failing");

  DetectArgs det;
  auto* detect_cmd = app.add_subcommand("detect", "Detect core-periphery pairs in each window");
  detect_cmd->add_option("--algorithm", det.algorithm, "Detector")->check(CLI::IsMember({"be", "minres", "kmer"}));
  detect_cmd->add_option("--runs", det.runs, "KM-ER runs")->check(CLI::PositiveNumber);
  detect_cmd->add_option("--restarts", det.restarts, "BE restarts (default 50, or 10 above 500 nodes)")
      ->check(CLI::PositiveNumber);
  detect_cmd->add_option("--seed", det.seed, "Random seed");
  detect_cmd->add_option("--in", det.in, "Edge list file or directory of *.edges")->required();
  detect_cmd->add_option("--out", det.out, "Output directory")->required();

  TestArgs tst;
  auto* test_cmd = app.add_subcommand("test", "Test detected pairs against Erdos-Renyi nulls");
  test_cmd->add_option("--in", tst.in, "Labeling file or directory of *.labeling.json")->required();
  test_cmd->add_option("--networks", tst.networks, "Directory holding the windows' .edges files");
  test_cmd->add_option("--out", tst.out, "Output directory")->required();
  test_cmd->add_option("--samples", tst.samples, "Null samples per distribution")->check(CLI::Range(100, 100000000));
  test_cmd->add_option("--alpha", tst.alpha, "Family-wise significance level")->check(CLI::Range(0.0, 1.0));
  test_cmd->add_option("--null", tst.null_mode, "Null size: pair-matched or full network")
      ->check(CLI::IsMember({"pair", "full"}));
  test_cmd->add_option("--scope", tst.scope, "Pair quality on its induced subgraph or the whole network")
      ->check(CLI::IsMember({"subgraph", "whole"}));
  test_cmd->add_option("--seed", tst.seed, "Random seed");
  test_cmd->add_option("--threads", tst.threads, "Worker threads (0 = hardware)");

  MetricsArgs met;
  auto* metrics_cmd = app.add_subcommand("metrics", "Block densities, Jaccard and alluvial tables");
  metrics_cmd->add_option("--in", met.in, "Directory of *.labeling.json")->required();
  metrics_cmd->add_option("--networks", met.networks, "Directory holding the windows' .edges files");
  metrics_cmd->add_option("--attributes", met.attributes, "node_id,attribute CSV");
  metrics_cmd->add_option("--out", met.out, "Output directory")->required();

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Planted networks or transaction logs from a JSON config");
  generate_cmd->add_option("--config", gen.config, "Generator config JSON")->required();
  generate_cmd->add_option("--seed", gen.seed, "Random seed");
  generate_cmd->add_option("--out", gen.out, "Output directory");

  OracleArgs orc;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive Q^cp optimum (N <= 9)");
  oracle_cmd->add_option("--in", orc.in, "Edge list")->required();
  oracle_cmd->add_option("--out", orc.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::usage);
  }

  try {
    if (*aggregate_cmd) return run_aggregate(agg);
    if (*detect_cmd) return run_detect(det);
    if (*test_cmd) return run_test(tst);
    if (*metrics_cmd) return run_metrics(met);
    if (*generate_cmd) return run_generate(gen);
    if (*oracle_cmd) return run_oracle(orc);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::usage);
  }
  return static_cast<int>(ErrorKind::usage);
}
