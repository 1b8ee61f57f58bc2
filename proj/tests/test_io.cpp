#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <cpdetect/io.hpp>
#include <cpdetect/kmer.hpp>
#include <cpdetect/synth.hpp>

using namespace cpdetect;

namespace {

PlantedNetwork two_pairs() {
  const std::vector<PlantedPair> spec{{3, 6, 1.0, 1.0, 0.0}, {2, 4, 1.0, 1.0, 0.0}};
  return plant_cp_network(spec, 0.0, 0);
}

}  // namespace

TEST(EdgeList, ParsesAndRoundTrips) {
  std::istringstream in("# comment\na b\n\n  b   c  \nc a\n");
  const auto net = build_network(read_edge_list(in));
  EXPECT_EQ(net.edge_count(), 3u);
  std::ostringstream out;
  write_edge_list(out, net);
  EXPECT_EQ(out.str(), "a b\na c\nb c\n");
  std::istringstream again(out.str());
  EXPECT_TRUE(build_network(read_edge_list(again)) == net);
}

TEST(EdgeList, BadLineCitesNumber) {
  std::istringstream in("a b\nc\n");
  try {
    read_edge_list(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream extra("a b c\n");
  EXPECT_THROW(read_edge_list(extra), ParseError);
}

TEST(Attributes, HeaderOptional) {
  std::istringstream with("node_id,attribute\na,IT\nb, FR\n");
  const auto attrs = read_attributes(with);
  EXPECT_EQ(attrs.size(), 2u);
  EXPECT_EQ(attrs.at("b"), "FR");
  std::istringstream without("a,IT\n");
  EXPECT_EQ(read_attributes(without).at("a"), "IT");
  std::istringstream bad("a,IT,x\n");
  EXPECT_THROW(read_attributes(bad), ParseError);
}

TEST(LabelingJson, RoundTrip) {
  const auto planted = two_pairs();
  auto lab = detect_kmer(planted.network, 5, 2);
  lab.pair_significant = std::vector<bool>{true, false};
  const auto doc = labeling_to_json("month_2000-01", "kmer", 2, lab.q_value, lab, planted.network);
  const auto reparsed = parse_json(dump(doc), "memory");
  const auto loaded = labeling_from_json(reparsed, planted.network);
  EXPECT_EQ(loaded.window, "month_2000-01");
  EXPECT_EQ(loaded.algorithm, "kmer");
  EXPECT_EQ(loaded.seed, 2u);
  EXPECT_EQ(*loaded.q_value, lab.q_value);
  EXPECT_EQ(loaded.labeling.pair, lab.pair);
  EXPECT_EQ(loaded.labeling.core, lab.core);
  EXPECT_EQ(loaded.labeling.pair_significant, lab.pair_significant);
  EXPECT_EQ(dump(labeling_to_json("month_2000-01", "kmer", 2, lab.q_value, loaded.labeling, planted.network)),
            dump(doc));
}

TEST(LabelingJson, RejectsInconsistentDocuments) {
  const auto planted = two_pairs();
  const auto doc = labeling_to_json("w", "planted", 0, std::nullopt, planted.truth, planted.network);

  auto swapped = doc;
  for (auto& node : swapped["nodes"]) node["pair"] = 3 - node["pair"].get<int>();
  EXPECT_THROW(labeling_from_json(swapped, planted.network), ParseError);

  auto partial_flags = doc;
  partial_flags["nodes"][0]["significant"] = true;
  EXPECT_THROW(labeling_from_json(partial_flags, planted.network), ParseError);

  auto missing = doc;
  missing["nodes"].erase(missing["nodes"].size() - 1);
  EXPECT_THROW(labeling_from_json(missing, planted.network), ParseError);

  auto stranger = doc;
  stranger["nodes"][0]["id"] = "zz";
  EXPECT_THROW(labeling_from_json(stranger, planted.network), ParseError);

  auto schema = doc;
  schema["schema"] = 99;
  EXPECT_THROW(labeling_from_json(schema, planted.network), ParseError);
  EXPECT_THROW(parse_json("{", "x"), ParseError);
}

TEST(ReportJson, Fields) {
  SignificanceReport report;
  report.alpha_prime = 0.05;
  report.corrected_alpha = 0.05;
  report.samples = 100;
  report.pairs.push_back(PairVerdict{1, 0.8, 0.5, true, 3, 6, std::nullopt});
  report.pairs.push_back(PairVerdict{2, std::nullopt, std::nullopt, false, 1, 1, std::string(kTooSmall)});
  const auto doc = report_to_json("static", report);
  EXPECT_EQ(doc["window"], "static");
  EXPECT_EQ(doc["null_mode"], "pair");
  EXPECT_EQ(doc["quality_scope"], "induced-subgraph");
  EXPECT_EQ(doc["pairs"][0]["significant"], true);
  EXPECT_TRUE(doc["pairs"][1]["q"].is_null());
  EXPECT_EQ(doc["pairs"][1]["reason"], kTooSmall);
}

TEST(FormatFixed, SixDecimals) {
  EXPECT_EQ(format_fixed(0.5), "0.500000");
  EXPECT_EQ(format_fixed(1.0 / 3.0), "0.333333");
}
