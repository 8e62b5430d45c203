#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eolo/ingestion.hpp"
#include "eolo_app/cli.hpp"
#include "fixtures.hpp"

namespace eolo::app {
namespace {

using nlohmann::json;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "eolo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> json_lines(const std::string& text) {
  std::vector<json> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) rows.push_back(json::parse(line));
  return rows;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("eolo_cli_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }

  std::string make_triangle() {
    const auto r = run({"gen", "--records", "3", "--complete", "--p-match", "0.5", "--p-nonmatch", "0.5", "--jitter",
                        "0", "--seed", "1", "--out", path("tri.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    return path("tri.json");
  }

  std::filesystem::path dir_;
};

TEST_F(Cli, GenProducesTheTriangle) {
  const auto file = make_triangle();
  EXPECT_EQ(load_instance(file), testing::triangle());
}

TEST_F(Cli, GenIsDeterministicAndWritesTruth) {
  for (const char* name : {"a.json", "b.json"}) {
    const auto r = run({"--format", "json", "gen", "--records", "6", "--seed", "9", "--out", path(name), "--truth-out",
                        path(name) + ".truth"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    EXPECT_EQ(doc.at("pairs"), 15);
    EXPECT_EQ(doc.at("seed"), 9);
  }
  EXPECT_EQ(read_text_file(path("a.json")), read_text_file(path("b.json")));
  EXPECT_EQ(read_text_file(path("a.json.truth")), read_text_file(path("b.json.truth")));
  const auto inst = load_instance(path("a.json"));
  EXPECT_TRUE(is_consistent(inst, load_truth(path("a.json.truth"), inst)));
}

TEST_F(Cli, GenPairFraction) {
  const auto r = run({"gen", "--records", "5", "--pair-fraction", "0.5", "--out", path("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_instance(path("s.json")).pair_count(), 5u);
}

TEST_F(Cli, GenUsageErrors) {
  EXPECT_EQ(run({"gen", "--records", "3"}).code, kExitUsage);
  EXPECT_EQ(run({"gen", "--records", "1", "--out", path("x.json")}).code, kExitUsage);
  EXPECT_EQ(run({"gen", "--records", "3", "--out", path("x.json"), "--p-match", "1.5"}).code, kExitUsage);
  EXPECT_EQ(run({"gen", "--records", "3", "--out", path("x.json"), "--complete", "--pair-fraction", "0.5"}).code,
            kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_FALSE(std::filesystem::exists(path("x.json")));
}

TEST_F(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST_F(Cli, EvalExactJson) {
  const auto file = make_triangle();
  const auto r = run({"--format", "json", "eval", "--instance", file, "--strategies", "optimal", "--method", "exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = json_lines(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("strategy"), "optimal");
  EXPECT_NEAR(rows[0].at("expected_asked").get<double>(), 2.4, 1e-9);
  const auto per_pair = rows[0].at("per_pair_ask_prob").get<std::vector<double>>();
  ASSERT_EQ(per_pair.size(), 3u);
  EXPECT_NEAR(per_pair[2], 0.4, 1e-9);
}

TEST_F(Cli, EvalTableIsSortedAndRounded) {
  const auto file = path("asym.json");
  save_instance(file, Instance{{"a", "b", "c", "d"},
                               {{"a", "b", 0.9}, {"a", "c", 0.2}, {"a", "d", 0.6},
                                {"b", "c", 0.3}, {"b", "d", 0.7}, {"c", "d", 0.1}}});
  const auto r = run({"eval", "--instance", file, "--strategies", "worst,desc,optimal", "--out", path("rows.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("strategy"), 0u);
  EXPECT_LT(r.out.find("worst"), std::string::npos);
  EXPECT_LT(r.out.find("optimal"), r.out.find("worst"));
  const auto rows = json_lines(read_text_file(path("rows.jsonl")));
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(rows[i - 1].at("expected_asked").get<double>(), rows[i].at("expected_asked").get<double>());
  }
}

TEST_F(Cli, EvalIndependenceWarns) {
  const auto file = make_triangle();
  const auto r = run({"--format", "json", "eval", "--instance", file, "--strategies", "desc", "--method",
                      "independence"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NE(r.err.find("known to be incorrect"), std::string::npos);
  EXPECT_NEAR(json_lines(r.out).at(0).at("expected_asked").get<double>(), 2.25, 1e-12);

  // The warning survives --quiet.
  const auto q = run({"--quiet", "eval", "--instance", file, "--method", "independence"});
  EXPECT_NE(q.err.find("warning"), std::string::npos);
}

TEST_F(Cli, EvalMonteCarlo) {
  const auto file = make_triangle();
  const auto r = run({"--format", "json", "--seed", "5", "eval", "--instance", file, "--strategies", "desc",
                      "--method", "mc", "--samples", "20000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto row = json_lines(r.out).at(0);
  EXPECT_EQ(row.at("method"), "mc");
  EXPECT_EQ(row.at("samples"), 20000);
  EXPECT_EQ(row.at("seed"), 5);
  EXPECT_LE(std::abs(row.at("expected_asked").get<double>() - 2.4), 4 * row.at("standard_error").get<double>());
  const auto again = run({"--format", "json", "--seed", "5", "eval", "--instance", file, "--strategies", "desc",
                          "--method", "mc", "--samples", "20000"});
  EXPECT_EQ(again.out, r.out);
}

TEST_F(Cli, EvalErrors) {
  const auto file = make_triangle();
  const auto bad = run({"eval", "--instance", file, "--strategies", "greedy"});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("random:SEED, desc, asc, optimal, worst, explicit:FILE"), std::string::npos);
  EXPECT_EQ(run({"eval", "--instance", file, "--method", "magic"}).code, kExitUsage);
  EXPECT_EQ(run({"eval", "--instance", file, "--samples", "10"}).code, kExitUsage);
  EXPECT_EQ(run({"eval", "--instance", path("missing.json")}).code, kExitRuntime);

  ASSERT_EQ(run({"gen", "--records", "5", "--out", path("big.json")}).code, 0);
  const auto cap = run({"eval", "--instance", path("big.json"), "--strategies", "optimal"});
  EXPECT_EQ(cap.code, kExitRuntime);
  EXPECT_NE(cap.err.find("--method mc"), std::string::npos);

  write_text_file(path("broken.json"), R"({"records": ["a"], "pairs": [{"a": "a", "b": "a", "p": 0.5}]})");
  const auto invalid = run({"eval", "--instance", path("broken.json")});
  EXPECT_EQ(invalid.code, kExitRuntime);
  EXPECT_NE(invalid.err.find("pairs[0]"), std::string::npos);
}

TEST_F(Cli, EvalExplicitOrderFile) {
  const auto file = make_triangle();
  write_text_file(path("order.json"), R"([["b","c"], ["a","c"], ["a","b"]])");
  const auto r = run({"--format", "json", "eval", "--instance", file, "--strategies",
                      "explicit:" + path("order.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_lines(r.out).at(0).at("order"), json::parse("[2, 1, 0]"));
}

TEST_F(Cli, SimulateExamples) {
  const auto file = make_triangle();
  write_text_file(path("one.json"), R"({"clusters": [["a", "b", "c"]]})");
  write_text_file(path("none.json"), R"({"clusters": []})");

  const auto r = run({"simulate", "--instance", file, "--truth", path("one.json"), "--strategy", "desc",
                      "--trace-out", path("trace.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("asked=2 deduced=1\n", 0), 0u);
  EXPECT_NE(r.out.find("{a,b,c}"), std::string::npos);
  const auto trace = json_lines(read_text_file(path("trace.jsonl")));
  ASSERT_EQ(trace.size(), 3u);
  EXPECT_EQ(trace[2], json::parse(R"({"pair": ["b", "c"], "outcome": "deduced", "label": "match"})"));

  const auto none = run({"simulate", "--instance", file, "--truth", path("none.json")});
  EXPECT_EQ(none.out.rfind("asked=3 deduced=0\n", 0), 0u);

  const auto j = run({"--format", "json", "simulate", "--instance", file, "--truth", path("one.json")});
  const auto doc = json::parse(j.out);
  EXPECT_EQ(doc.at("asked"), 2);
  EXPECT_EQ(doc.at("deduced"), 1);
  EXPECT_EQ(doc.at("clusters"), json::parse(R"([["a","b","c"]])"));
}

TEST_F(Cli, SimulateCompleteGraphAllMatch) {
  save_instance(path("k4.json"), testing::complete(4));
  write_text_file(path("one.json"), R"({"clusters": [["a", "b", "c", "d"]]})");
  for (const char* strategy : {"desc", "asc", "random:3", "optimal", "worst"}) {
    const auto r = run({"simulate", "--instance", path("k4.json"), "--truth", path("one.json"), "--strategy", strategy});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("asked=3 deduced=3\n", 0), 0u) << strategy;
  }
}

TEST_F(Cli, SimulateErrors) {
  const auto file = make_triangle();
  write_text_file(path("overlap.json"), R"({"clusters": [["a", "b"], ["b", "c"]]})");
  EXPECT_EQ(run({"simulate", "--instance", file, "--truth", path("overlap.json")}).code, kExitRuntime);
  EXPECT_EQ(run({"simulate", "--instance", file}).code, kExitUsage);
  EXPECT_EQ(run({"simulate", "--instance", file, "--truth", path("overlap.json"), "--strategy", "nope"}).code,
            kExitUsage);
}

TEST_F(Cli, WorldsListsFive) {
  const auto file = make_triangle();
  const auto r = run({"--format", "json", "worlds", "--instance", file});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = json_lines(r.out);
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& row : rows) EXPECT_NEAR(row.at("prob").get<double>(), 0.2, 1e-12);
}

TEST_F(Cli, ServeFlagValidation) {
  EXPECT_EQ(run({"serve", "--port", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"serve"}).code, kExitUsage);
  EXPECT_EQ(run({"serve", "--port", "70000"}).code, kExitUsage);
  EXPECT_EQ(run({"serve", "--port", "18080", "--static-dir", path("nope")}).code, kExitRuntime);
}

}  // namespace
}  // namespace eolo::app
