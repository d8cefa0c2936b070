#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = mft::cli::parse_and_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse_json(const Run& r) {
  auto j = nlohmann::json::parse(r.out, nullptr, false);
  EXPECT_FALSE(j.is_discarded()) << r.out;
  return j;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mftuple-test-" + std::to_string(::getpid()) + "-" + name);
}

} // namespace

TEST(Cli, Admissible) {
  auto r = run({"admissible", "--tuple", "0,2,6"});
  EXPECT_EQ(r.code, 0) << r.err;
  r = run({"admissible", "--tuple", "0,2,4"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("3"), std::string::npos);
  r = run({"admissible", "--tuple", "0,2", "--json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(parse_json(r).is_object());
  r = run({"admissible", "--tuple", "0,0"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"construct", "--alphas", "1"}).code, 2);
  EXPECT_EQ(run({"construct", "--alphas", "1", "--betas", "0,2", "--targets", "1/2", "--epsilon", "0.1"}).code, 2);
  EXPECT_EQ(run({"construct", "--alphas", "1", "--betas", "0,2", "--targets", "1/4", "--epsilon", "2"}).code, 2);
  EXPECT_EQ(run({"search", "--plan", temp_file("missing.json").string()}).code, 2);
  EXPECT_EQ(run({"reproduce-table", "--table", "3", "--row", "1"}).code, 2);
}

TEST(Cli, Approximate) {
  auto r = run({"approximate", "--function", "phi_over_n", "--targets", "4/5", "--tolerance", "1/100",
                "--avoid", "2,3", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse_json(r);
  EXPECT_EQ(j["version"], "approximate-v1");
  EXPECT_NE(r.out.find("\"5\""), std::string::npos) << r.out;
  r = run({"approximate", "--function", "phi_over_n", "--targets", "4/5", "--tolerance", "1/100"});
  EXPECT_EQ(r.code, 0);
  EXPECT_FALSE(r.out.empty());
}

TEST(Cli, ConstructSearchRoundTrip) {
  const auto path = temp_file("plan.json");
  auto r = run({"construct", "--function", "phi", "--alphas", "1", "--betas", "0,2", "--targets", "1/4",
                "--epsilon", "1/10", "-o", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  const auto plan = nlohmann::json::parse(in);
  EXPECT_EQ(plan["version"], "plan-v1");

  r = run({"search", "--plan", path.string(), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto hit = parse_json(r);
  EXPECT_EQ(hit["version"], "hit-v1");
  EXPECT_EQ(hit["status"], "hit");
  EXPECT_EQ(hit["t"], "11");
  EXPECT_EQ(hit["n"], "9929");

  r = run({"search", "--plan", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("n = 9929"), std::string::npos) << r.out;

  r = run({"search", "--plan", path.string(), "--segment-length", "4", "--max-segments", "1", "--json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(parse_json(r)["status"], "exhausted");

  r = run({"construct", "--function", "phi", "--alphas", "1", "--betas", "0,2", "--targets", "1/4",
           "--epsilon", "1/10", "--json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(parse_json(r)["version"], "plan-v1");
  std::filesystem::remove(path);
}

TEST(Cli, RunValueAndRatioModes) {
  auto r = run({"run", "--function", "sigma", "--alphas=1", "--betas", "0,2", "--targets", "2.5",
                "--epsilon", "0.05", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_json(r)["status"], "hit");
  // ratio plans of this shape need a multiplier beyond the width limit
  r = run({"run", "--function", "phi", "--alphas=-1,1", "--betas", "0,2", "--mode", "ratio-anchored",
           "--targets", "3.14159", "--epsilon", "0.001"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("max_w_bits"), std::string::npos) << r.err;
}

TEST(Cli, VerifyAndReproduce) {
  auto r = run({"verify", "--p", "5", "--betas", "0,2", "--pair=-1,1", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(parse_json(r).is_object());
  r = run({"verify", "--p", "9", "--betas", "0,2"});
  EXPECT_EQ(r.code, 1);
  r = run({"reproduce-table", "--table", "1", "--row", "gamma", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_json(r)["version"], "table-report-v1");
  r = run({"reproduce-table", "--table", "2", "--row", "golden"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1.6180339887498948"), std::string::npos) << r.out;
}
