#include <gtest/gtest.h>

#include "multiplan/reference.hpp"
#include "support.hpp"

using namespace mptest;

namespace {

Scenario small() { return load_scenario(data_dir() / "scenarios" / "small_oracle.yaml"); }

}  // namespace

TEST(Oracle, RefusesLargeInstances) {
  Scenario s = small();
  s.fleet.scooters.count = 6;
  const World w = build_world(s, 1);
  const auto req = scenario_requests(w);
  EXPECT_TRUE(oracle_size_problem(w, req.size()).has_value());
  EXPECT_THROW(rolling_oracle(w, req), OracleSizeError);
  EXPECT_THROW(static_oracle(w, req, 10), OracleSizeError);
  EXPECT_FALSE(oracle_size_problem(w, req.size(), OracleBounds{5, 5, 6, 2}).has_value());
}

TEST(Oracle, OrderedAgainstHeuristics) {
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  CompareOptions o;
  o.oracle = true;
  const auto report = compare_methods(small(), seeds, o);
  ASSERT_EQ(report.rows.size(), seeds.size());
  for (const auto& r : report.rows) {
    ASSERT_TRUE(r.welfare_oracle) << r.seed;
    EXPECT_GE(*r.welfare_oracle, r.welfare_heuristic - 1e-9) << r.seed;
    EXPECT_EQ(*r.served_oracle, r.requests);
  }
}

TEST(Oracle, StaticSearchOnATinyInstance) {
  Scenario s = small();
  s.demand.max_requests = 2;
  s.fleet.bikes.count = 1;
  s.fleet.scooters.count = 1;
  s.fleet.ridepool.count = 1;
  const World w = build_world(s, 1);
  const auto req = scenario_requests(w);
  const auto st = static_oracle(w, req, 2'000'000);
  ASSERT_TRUE(st.welfare);
  EXPECT_GE(*st.welfare, rolling_oracle(w, req).summary.welfare - 1e-9);
  EXPECT_FALSE(static_oracle(w, req, 1).welfare);
}

TEST(Compare, CurvesEndAtTheTotals) {
  const std::vector<std::uint64_t> seeds{2};
  CompareOptions o;
  o.oracle = true;
  const auto report = compare_methods(small(), seeds, o);
  const auto& row = report.rows.at(0);
  std::map<std::string, const CurvePoint*> last;
  std::map<std::string, std::size_t> count;
  for (const auto& c : report.curves) {
    last[c.method] = &c;
    ++count[c.method];
  }
  ASSERT_EQ(last.size(), 3u);
  EXPECT_DOUBLE_EQ(last["heuristic"]->welfare, row.welfare_heuristic);
  EXPECT_DOUBLE_EQ(last["greedy"]->welfare, row.welfare_greedy);
  EXPECT_DOUBLE_EQ(last["oracle"]->welfare, *row.welfare_oracle);
  for (const auto& [m, n] : count) EXPECT_EQ(n, row.requests) << m;
  EXPECT_NE(format_curves(report.curves).find("seed,step,request,method,welfare,cost"),
            std::string::npos);
}

TEST(Compare, LargeInstanceIsSkippedNotFatal) {
  Scenario s = small();
  s.demand.max_requests = 8;
  const std::vector<std::uint64_t> seeds{1};
  CompareOptions o;
  o.oracle = true;
  const auto report = compare_methods(s, seeds, o);
  const auto& row = report.rows.at(0);
  ASSERT_GT(row.requests, 5u);
  EXPECT_FALSE(row.welfare_oracle);
  EXPECT_EQ(row.oracle_note.rfind("skipped:", 0), 0u);
  const auto table = format_compare_table(report.rows);
  EXPECT_NE(table.find("skipped: requests"), std::string::npos);
  EXPECT_EQ(table.find("cpu_"), std::string::npos);
  EXPECT_NE(format_compare_table(report.rows, true).find("cpu_heuristic"), std::string::npos);
}
