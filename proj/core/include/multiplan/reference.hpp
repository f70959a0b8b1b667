#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <vector>

#include "multiplan/run.hpp"

namespace multiplan {

struct OracleBounds {
  std::size_t requests = 5;
  std::size_t bikes = 5;
  std::size_t scooters = 5;
  std::size_t ride_vehicles = 2;
};

struct OracleSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Empty when the instance is small enough for exhaustive search; otherwise
// says which bound is exceeded.
std::optional<std::string> oracle_size_problem(const World& world, std::size_t requests,
                                               const OracleBounds& bounds = {});

// Rolling decisions with every PT connection and trip kept and exact
// ride-pool insertion: the best each single step can possibly do. Both oracles
// throw OracleSizeError outside the bounds.
RunResult rolling_oracle(const World& world, std::span<const Request> requests,
                         const OracleBounds& bounds = {});

struct StaticOracleResult {
  std::optional<double> welfare;  // empty when the node budget ran out
  long nodes = 0;
};

// Joint search over the decisions of all requests (in arrival order) for the
// largest final welfare. Alternatives with identical effect on shared
// vehicles are collapsed to the best one.
StaticOracleResult static_oracle(const World& world, std::span<const Request> requests,
                                 long node_budget, const OracleBounds& bounds = {});

struct CompareOptions {
  bool oracle = false;         // rolling exact column, when within bounds
  bool static_oracle = false;  // joint search column, when within bounds
  long node_budget = 200'000;
  OracleBounds bounds;
};

// One instance: heuristic and greedy always, the exact columns when asked
// for and feasible.
struct CompareRow {
  std::uint64_t seed = 0;
  std::size_t bikes = 0;
  std::size_t scooters = 0;
  std::size_t ride_vehicles = 0;
  std::size_t requests = 0;
  std::size_t served_heuristic = 0;
  std::size_t served_greedy = 0;
  double welfare_heuristic = 0.0;
  double welfare_greedy = 0.0;
  double cpu_heuristic = 0.0;
  double cpu_greedy = 0.0;
  std::optional<std::size_t> served_oracle;
  std::optional<double> welfare_oracle;
  double cpu_oracle = 0.0;
  std::optional<double> welfare_static;
  std::string oracle_note;  // why an exact column is missing
};

// Cumulative welfare and money after each request, per method.
struct CurvePoint {
  std::uint64_t seed = 0;
  std::size_t step = 0;  // 1-based request count
  RequestId request = 0;
  std::string method;
  double welfare = 0.0;
  double cost = 0.0;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  std::vector<CurvePoint> curves;
};

CompareReport compare_methods(const Scenario& scenario, std::span<const std::uint64_t> seeds,
                              const CompareOptions& options = {});

// CPU seconds are the only columns that differ between identical runs, so
// they are optional.
std::string format_compare_table(std::span<const CompareRow> rows, bool with_cpu = false);
std::string format_curves(std::span<const CurvePoint> curves);

}  // namespace multiplan
