#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multiplan/feasibility.hpp"
#include "multiplan/planner.hpp"

namespace multiplan {

enum class SolverKind : std::uint8_t { alns, greedy, exhaustive };

std::string_view to_string(SolverKind kind);
std::optional<SolverKind> parse_solver_kind(std::string_view text);

std::unique_ptr<RidepoolSolver> make_solver(SolverKind kind, const World& world);

// Sampled (or replayed) requests for the world's seed, with profiles assigned.
std::vector<Request> scenario_requests(const World& world);

struct RunOptions {
  SolverKind solver = SolverKind::alns;
  std::optional<PlannerOptions> planner;  // default: from the scenario
  bool check_steps = false;               // verify every state transition
};

struct RunResult {
  std::vector<Request> requests;
  SolutionState state;
  std::vector<EventRecord> events;
  RunSummary summary;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
};

RunResult run_planner(const World& world, std::span<const Request> requests,
                      const RunOptions& options = {});

}  // namespace multiplan
