#include "multiplan/run.hpp"

#include "multiplan/alns.hpp"
#include "multiplan/csv.hpp"
#include "multiplan/demand.hpp"

namespace multiplan {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::alns: return "alns";
    case SolverKind::greedy: return "greedy";
    case SolverKind::exhaustive: return "exhaustive";
  }
  return "?";
}

std::optional<SolverKind> parse_solver_kind(std::string_view text) {
  for (SolverKind k : {SolverKind::alns, SolverKind::greedy, SolverKind::exhaustive}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::unique_ptr<RidepoolSolver> make_solver(SolverKind kind, const World& world) {
  switch (kind) {
    case SolverKind::greedy: return std::make_unique<GreedyAppendSolver>();
    case SolverKind::exhaustive: return std::make_unique<ExhaustiveSolver>();
    case SolverKind::alns: break;
  }
  return std::make_unique<AlnsSolver>(
      AlnsParams::from(world.scenario.alns, derive_seed(world.seed, "alns")));
}

std::vector<Request> scenario_requests(const World& world) {
  const Scenario& s = world.scenario;
  std::vector<Request> requests;
  if (s.demand.requests_file) {
    requests = parse_requests(read_text_file(s.resolve(*s.demand.requests_file)));
  } else {
    std::vector<Location> stations;
    for (const auto& stop : world.timetable.stops()) stations.push_back(stop.location);
    requests = generate_requests(DemandSpec::from(s), world.grid, stations,
                                 derive_seed(world.seed, "demand"))
                   .requests;
    requests = assign_profiles(std::move(requests), s.demand.profile_mix,
                               derive_seed(world.seed, "profiles"));
  }
  requests = arrival_order(requests);
  if (s.demand.max_requests && requests.size() > static_cast<std::size_t>(*s.demand.max_requests)) {
    requests.resize(static_cast<std::size_t>(*s.demand.max_requests));
  }
  return requests;
}

RunResult run_planner(const World& world, std::span<const Request> requests,
                      const RunOptions& options) {
  auto solver = make_solver(options.solver, world);
  RollingPlanner planner(world, *solver, options.planner.value_or(PlannerOptions::from(world.scenario)));
  RunResult result;
  result.requests.assign(requests.begin(), requests.end());
  if (options.check_steps) {
    planner.set_observer([&](const Request& r, const SolutionState& before, const SolutionState& after) {
      for (auto& v : check_transition(before, after, r.id)) result.violations.push_back(std::move(v));
    });
  }
  planner.run(requests);
  result.state = planner.state();
  result.events = planner.events();
  result.summary = summarize(result.state, requests);
  for (auto& v : check_state(world, result.state, requests)) result.violations.push_back(std::move(v));
  result.warnings = horizon_warnings(world, result.state);
  return result;
}

}  // namespace multiplan
