#include "multiplan/reference.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <type_traits>

#include "multiplan/csv.hpp"
#include "multiplan/world.hpp"

namespace multiplan {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// What a decision leaves behind for later requests.
std::string effect_key(const Candidate& c) {
  std::string key;
  for (const auto& leg : c.plan.legs) {
    if (!is_micromobility(leg.mode)) continue;
    key += 'm' + std::to_string(leg.vehicle) + ':' + std::to_string(leg.to.id) + ':' +
           std::to_string(leg.arrive) + ';';
  }
  if (c.routes) {
    for (const auto& r : *c.routes) {
      key += 'r' + std::to_string(r.vehicle);
      for (const auto& s : r.stops) {
        key += ',' + std::to_string(s.task) + (s.kind == StopKind::pickup ? 'p' : 'd') +
               std::to_string(s.service);
      }
      key += ';';
    }
  }
  return key;
}

struct StaticSearch {
  const World& world;
  std::vector<Request> order;
  ExhaustiveSolver solver;
  std::optional<RollingPlanner> planner;
  long budget = 0;
  long nodes = 0;
  bool out_of_budget = false;
  std::optional<double> best;

  void dfs(std::size_t k, const SolutionState& state) {
    if (out_of_budget) return;
    if (++nodes > budget) {
      out_of_budget = true;
      return;
    }
    if (k == order.size()) {
      if (!best || state.welfare > *best) best = state.welfare;
      return;
    }
    const Request& r = order[k];
    planner->reset(state);
    planner->advance_to(r.earliest);
    const SolutionState advanced = planner->state();
    auto cands = planner->candidates(r);
    if (cands.empty()) {
      SolutionState next = advanced;
      next.unservable[r.id] = r;
      dfs(k + 1, next);
      return;
    }
    std::map<std::string, std::size_t> best_by_effect;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      // Candidates come sorted best first, so the first per effect wins.
      if (best_by_effect.emplace(effect_key(cands[i]), i).second) keep.push_back(i);
    }
    for (std::size_t i : keep) {
      planner->reset(advanced);
      planner->commit(r, cands[i]);
      const SolutionState next = planner->state();
      dfs(k + 1, next);
      if (out_of_budget) return;
    }
  }
};

}  // namespace

std::optional<std::string> oracle_size_problem(const World& world, std::size_t requests,
                                               const OracleBounds& bounds) {
  const auto check = [](const char* what, std::size_t have, std::size_t limit)
      -> std::optional<std::string> {
    if (have <= limit) return std::nullopt;
    return std::string(what) + " " + std::to_string(have) + " > " + std::to_string(limit);
  };
  if (auto p = check("requests", requests, bounds.requests)) return p;
  if (auto p = check("bikes", world.fleet_of(Mode::shared_bike).size(), bounds.bikes)) return p;
  if (auto p = check("scooters", world.fleet_of(Mode::shared_scooter).size(), bounds.scooters)) {
    return p;
  }
  return check("ride vehicles", world.fleet_of(Mode::ridepool).size(), bounds.ride_vehicles);
}

RunResult rolling_oracle(const World& world, std::span<const Request> requests,
                         const OracleBounds& bounds) {
  if (auto p = oracle_size_problem(world, requests.size(), bounds)) {
    throw OracleSizeError("instance too large for the exact oracle: " + *p);
  }
  RunOptions o;
  o.solver = SolverKind::exhaustive;
  PlannerOptions p = PlannerOptions::from(world.scenario);
  p.search = ConnectionSearch::exhaustive(world.scenario.planner);
  o.planner = p;
  return run_planner(world, requests, o);
}

StaticOracleResult static_oracle(const World& world, std::span<const Request> requests,
                                 long node_budget, const OracleBounds& bounds) {
  if (auto p = oracle_size_problem(world, requests.size(), bounds)) {
    throw OracleSizeError("instance too large for the exact oracle: " + *p);
  }
  StaticSearch s{world, arrival_order(requests), {}, std::nullopt, node_budget, 0, false, {}};
  PlannerOptions p = PlannerOptions::from(world.scenario);
  p.search = ConnectionSearch::exhaustive(world.scenario.planner);
  p.keep_all_combinations = true;
  s.planner.emplace(world, s.solver, p);
  s.dfs(0, initial_state(world));
  StaticOracleResult out;
  out.nodes = s.nodes;
  if (!s.out_of_budget) out.welfare = s.best;
  return out;
}

namespace {

void add_curve(std::vector<CurvePoint>& out, std::uint64_t seed, const std::string& method,
               const RunResult& r) {
  double cost = 0.0;
  std::size_t step = 0;
  for (const auto& ev : r.events) {
    if (auto it = r.state.plans.find(ev.request); it != r.state.plans.end()) {
      cost += plan_metrics(it->second).money;
    }
    out.push_back({seed, ++step, ev.request, method, ev.welfare_after, cost});
  }
}

}  // namespace

CompareReport compare_methods(const Scenario& scenario, std::span<const std::uint64_t> seeds,
                              const CompareOptions& options) {
  CompareReport report;
  for (const std::uint64_t seed : seeds) {
    const World world = build_world(scenario, seed);
    const auto requests = scenario_requests(world);
    CompareRow row;
    row.seed = seed;
    row.bikes = world.fleet_of(Mode::shared_bike).size();
    row.scooters = world.fleet_of(Mode::shared_scooter).size();
    row.ride_vehicles = world.fleet_of(Mode::ridepool).size();
    row.requests = requests.size();

    auto timed = [](auto&& fn, double& seconds) {
      const auto t0 = std::chrono::steady_clock::now();
      auto r = fn();
      seconds = seconds_since(t0);
      return r;
    };
    auto heuristic = [&](SolverKind kind) {
      RunOptions o;
      o.solver = kind;
      return run_planner(world, requests, o);
    };
    const RunResult h = timed([&] { return heuristic(SolverKind::alns); }, row.cpu_heuristic);
    const RunResult g = timed([&] { return heuristic(SolverKind::greedy); }, row.cpu_greedy);
    row.served_heuristic = h.summary.served;
    row.welfare_heuristic = h.summary.welfare;
    row.served_greedy = g.summary.served;
    row.welfare_greedy = g.summary.welfare;
    add_curve(report.curves, seed, "heuristic", h);
    add_curve(report.curves, seed, "greedy", g);

    if (options.oracle || options.static_oracle) {
      if (auto problem = oracle_size_problem(world, requests.size(), options.bounds)) {
        row.oracle_note = "skipped: " + *problem;
      } else {
        if (options.oracle) {
          const RunResult o = timed([&] { return rolling_oracle(world, requests, options.bounds); },
                                    row.cpu_oracle);
          row.served_oracle = o.summary.served;
          row.welfare_oracle = o.summary.welfare;
          add_curve(report.curves, seed, "oracle", o);
        }
        if (options.static_oracle) {
          const auto res = static_oracle(world, requests, options.node_budget, options.bounds);
          row.welfare_static = res.welfare;
          if (!res.welfare) row.oracle_note = "static: node budget exhausted";
        }
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string format_compare_table(std::span<const CompareRow> rows, bool with_cpu) {
  std::ostringstream out;
  out << "seed,bikes,scooters,ride,requests,served_oracle,served_heuristic,served_greedy,"
         "welfare_oracle,welfare_heuristic,welfare_greedy,welfare_static,note";
  if (with_cpu) out << ",cpu_oracle,cpu_heuristic,cpu_greedy";
  out << '\n';
  auto opt = [](const auto& v) -> std::string {
    if (!v) return "";
    if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, double>) {
      return format_double(*v);
    } else {
      return std::to_string(*v);
    }
  };
  auto cpu = [](double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    out << r.seed << ',' << r.bikes << ',' << r.scooters << ',' << r.ride_vehicles << ','
        << r.requests << ',' << opt(r.served_oracle) << ',' << r.served_heuristic << ','
        << r.served_greedy << ',' << opt(r.welfare_oracle) << ','
        << format_double(r.welfare_heuristic) << ',' << format_double(r.welfare_greedy) << ','
        << opt(r.welfare_static) << ',' << csv_escape(r.oracle_note);
    if (with_cpu) {
      out << ',' << (r.served_oracle ? cpu(r.cpu_oracle) : "") << ',' << cpu(r.cpu_heuristic)
          << ',' << cpu(r.cpu_greedy);
    }
    out << '\n';
  }
  return out.str();
}

std::string format_curves(std::span<const CurvePoint> curves) {
  std::ostringstream out;
  out << "seed,step,request,method,welfare,cost\n";
  for (const auto& c : curves) {
    out << c.seed << ',' << c.step << ',' << c.request << ',' << c.method << ','
        << format_double(c.welfare) << ',' << format_double(c.cost) << '\n';
  }
  return out.str();
}

}  // namespace multiplan
