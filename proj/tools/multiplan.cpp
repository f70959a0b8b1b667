#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <vector>

#include "multiplan/csv.hpp"
#include "multiplan/reference.hpp"
#include "multiplan/report.hpp"
#include "multiplan/sweep.hpp"
#include "multiplan/world.hpp"

namespace mp = multiplan;

namespace {

void setup_logging() {
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("MULTIPLAN_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honour real ones.
    if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
  }
}

mp::Scenario scenario_from(const std::string& file) {
  return file.empty() ? mp::default_scenario() : mp::load_scenario(file);
}

mp::SolverKind solver_from(const std::string& name) {
  if (auto k = mp::parse_solver_kind(name)) return *k;
  throw mp::ConfigError("unknown solver '" + name + "' (alns, greedy, exhaustive)");
}

int cmd_run(const std::string& scenario_file, std::optional<std::uint64_t> seed,
            const std::string& out, const std::string& solver, bool oracle, bool check_steps) {
  const mp::Scenario s = scenario_from(scenario_file);
  const mp::World world = mp::build_world(s, seed.value_or(s.seed));
  const auto requests = mp::scenario_requests(world);
  spdlog::info("{}: {} requests, {} vehicles, seed {}", s.name, requests.size(),
               world.vehicles.size(), world.seed);
  mp::RunResult result;
  if (oracle) {
    result = mp::rolling_oracle(world, requests);
  } else {
    mp::RunOptions o;
    o.solver = solver_from(solver);
    o.check_steps = check_steps;
    result = mp::run_planner(world, requests, o);
  }
  mp::write_run_outputs(out, world, result);
  for (const auto& w : result.warnings) spdlog::warn("{}", w);
  for (const auto& v : result.violations) {
    spdlog::error("{} {}: {}", v.family, v.subject, v.message);
  }
  std::cout << "served " << result.summary.served << "/" << result.summary.requests
            << "  welfare " << mp::format_double(result.summary.welfare) << "  violations "
            << result.violations.size() << "\n";
  return result.violations.empty() ? 0 : 1;
}

int cmd_sweep(const std::string& scenario_file, const std::string& grid_file,
              const std::string& out, int jobs, const std::string& solver) {
  const mp::Scenario s = scenario_from(scenario_file);
  const mp::SweepGrid grid = mp::load_sweep_grid(grid_file);
  spdlog::info("sweep: {} variants x {} seeds on {} jobs", grid.variants.size(), grid.seeds.size(),
               jobs);
  const auto rows = mp::run_sweep(s, grid, jobs, solver_from(solver));
  mp::write_text_file(std::filesystem::path(out) / "sweep.csv", mp::format_sweep(rows));
  std::size_t bad = 0;
  for (const auto& r : rows) bad += r.violations;
  std::cout << rows.size() << " runs, " << bad << " violations\n";
  return bad == 0 ? 0 : 1;
}

int cmd_compare(const std::string& scenario_file, const std::vector<std::uint64_t>& seeds,
                const std::string& out, bool oracle, bool with_static, long budget) {
  const mp::Scenario s = scenario_from(scenario_file);
  mp::CompareOptions o;
  o.oracle = oracle;
  o.static_oracle = with_static;
  o.node_budget = budget;
  const std::vector<std::uint64_t> use = seeds.empty() ? std::vector{s.seed} : seeds;
  const auto report = mp::compare_methods(s, use, o);
  std::cout << mp::format_compare_table(report.rows, true);
  if (!out.empty()) {
    const std::filesystem::path dir(out);
    mp::write_text_file(dir / "compare.csv", mp::format_compare_table(report.rows));
    mp::write_text_file(dir / "timing.csv", mp::format_compare_table(report.rows, true));
    mp::write_text_file(dir / "curves.csv", mp::format_curves(report.curves));
  }
  return 0;
}

int cmd_validate(const std::string& dir, const std::string& scenario_file,
                 std::optional<std::uint64_t> seed) {
  std::optional<mp::World> world;
  if (!scenario_file.empty()) {
    const mp::Scenario s = mp::load_scenario(scenario_file);
    world = mp::build_world(s, seed.value_or(s.seed));
  }
  const auto problems = mp::validate_outputs(dir, world ? &*world : nullptr);
  for (const auto& p : problems) std::cout << p << "\n";
  std::cout << (problems.empty() ? "ok\n" : "invalid\n");
  return problems.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Rolling-horizon multimodal trip planner"};
  app.require_subcommand(1);

  std::string scenario, out, grid, solver = "alns", dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  bool oracle = false, check_steps = false, with_static = false;
  int jobs = 1;
  long budget = 200'000;

  auto* run = app.add_subcommand("run", "plan every request of one scenario instance");
  run->add_option("--scenario", scenario, "scenario YAML (default: built-in)");
  run->add_option("--seed", seed, "instance seed (default: scenario seed)");
  run->add_option("--out", out, "output directory")->required();
  run->add_option("--solver", solver, "ride-pool solver: alns, greedy, exhaustive");
  run->add_flag("--oracle", oracle, "exact rolling decisions instead of the heuristic");
  run->add_flag("--check-steps", check_steps, "verify every state transition");

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid over several seeds");
  sweep->add_option("--scenario", scenario, "base scenario YAML");
  sweep->add_option("--grid", grid, "sweep grid YAML")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "output directory")->required();
  sweep->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
  sweep->add_option("--solver", solver, "ride-pool solver");

  auto* compare = app.add_subcommand("compare", "exact vs heuristic vs greedy on one instance");
  compare->add_option("--scenario", scenario, "scenario YAML");
  compare->add_option("--seeds", seeds, "instance seeds (default: scenario seed)");
  compare->add_option("--out", out, "directory for compare.csv, timing.csv and curves.csv");
  compare->add_flag("--oracle", oracle, "add the exact rolling column where the instance is small");
  compare->add_flag("--static", with_static, "add the joint search column where the instance is small");
  compare->add_option("--node-budget", budget, "node limit for the joint search");

  auto* validate = app.add_subcommand("validate", "re-read and cross-check a run directory");
  validate->add_option("--dir", dir, "run output directory")->required()->check(CLI::ExistingDirectory);
  validate->add_option("--scenario", scenario, "scenario used, to recheck utilities");
  validate->add_option("--seed", seed, "instance seed");

  auto* synth = app.add_subcommand("synth-gtfs", "write the built-in PT network as GTFS");
  synth->add_option("--out", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(scenario, seed, out, solver, oracle, check_steps);
    if (*sweep) return cmd_sweep(scenario, grid, out, jobs, solver);
    if (*compare) return cmd_compare(scenario, seeds, out, oracle, with_static, budget);
    if (*validate) return cmd_validate(dir, scenario, seed);
    if (*synth) {
      mp::write_gtfs(mp::synthesize_timetable(), out);
      return 0;
    }
  } catch (const mp::OracleSizeError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const mp::ConfigError& e) {
    spdlog::error("configuration: {}", e.what());
    return 2;
  } catch (const mp::LoadError& e) {
    spdlog::error("input: {}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 3;
  }
  return 0;
}
