// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "multiplan/alns.hpp"
#include "multiplan/csv.hpp"
#include "multiplan/demand.hpp"
#include "multiplan/feasibility.hpp"
#include "multiplan/reference.hpp"
#include "multiplan/report.hpp"
#include "multiplan/sweep.hpp"
#include "ride_fixture.hpp"
#include "utility_golden.hpp"

using namespace mptest;

namespace {

// Tolerances and sizes fixed by the acceptance criteria.
constexpr double kOracleGap = 0.02;
constexpr double kOracleSeconds = 60.0;
constexpr double kHeuristicSeconds = 5.0;
constexpr int kSmallInstances = 20;
constexpr int kGreedyScenarios = 20;
constexpr int kFuzzSeeds = 100;
constexpr int kTrendSeeds = 20;
constexpr double kSignificance = 0.05;
constexpr double kGoldenTol = 1e-9;
constexpr int kBruteFixtures = 50;
constexpr std::size_t kSamples = 10'000;
constexpr double kSampleTol = 0.05;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Scenario scenario_file(const char* name) { return load_scenario(data_dir() / "scenarios" / name); }

RunResult timed_run(const World& w, std::span<const Request> req, SolverKind kind, double& secs) {
  RunOptions o;
  o.solver = kind;
  const auto t0 = std::chrono::steady_clock::now();
  auto r = run_planner(w, req, o);
  secs = seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------

Outcome small_instances_vs_exact() {
  const Scenario s = scenario_file("small_oracle.yaml");
  Outcome out;
  int in_bounds = 0;
  double worst_gap = 0.0, worst_oracle_s = 0.0, worst_heur_s = 0.0;
  for (std::uint64_t seed = 1; seed <= kSmallInstances; ++seed) {
    const World w = build_world(s, seed);
    const auto req = scenario_requests(w);
    const bool small = req.size() <= 5 && w.fleet_of(Mode::shared_bike).size() <= 5 &&
                       w.fleet_of(Mode::shared_scooter).size() <= 5 &&
                       w.fleet_of(Mode::ridepool).size() <= 2;
    if (!small) {
      out.pass = false;
      out.detail += fmt(" seed %llu out of bounds;", static_cast<unsigned long long>(seed));
      continue;
    }
    ++in_bounds;
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult exact = rolling_oracle(w, req);
    const double oracle_s = seconds_since(t0);
    double heur_s = 0.0;
    const RunResult h = timed_run(w, req, SolverKind::alns, heur_s);
    const double wo = exact.summary.welfare, wh = h.summary.welfare;
    const double gap = (wo - wh) / std::max(std::abs(wo), 1e-12);
    worst_gap = std::max(worst_gap, gap);
    worst_oracle_s = std::max(worst_oracle_s, oracle_s);
    worst_heur_s = std::max(worst_heur_s, heur_s);
    if (wh > wo + 1e-9 || gap > kOracleGap || oracle_s >= kOracleSeconds ||
        heur_s >= kHeuristicSeconds || !exact.violations.empty() || !h.violations.empty()) {
      out.pass = false;
      out.detail += fmt(" seed %llu: oracle %.6f heuristic %.6f (%.3fs/%.3fs);",
                        static_cast<unsigned long long>(seed), wo, wh, oracle_s, heur_s);
    }
  }
  if (in_bounds < kSmallInstances) out.pass = false;
  out.detail = fmt("%d instances, worst gap %.4f%%, slowest oracle %.2fs, slowest heuristic %.3fs",
                   in_bounds, 100.0 * worst_gap, worst_oracle_s, worst_heur_s) +
               out.detail;
  return out;
}

Outcome heuristic_vs_greedy() {
  const Scenario s = scenario_file("greedy_compare.yaml");
  Outcome out;
  double gap_sum = 0.0;
  int worse = 0, better = 0;
  for (std::uint64_t seed = 1; seed <= kGreedyScenarios; ++seed) {
    const World w = build_world(s, seed);
    const auto req = scenario_requests(w);
    const std::size_t fleet = w.fleet_of(Mode::shared_bike).size() +
                              w.fleet_of(Mode::shared_scooter).size() +
                              w.fleet_of(Mode::ridepool).size();
    if (req.size() != 50 || fleet != 20) {
      out.pass = false;
      out.detail += fmt(" seed %llu has %zu requests / %zu vehicles;",
                        static_cast<unsigned long long>(seed), req.size(), fleet);
    }
    double th = 0.0, tg = 0.0;
    const auto h = timed_run(w, req, SolverKind::alns, th);
    const auto g = timed_run(w, req, SolverKind::greedy, tg);
    const double gap = h.summary.welfare - g.summary.welfare;
    gap_sum += gap;
    if (gap < -1e-9) {
      ++worse;
      out.detail += fmt(" seed %llu worse by %.6f;", static_cast<unsigned long long>(seed), -gap);
    }
    if (gap > 1e-9) ++better;
  }
  const double mean = gap_sum / kGreedyScenarios;
  out.pass = out.pass && worse == 0 && mean > 0.0;
  out.detail = fmt("%d scenarios, mean welfare gain %.5f, better in %d, worse in %d",
                   kGreedyScenarios, mean, better, worse) +
               out.detail;
  return out;
}

Outcome full_day_fuzz() {
  const Scenario s = scenario_file("default.yaml");
  Outcome out;
  std::size_t violations = 0, requests = 0;
  for (std::uint64_t seed = 1; seed <= kFuzzSeeds; ++seed) {
    const World w = build_world(s, seed);
    const auto req = scenario_requests(w);
    RunOptions o;
    o.check_steps = true;
    const auto r = run_planner(w, req, o);
    const auto again = check_state(w, r.state, req);
    std::size_t chaining = 0;
    for (const auto& [id, p] : r.state.plans) chaining += validate_plan_chaining(p).size();
    const std::size_t n = r.violations.size() + again.size() + chaining;
    requests += req.size();
    if (n > 0) {
      violations += n;
      Violation first{"chaining", "", "plan legs do not chain"};
      if (!r.violations.empty()) first = r.violations.front();
      else if (!again.empty()) first = again.front();
      out.detail += fmt(" seed %llu: %zu (%s %s);", static_cast<unsigned long long>(seed), n,
                        first.family.c_str(), first.message.c_str());
    }
  }
  out.pass = violations == 0;
  out.detail = fmt("%d seeds, %zu requests, %zu violations", kFuzzSeeds, requests, violations) +
               out.detail;
  return out;
}

// --- trends ----------------------------------------------------------------

std::set<Mode> modes_of(const TripPlan& p) {
  std::set<Mode> m;
  for (const auto& l : p.legs) {
    if (l.mode != Mode::walk) m.insert(l.mode);
  }
  return m;
}

struct Shares {
  double pt_scooter = 0.0;
  double pt_ride = 0.0;
  double travel_min = 0.0;
  std::map<std::string, double> scooter_only;  // per profile
};

Shares shares_of(const World& w) {
  const auto req = scenario_requests(w);
  const auto r = run_planner(w, req);
  Shares s;
  std::map<std::string, std::pair<int, int>> per_profile;  // scooter-only, served
  int served = 0;
  double travel = 0.0;
  for (const auto& [id, p] : r.state.plans) {
    const auto m = modes_of(p);
    ++served;
    if (m.contains(Mode::pt) && m.contains(Mode::shared_scooter)) s.pt_scooter += 1;
    if (m.contains(Mode::pt) && m.contains(Mode::ridepool)) s.pt_ride += 1;
    // Door to door, with an initial ride-pool wait counted from the earliest departure.
    const Seconds start =
        p.legs.front().mode == Mode::ridepool ? p.request.earliest : p.legs.front().depart;
    travel += static_cast<double>(p.legs.back().arrive - start) / 60.0;
    auto& pp = per_profile[p.request.profile];
    ++pp.second;
    if (m == std::set<Mode>{Mode::shared_scooter}) ++pp.first;
  }
  if (served > 0) {
    s.pt_scooter /= served;
    s.pt_ride /= served;
    s.travel_min = travel / served;
  }
  for (const auto& [prof, c] : per_profile) {
    s.scooter_only[prof] = c.second > 0 ? static_cast<double>(c.first) / c.second : 0.0;
  }
  return s;
}

double share(const Shares& s, const std::string& profile) {
  auto it = s.scooter_only.find(profile);
  return it == s.scooter_only.end() ? 0.0 : it->second;
}

// One-sided sign test: P(X >= wins) for X ~ Bin(n, 1/2), ties dropped.
double sign_test(int wins, int losses) {
  const int n = wins + losses;
  if (n == 0) return 1.0;
  double p = 0.0;
  for (int k = wins; k <= n; ++k) {
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                  n * std::log(2.0));
  }
  return p;
}

struct Trend {
  std::string name;
  int wins = 0, losses = 0;
  double p() const { return sign_test(wins, losses); }
  void add(double expected_higher, double expected_lower) {
    if (expected_higher > expected_lower + 1e-12) ++wins;
    else if (expected_lower > expected_higher + 1e-12) ++losses;
  }
};

Outcome behavioural_trends() {
  const Scenario base = scenario_file("car_free.yaml");
  auto with = [&](std::vector<Override> o) { return with_overrides(base, o); };
  const Scenario cheap = with({{"fleet.scooters.count", "30"}, {"fleet.scooters.cost_fixed", "1"}});
  const Scenario dear = with({{"fleet.scooters.count", "30"}, {"fleet.scooters.cost_fixed", "8"}});
  const Scenario none = with({{"fleet.scooters.count", "0"}});
  const Scenario many = with({{"fleet.scooters.count", "50"}});
  const Scenario ages = with({{"fleet.scooters.count", "50"},
                              {"demand.profile_mix", "{age_65_plus: 0.5, age_35_minus: 0.5}"}});
  for (const Scenario* s : {&cheap, &dear, &none, &many}) {
    if (s->demand.profile_mix != std::map<std::string, double>{{"aggregated", 1.0}}) {
      return {false, "trend scenarios must use the aggregated profile"};
    }
  }
  Trend a{"cost 1->8 lowers PT+scooter"}, b{"scooters 0->50 lower PT+ride-pool"},
      c{"scooters lower travel time"}, d{"65+ ride scooters alone less than 35-"};
  for (std::uint64_t seed = 1; seed <= kTrendSeeds; ++seed) {
    const Shares s_cheap = shares_of(build_world(cheap, seed));
    const Shares s_dear = shares_of(build_world(dear, seed));
    const Shares s_none = shares_of(build_world(none, seed));
    const Shares s_many = shares_of(build_world(many, seed));
    const Shares s_ages = shares_of(build_world(ages, seed));
    a.add(s_cheap.pt_scooter, s_dear.pt_scooter);
    b.add(s_none.pt_ride, s_many.pt_ride);
    c.add(s_none.travel_min, s_many.travel_min);
    d.add(share(s_ages, "age_35_minus"), share(s_ages, "age_65_plus"));
  }
  Outcome out;
  out.detail = fmt("%d seeds;", kTrendSeeds);
  for (const Trend* t : {&a, &b, &c, &d}) {
    const bool ok = t->p() < kSignificance;
    out.pass = out.pass && ok;
    out.detail += fmt(" %s: %d/%d p=%.2g%s;", t->name.c_str(), t->wins, t->wins + t->losses,
                      t->p(), ok ? "" : " (not significant)");
  }
  return out;
}

Outcome golden_utilities() {
  Outcome out;
  const auto cases = golden::cases();
  const ProfileTable table = ProfileTable::builtin();
  double worst = 0.0;
  for (const auto& c : cases) {
    const TripPlan p = golden::build(c);
    const double u = plan_utility(table.get(c.profile), p);
    const double err = std::abs(u - c.expected);
    worst = std::max(worst, err);
    if (!(err <= kGoldenTol)) {
      out.pass = false;
      out.detail += fmt(" %s: %.12f vs %.12f;", c.name.c_str(), u, c.expected);
    }
  }
  if (cases.size() < 12) out.pass = false;
  out.detail = fmt("%zu cases, max error %.2e", cases.size(), worst) + out.detail;
  return out;
}

// --- determinism -----------------------------------------------------------

int cli(const std::string& args) {
  const std::string cmd = std::string(MULTIPLAN_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool same_files(const std::filesystem::path& a, const std::filesystem::path& b,
                std::initializer_list<const char*> names, std::string& why) {
  for (const char* f : names) {
    if (!std::filesystem::exists(a / f) || read_text_file(a / f) != read_text_file(b / f)) {
      why += fmt(" %s differs;", f);
      return false;
    }
  }
  return true;
}

Outcome determinism() {
  Outcome out;
  const auto dir = scratch_dir("acceptance_det");
  const auto scen = (data_dir() / "scenarios" / "default.yaml").string();
  const auto grid = (data_dir() / "grids" / "smoke.yaml").string();
  int bad_exit = 0;
  for (const char* sub : {"run1", "run2"}) {
    bad_exit += cli("run --scenario \"" + scen + "\" --seed 7 --out \"" + (dir / sub).string() + "\"") != 0;
  }
  for (const auto& [sub, jobs] : {std::pair{"sweep1", "1"}, std::pair{"sweep3", "3"}}) {
    bad_exit += cli("sweep --scenario \"" + scen + "\" --grid \"" + grid + "\" --jobs " + jobs +
                    " --out \"" + (dir / sub).string() + "\"") != 0;
  }
  const bool runs = same_files(dir / "run1", dir / "run2",
                               {"events.csv", "plans.csv", "requests.csv", "summary.txt",
                                "feasibility.txt"},
                               out.detail);
  const bool sweeps = same_files(dir / "sweep1", dir / "sweep3", {"sweep.csv"}, out.detail);

  // In-process repeat with the library, against the CLI output.
  const Scenario s = load_scenario(scen);
  const World w = build_world(s, 7);
  write_run_outputs(dir / "lib", w, run_planner(w, scenario_requests(w)));
  const bool lib = same_files(dir / "run1", dir / "lib", {"plans.csv", "events.csv"}, out.detail);

  out.pass = bad_exit == 0 && runs && sweeps && lib;
  out.detail = fmt("two processes %s, --jobs 1 vs 3 %s, library vs CLI %s%s", runs ? "identical" : "differ",
                   sweeps ? "identical" : "differ", lib ? "identical" : "differ",
                   bad_exit ? ", nonzero exit" : "") +
               out.detail;
  return out;
}

// --- brute force ride-pool ---------------------------------------------------

struct BruteTask {
  double px, py, dx, dy;
  Seconds ready, deadline;
  int load;
  double direct_km;
};

// Straight-line times scaled by the ride-pool detour, rounded up to seconds.
Seconds drive(double x0, double y0, double x1, double y1, double detour, double speed) {
  const double km = std::hypot(x1 - x0, y1 - y0) * detour;
  return static_cast<Seconds>(std::ceil(km / speed * 3600.0 - 1e-7));
}

double brute_force(const std::vector<BruteTask>& tasks, double depot_x, double depot_y,
                   Seconds start, int capacity, double detour, double speed, double fixed,
                   double per_min, double per_km, double b_time, double b_cost, double penalty) {
  const int n = static_cast<int>(tasks.size());
  double best = -penalty * n;  // nobody served
  // Sequences of events: +k pickup of task k, -(k+1) dropoff.
  std::vector<int> seq;
  std::vector<int> state(n, 0);  // 0 waiting, 1 on board, 2 delivered
  std::function<void(double, double, Seconds, int, double, std::vector<Seconds>&)> go;
  go = [&](double x, double y, Seconds t, int load, double value, std::vector<Seconds>& pick) {
    int waiting_on_board = 0, delivered = 0;
    for (int k = 0; k < n; ++k) {
      waiting_on_board += state[k] == 1;
      delivered += state[k] == 2;
    }
    if (waiting_on_board == 0) best = std::max(best, value - penalty * (n - delivered));
    for (int k = 0; k < n; ++k) {
      const auto& tk = tasks[k];
      if (state[k] == 0) {
        if (load + tk.load > capacity) continue;
        const Seconds arrive = t + drive(x, y, tk.px, tk.py, detour, speed);
        const Seconds service = std::max(arrive, tk.ready);
        state[k] = 1;
        pick[k] = service;
        go(tk.px, tk.py, service, load + tk.load, value, pick);
        state[k] = 0;
      } else if (state[k] == 1) {
        const Seconds arrive = t + drive(x, y, tk.dx, tk.dy, detour, speed);
        if (arrive > tk.deadline) continue;
        const double ride = static_cast<double>(arrive - pick[k]) / 60.0;
        const double wait = static_cast<double>(pick[k] - tk.ready) / 60.0;
        const double v = b_time * (wait + ride) + b_cost * (fixed + per_min * ride + per_km * tk.direct_km);
        state[k] = 2;
        go(tk.dx, tk.dy, arrive, load - tk.load, value + v, pick);
        state[k] = 1;
      }
    }
  };
  std::vector<Seconds> pick(n, 0);
  go(depot_x, depot_y, start, 0, 0.0, pick);
  return best;
}

Outcome alns_vs_brute_force() {
  Outcome out;
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> ux(0.0, 5.0), uy(0.0, 4.0), slack(1.1, 2.5);
  std::uniform_int_distribution<int> ntasks(1, 3), cap(1, 3), ready(0, 1800), load(1, 2);
  int matched = 0, served_total = 0;
  double worst = 0.0;
  for (int f = 0; f < kBruteFixtures; ++f) {
    RideFixture fx;
    const Location depot = point(ux(rng), uy(rng));
    const int capacity = cap(rng);
    fx.vehicle(depot, capacity, 0);
    const auto& v = fx.world.vehicle(0);
    const double detour = fx.world.network.spec(Mode::ridepool).detour;
    std::vector<BruteTask> bt;
    std::vector<int> pool;
    const int n = ntasks(rng);
    for (int k = 0; k < n; ++k) {
      const Location a = point(ux(rng), uy(rng)), b = point(ux(rng), uy(rng));
      const Seconds r = ready(rng);
      const Seconds direct = drive(a.x_km, a.y_km, b.x_km, b.y_km, detour, v.speed_kmh);
      const Seconds deadline = r + static_cast<Seconds>(direct * slack(rng)) + 300;
      const int l = std::min(load(rng), capacity);
      const int id = fx.task(a, b, r, deadline, l);
      bt.push_back({a.x_km, a.y_km, b.x_km, b.y_km, r, deadline, l,
                    std::hypot(b.x_km - a.x_km, b.y_km - a.y_km) * detour});
      pool.push_back(id);
    }
    const double penalty = fx.world.scenario.alns.unserved_penalty;
    const double exact = brute_force(bt, depot.x_km, depot.y_km, 0, capacity, detour, v.speed_kmh,
                                     v.cost_fixed, v.cost_per_min, v.cost_per_km, -0.039, -0.425,
                                     penalty);
    AlnsParams p;
    p.iterations = 3000;
    p.max_idle = 0;
    p.seed = static_cast<std::uint64_t>(f + 1);
    AlnsSolver solver(p);
    const auto sol = solver.solve(fx.model(), fx.routes, pool);
    const double diff = std::abs(sol.objective - exact);
    worst = std::max(worst, diff);
    served_total += n - static_cast<int>(sol.unserved.size());
    if (diff <= 1e-6) {
      ++matched;
    } else {
      out.detail += fmt(" fixture %d: alns %.6f exact %.6f;", f, sol.objective, exact);
    }
  }
  out.pass = matched == kBruteFixtures;
  out.detail = fmt("%d/%d fixtures optimal (%d tasks served), worst difference %.2e", matched,
                   kBruteFixtures, served_total, worst) +
               out.detail;
  return out;
}

// --- sampling ----------------------------------------------------------------

Outcome demand_sampling() {
  Outcome out;
  DemandSpec spec;
  spec.lambda_peak = spec.lambda_offpeak = 120.0;
  spec.peak_windows.clear();
  spec.horizon = {0, 100 * 3600};
  std::vector<double> gaps;
  for (std::uint64_t seed = 1; gaps.size() < kSamples; ++seed) {
    double prev = static_cast<double>(spec.horizon.start);
    for (double t : sample_arrivals(spec, seed)) {
      gaps.push_back(t - prev);
      prev = t;
      if (gaps.size() == kSamples) break;
    }
  }
  const double mean_gap = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
  const double expect_gap = 3600.0 / spec.lambda_peak;
  const bool gap_ok = std::abs(mean_gap - expect_gap) <= kSampleTol * expect_gap;

  spec.gamma_shape = 2.0;
  spec.gamma_scale_km = 0.5;
  const std::vector<Location> grid{{0, 2.5, 2.0, LocationKind::grid_cell}};
  const std::vector<Location> stations{{1, 2.5, 2.0, LocationKind::pt_stop}};
  std::vector<double> radii;
  for (std::uint64_t seed = 1; radii.size() < kSamples; ++seed) {
    const auto g = generate_requests(spec, grid, stations, seed);
    for (double r : g.radius_km) {
      radii.push_back(r);
      if (radii.size() == kSamples) break;
    }
  }
  const double mean_r = std::accumulate(radii.begin(), radii.end(), 0.0) / static_cast<double>(radii.size());
  const double expect_r = spec.gamma_shape * spec.gamma_scale_km;
  const bool r_ok = std::abs(mean_r - expect_r) <= kSampleTol * expect_r;
  out.pass = gap_ok && r_ok;
  out.detail = fmt("inter-arrival mean %.2fs vs %.2fs, radius mean %.4f km vs %.4f km over %zu samples",
                   mean_gap, expect_gap, mean_r, expect_r, kSamples);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, small_instances_vs_exact}, {2, heuristic_vs_greedy}, {3, full_day_fuzz},
      {4, behavioural_trends},       {5, golden_utilities},    {6, determinism},
      {7, alns_vs_brute_force},      {8, demand_sampling}};
  int failed = 0;
  for (const auto& [n, fn] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
              << fmt("  [%.1fs]", seconds_since(t0)) << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
