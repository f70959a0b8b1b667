#include <benchmark/benchmark.h>

#include <random>

#include "multiplan/alns.hpp"
#include "multiplan/state.hpp"
#include "multiplan/world.hpp"

namespace mp = multiplan;

namespace {

struct Pool {
  mp::World world;
  std::map<int, mp::RideTask> tasks;
  std::vector<mp::RidepoolRoute> routes;
  std::vector<int> ids;

  Pool(int vehicles, int n) {
    mp::Scenario s = mp::default_scenario();
    s.fleet.bikes.count = s.fleet.scooters.count = s.fleet.ridepool.count = 0;
    world = mp::build_world(s);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ux(0, 5), uy(0, 4);
    mp::LocationId next = 90'000'000;
    auto at = [&] { return mp::Location{next++, ux(rng), uy(rng), mp::LocationKind::free_point}; };
    for (int v = 0; v < vehicles; ++v) {
      mp::Vehicle veh;
      veh.id = static_cast<mp::VehicleId>(world.vehicles.size());
      veh.mode = mp::Mode::ridepool;
      veh.capacity = 4;
      veh.speed_kmh = 30;
      veh.cost_fixed = 2.0;
      veh.cost_per_km = 0.5;
      veh.depot = at();
      world.vehicles.push_back(veh);
      mp::RidepoolRoute r;
      r.vehicle = veh.id;
      r.anchor = *veh.depot;
      routes.push_back(r);
    }
    for (int k = 0; k < n; ++k) {
      mp::RideTask t;
      t.id = k + 1;
      t.request = t.id;
      t.pickup = at();
      t.dropoff = at();
      t.ready = 120 * k;
      t.deadline = t.ready + 2700;
      t.beta_sub_time = -0.039;
      t.beta_sub_cost = -0.425;
      t.direct_km = world.network.distance_km(mp::Mode::ridepool, t.pickup, t.dropoff);
      tasks[t.id] = t;
      ids.push_back(t.id);
    }
  }

  mp::RideModel model() const {
    return mp::RideModel(world.network, world.vehicles, mp::TaskView(&tasks, {}), 1000.0);
  }
};

void BM_AlnsSolve(benchmark::State& state) {
  const Pool pool(3, static_cast<int>(state.range(0)));
  const auto model = pool.model();
  mp::AlnsParams p;
  p.iterations = 1000;
  for (auto _ : state) {
    mp::AlnsSolver solver(p);
    benchmark::DoNotOptimize(solver.solve(model, pool.routes, pool.ids));
  }
}
BENCHMARK(BM_AlnsSolve)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GreedyAppend(benchmark::State& state) {
  const Pool pool(3, static_cast<int>(state.range(0)));
  const auto model = pool.model();
  for (auto _ : state) {
    mp::GreedyAppendSolver solver;
    benchmark::DoNotOptimize(solver.solve(model, pool.routes, pool.ids));
  }
}
BENCHMARK(BM_GreedyAppend)->Arg(4)->Arg(8)->Arg(16);

}  // namespace
