#include <gtest/gtest.h>

#include "multiplan/alns.hpp"
#include "ride_fixture.hpp"

using namespace mptest;

namespace {

std::size_t served(const RideSolution& s) {
  std::size_t n = 0;
  for (const auto& r : s.routes) {
    for (const auto& st : r.stops) n += st.kind == StopKind::pickup ? 1 : 0;
  }
  return n;
}

}  // namespace

TEST(RideModel, RetimeRespectsCapacityAndDeadline) {
  RideFixture f;
  f.vehicle(point(0, 0), 1);
  const int a = f.task(point(0, 0), point(1, 0), 0, 3600);
  const int b = f.task(point(0.5, 0), point(1.5, 0), 0, 3600);
  const auto m = f.model();
  RidepoolRoute r = f.routes[0];
  r.stops = {{a, StopKind::pickup, f.tasks[a].pickup}, {b, StopKind::pickup, f.tasks[b].pickup},
             {a, StopKind::dropoff, f.tasks[a].dropoff}, {b, StopKind::dropoff, f.tasks[b].dropoff}};
  EXPECT_FALSE(m.retime(r));  // two on board, capacity one
  r.stops = {{a, StopKind::pickup, f.tasks[a].pickup}, {a, StopKind::dropoff, f.tasks[a].dropoff},
             {b, StopKind::pickup, f.tasks[b].pickup}, {b, StopKind::dropoff, f.tasks[b].dropoff}};
  EXPECT_TRUE(m.retime(r));
  f.tasks[b].deadline = r.stops[3].service - 1;
  EXPECT_FALSE(f.model().retime(r));
}

TEST(RideModel, PickupWaitsForReadyTime) {
  RideFixture f;
  f.vehicle(point(0, 0));
  const int a = f.task(point(0, 0), point(1, 0), 600, 7200);
  RidepoolRoute r = f.routes[0];
  r.stops = {{a, StopKind::pickup, f.tasks[a].pickup}, {a, StopKind::dropoff, f.tasks[a].dropoff}};
  ASSERT_TRUE(f.model().retime(r));
  EXPECT_EQ(r.stops[0].service, 600);
  EXPECT_EQ(r.stops[1].service, 600 + f.model().travel(f.world.vehicle(0), point(0, 0), point(1, 0)));
}

TEST(Solvers, EmptyPoolReturnsIncumbent) {
  RideFixture f;
  f.vehicle(point(0, 0));
  const int a = f.task(point(0, 0), point(1, 0), 0, 3600);
  const auto m = f.model();
  GreedyAppendSolver g;
  auto seeded = g.solve(m, f.routes, std::vector<int>{a}).routes;
  AlnsSolver alns(AlnsParams{});
  ExhaustiveSolver ex;
  for (RidepoolSolver* s : std::initializer_list<RidepoolSolver*>{&g, &alns, &ex}) {
    const auto out = s->solve(m, seeded, {});
    ASSERT_EQ(out.routes.size(), 1u);
    ASSERT_EQ(out.routes[0].stops.size(), seeded[0].stops.size());
    for (std::size_t i = 0; i < seeded[0].stops.size(); ++i) {
      EXPECT_EQ(out.routes[0].stops[i].task, seeded[0].stops[i].task);
      EXPECT_EQ(out.routes[0].stops[i].service, seeded[0].stops[i].service);
    }
    EXPECT_TRUE(out.unserved.empty());
  }
}

TEST(Solvers, EmptyFleetServesNobody) {
  RideFixture f;
  const int a = f.task(point(0, 0), point(1, 0), 0, 3600);
  AlnsSolver alns(AlnsParams{});
  const auto out = alns.solve(f.model(), {}, std::vector<int>{a});
  EXPECT_TRUE(out.routes.empty());
  EXPECT_EQ(out.unserved, std::vector<int>{a});
}

TEST(Solvers, CompatibleRequestsArePooled) {
  RideFixture f;
  f.vehicle(point(0, 0), 4);
  const int a = f.task(point(0.2, 0), point(3, 0), 0, 3600);
  const int b = f.task(point(0.5, 0), point(2.5, 0), 0, 3600);
  for (bool exact : {false, true}) {
    AlnsSolver alns(AlnsParams{});
    ExhaustiveSolver ex;
    RidepoolSolver& s = exact ? static_cast<RidepoolSolver&>(ex) : alns;
    const auto out = s.solve(f.model(), f.routes, std::vector<int>{a, b});
    EXPECT_TRUE(out.unserved.empty());
    EXPECT_EQ(served(out), 2u);
    // Both on board at once somewhere along the route.
    int load = 0, peak = 0;
    for (const auto& st : out.routes[0].stops) {
      load += st.kind == StopKind::pickup ? 1 : -1;
      peak = std::max(peak, load);
    }
    EXPECT_EQ(peak, 2);
  }
}

TEST(Solvers, UnitCapacityServesOneOfTwoOverlapping) {
  RideFixture f;
  f.vehicle(point(0, 0), 1);
  // Same trip, tight windows: the second cannot wait for the first to finish.
  const Seconds ride = f.world.network.travel(Mode::ridepool, 30.0, point(0, 0), point(4, 0));
  const int a = f.task(point(0, 0), point(4, 0), 0, ride + 60);
  const int b = f.task(point(0, 0), point(4, 0), 0, ride + 60);
  ExhaustiveSolver ex;
  AlnsSolver alns(AlnsParams{});
  for (RidepoolSolver* s : std::initializer_list<RidepoolSolver*>{&ex, &alns}) {
    const auto out = s->solve(f.model(), f.routes, std::vector<int>{a, b});
    EXPECT_EQ(out.unserved.size(), 1u);
    EXPECT_EQ(served(out), 1u);
  }
}

TEST(Solvers, EnRouteInsertionBeatsAppending) {
  RideFixture f;
  f.vehicle(point(0, 0), 4);
  const int a = f.task(point(0, 0), point(4, 0), 0, 7200);
  const int b = f.task(point(1, 0), point(2, 0), 0, 7200);
  const auto m = f.model();
  GreedyAppendSolver g;
  const auto first = g.solve(m, f.routes, std::vector<int>{a});
  const auto greedy = g.solve(m, first.routes, std::vector<int>{b});
  AlnsSolver alns(AlnsParams{});
  const auto better = alns.solve(m, first.routes, std::vector<int>{b});
  EXPECT_GT(better.objective, greedy.objective + 1e-6);
  // Both keep the planned passenger's order.
  EXPECT_EQ(greedy.routes[0].stops.front().task, a);
}

TEST(Solvers, PlannedDropoffsNeverMoveLater) {
  // Insert requests one at a time; each committed dropoff becomes a promise.
  RideFixture f;
  f.vehicle(point(0, 0), 3);
  f.vehicle(point(4, 3), 3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0, 5), uy(0, 4);
  auto routes = f.routes;
  std::map<int, Seconds> promised;
  AlnsSolver alns(AlnsParams{});
  for (int k = 0; k < 12; ++k) {
    const Seconds ready = 300 * k;
    const int t = f.task(point(ux(rng), uy(rng)), point(ux(rng), uy(rng)), ready, ready + 3600);
    alns.reseed(static_cast<std::uint64_t>(k));
    const auto out = alns.solve(f.model(), routes, std::vector<int>{t});
    const auto m = f.model();
    for (const auto& r : out.routes) {
      for (const auto& [id, when] : promised) {
        if (auto d = m.dropoff_time(r, id)) {
          EXPECT_LE(*d, when) << "task " << id;
        }
      }
    }
    routes = out.routes;
    for (const auto& r : routes) {
      if (auto d = m.dropoff_time(r, t)) {
        promised[t] = *d;
        f.tasks[t].deadline = *d;
      }
    }
  }
  EXPECT_GT(promised.size(), 3u);
}

TEST(AdvanceRoute, FreezesStopsUnderWay) {
  RideFixture f;
  f.vehicle(point(0, 0), 4);
  const int a = f.task(point(1, 0), point(3, 0), 0, 7200);
  ExhaustiveSolver ex;
  auto routes = ex.solve(f.model(), f.routes, std::vector<int>{a}).routes;
  const Seconds pickup = routes[0].stops[0].service;
  std::vector<RouteStop> history;
  auto r = routes[0];
  // Still driving to the pickup: the pickup is frozen, the dropoff is not.
  advance_route(r, pickup - 1, f.model(), f.tasks, history);
  ASSERT_EQ(history.size(), 1u);
  EXPECT_EQ(f.tasks[a].picked_up_at, pickup);
  EXPECT_EQ(r.anchor_load, 1);
  EXPECT_EQ(r.stops.size(), 1u);
  EXPECT_EQ(r.onboard, std::vector<int>{a});
  // The frozen pickup still counts towards the route value.
  EXPECT_NEAR(f.model().route_value(r), f.model().route_value(routes[0]), 1e-12);
}

TEST(AdvanceRoute, LeavingThePickupFreezesTheDropoff) {
  RideFixture f;
  f.vehicle(point(0, 0), 4);
  const int a = f.task(point(1, 0), point(3, 0), 0, 7200);
  ExhaustiveSolver ex;
  auto r = ex.solve(f.model(), f.routes, std::vector<int>{a}).routes[0];
  const Seconds pickup = r.stops[0].service;
  std::vector<RouteStop> history;
  advance_route(r, pickup + 1, f.model(), f.tasks, history);
  EXPECT_EQ(history.size(), 2u);
  EXPECT_TRUE(r.stops.empty());
  EXPECT_EQ(r.anchor_load, 0);
}
