#include <gtest/gtest.h>

#include "multiplan/reference.hpp"
#include "multiplan/run.hpp"
#include "multiplan/unimodal.hpp"
#include "support.hpp"

using namespace mptest;

namespace {

Scenario small_default(int requests, std::uint64_t seed = 3) {
  Scenario s = default_scenario();
  s.seed = seed;
  s.demand.lambda_peak = 40;
  s.demand.lambda_offpeak = 20;
  s.demand.max_requests = requests;
  return s;
}

}  // namespace

TEST(Planner, NoRequestsNoWelfare) {
  const World w = build_world(default_scenario());
  const auto r = run_planner(w, std::vector<Request>{});
  EXPECT_EQ(r.summary.served, 0u);
  EXPECT_EQ(r.state.welfare, 0.0);
  EXPECT_TRUE(r.events.empty());
  EXPECT_TRUE(r.violations.empty());
}

TEST(Planner, SameSeedSameResult) {
  const World w = build_world(small_default(25));
  const auto req = scenario_requests(w);
  const auto a = run_planner(w, req);
  const auto b = run_planner(w, req);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_EQ(a.events[i].modes, b.events[i].modes);
    EXPECT_EQ(a.events[i].welfare_after, b.events[i].welfare_after);
  }
}

TEST(Planner, EmptyFleetsGivePtWalkOrPrivate) {
  Scenario s = small_default(20);
  s.fleet.bikes.count = s.fleet.scooters.count = s.fleet.ridepool.count = 0;
  const World w = build_world(s);
  const auto r = run_planner(w, scenario_requests(w));
  for (const auto& [id, plan] : r.state.plans) {
    EXPECT_TRUE(plan.kind == AlternativeKind::pt_walk ||
                plan.kind == AlternativeKind::private_or_walk)
        << id;
  }
  EXPECT_TRUE(r.violations.empty());
}

TEST(Planner, FallsBackToPrivateWithoutPt) {
  Scenario s = bare_scenario();
  s.private_modes.owned = {Mode::walk, Mode::private_car};
  World w = build_world(s);
  w.timetable = PTTimetable();
  const std::vector<Request> req{request(1, point(0.5, 0.5), point(4.5, 3.5), hms(8, 0), hms(9, 0))};
  const auto r = run_planner(w, req);
  ASSERT_EQ(r.state.plans.size(), 1u);
  const auto& plan = r.state.plans.at(1);
  EXPECT_EQ(plan.kind, AlternativeKind::private_or_walk);
  EXPECT_NEAR(plan.utility, private_fallback(w, req[0])->utility, 1e-12);
}

TEST(Planner, UnservableWhenNothingFits) {
  World w = build_world(bare_scenario());
  w.timetable = PTTimetable();
  const std::vector<Request> req{request(1, point(0, 0), point(5, 4), hms(8, 0), hms(8, 20))};
  const auto r = run_planner(w, req);
  EXPECT_EQ(r.summary.unservable, 1u);
  EXPECT_EQ(r.summary.served, 0u);
  EXPECT_TRUE(r.violations.empty());
}

TEST(Planner, SingleRequestMatchesExactSearch) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Scenario s = small_default(1, seed);
    s.fleet.bikes.count = 1;
    s.fleet.scooters.count = 1;
    s.fleet.ridepool.count = 0;
    const World w = build_world(s);
    const auto req = scenario_requests(w);
    const auto h = run_planner(w, req);
    const auto o = rolling_oracle(w, req);
    EXPECT_NEAR(h.summary.welfare, o.summary.welfare, 1e-9) << seed;
  }
}

TEST(Planner, EveryStepIsAValidTransition) {
  const World w = build_world(small_default(40));
  const auto req = scenario_requests(w);
  SolutionState last = initial_state(w);
  int steps = 0;
  GreedyAppendSolver solver;
  RollingPlanner p(w, solver, PlannerOptions::from(w.scenario));
  p.set_observer([&](const Request& r, const SolutionState& before, const SolutionState& after) {
    ++steps;
    EXPECT_TRUE(check_transition(before, after, r.id).empty()) << r.id;
    // Decisions are final: every earlier plan keeps its mode sequence.
    for (const auto& [id, plan] : before.plans) {
      ASSERT_TRUE(after.plans.contains(id));
      EXPECT_EQ(mode_signature(after.plans.at(id)), mode_signature(plan));
    }
    EXPECT_EQ(after.plans.size() + after.unservable.size(),
              before.plans.size() + before.unservable.size() + 1);
    last = after;
  });
  p.run(req);
  EXPECT_EQ(steps, static_cast<int>(req.size()));
  EXPECT_NEAR(last.welfare, social_welfare(w, last), 1e-9);
  EXPECT_TRUE(check_state(w, last, req).empty());
}

TEST(Planner, BusyVehiclesAreActiveReservations) {
  const World w = build_world(small_default(30));
  const auto req = scenario_requests(w);
  GreedyAppendSolver solver;
  RollingPlanner p(w, solver, PlannerOptions::from(w.scenario));
  for (const auto& r : arrival_order(req)) {
    p.step(r);
    const auto& st = p.state();
    std::size_t active = 0;
    for (const auto& [id, m] : st.micro) {
      if (!m.busy) continue;
      bool found = false;
      for (const auto& res : st.reservations) {
        found = found || (res.vehicle == id && res.end == m.busy_until && res.start <= st.clock);
      }
      EXPECT_TRUE(found) << id;
      ++active;
    }
    EXPECT_EQ(active, st.busy_micro());
  }
}

TEST(Planner, RequestsMustArriveInOrder) {
  const World w = build_world(bare_scenario());
  GreedyAppendSolver solver;
  RollingPlanner p(w, solver, PlannerOptions::from(w.scenario));
  p.advance_to(hms(9, 0));
  EXPECT_THROW(p.advance_to(hms(8, 0)), std::invalid_argument);
}

TEST(Summary, SharesAddUp) {
  const World w = build_world(small_default(40));
  const auto r = run_planner(w, scenario_requests(w));
  double kinds = 0.0;
  for (std::size_t k = 0; k < kAlternativeKindCount; ++k) {
    kinds += r.summary.all.kind_share(static_cast<AlternativeKind>(k));
  }
  EXPECT_NEAR(kinds, 1.0, 1e-12);
  double sigs = 0.0;
  for (const auto& [sig, n] : r.summary.all.signatures) sigs += r.summary.all.signature_share(sig);
  EXPECT_NEAR(sigs, 1.0, 1e-12);
  EXPECT_EQ(r.summary.served + r.summary.unservable, r.summary.requests);
  EXPECT_NEAR(r.summary.welfare, r.state.welfare, 0.0);
}

TEST(Summary, ScooterOnlyShare) {
  World w = build_world(bare_scenario());
  w.timetable = PTTimetable();
  add_micro(w, Mode::shared_scooter, point(0, 0), Docking::free_floating);
  add_micro(w, Mode::shared_scooter, point(2, 2), Docking::free_floating);
  const std::vector<Request> req{request(1, point(0, 0), point(4, 0), hms(8, 0), hms(8, 45)),
                                 request(2, point(2, 2), point(4.5, 3.5), hms(8, 5), hms(8, 50))};
  const auto r = run_planner(w, req);
  ASSERT_EQ(r.summary.served, 2u);
  EXPECT_DOUBLE_EQ(r.summary.all.kind_share(AlternativeKind::micromobility_only), 1.0);
  EXPECT_DOUBLE_EQ(r.summary.all.signature_share("shared_scooter"), 1.0);
  EXPECT_EQ(r.summary.busy_micro_peak, 2u);
  double money = 0.0;
  for (const auto& [id, plan] : r.state.plans) money += plan_metrics(plan).money;
  EXPECT_NEAR(r.summary.mean_money, money / 2.0, 1e-12);
}

TEST(Metrics, InitialRideWaitCountsAsTravel) {
  TripPlan p;
  p.request = request(1, point(0, 0), point(1, 0), hms(8, 0), hms(9, 0));
  TripLeg ride;
  ride.mode = Mode::ridepool;
  ride.depart = hms(8, 6);
  ride.arrive = hms(8, 16);
  ride.money_cost = 2.5;
  p.legs = {ride};
  const auto m = plan_metrics(p);
  EXPECT_DOUBLE_EQ(m.ride_wait_min, 6.0);
  EXPECT_DOUBLE_EQ(m.wait_min, 6.0);
  EXPECT_DOUBLE_EQ(m.travel_min, 16.0);
  EXPECT_DOUBLE_EQ(m.ridepool_min, 10.0);
  EXPECT_DOUBLE_EQ(m.money, 2.5);
  EXPECT_EQ(mode_signature(p), "ridepool");
}
