#include <gtest/gtest.h>

#include <algorithm>

#include <random>

#include "multiplan/utility.hpp"
#include "support.hpp"
#include "utility_golden.hpp"

using namespace mptest;

TEST(LegCost, Examples) {
  EXPECT_DOUBLE_EQ(leg_cost(1.0, 0.0, 0.0, 0.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(leg_cost(1.0, 0.2, 0.0, 10.0, 0.0), 3.0);
  Vehicle walk;
  EXPECT_DOUBLE_EQ(leg_cost(walk, 12.0, 1.0), 0.0);
  Vehicle ride;
  ride.cost_fixed = 2.0;
  ride.cost_per_km = 0.5;
  EXPECT_DOUBLE_EQ(leg_cost(ride, 9.0, 4.0), 4.0);
}

TEST(PlanUtility, GoldenTable) {
  const auto table = ProfileTable::builtin();
  for (const auto& c : golden::cases()) {
    SCOPED_TRACE(c.name);
    const TripPlan p = golden::build(c);
    EXPECT_NEAR(plan_utility(table.get(c.profile), p), c.expected, 1e-9);
  }
}

TEST(PlanUtility, DegenerateWalkIsTheConstant) {
  golden::Case c{"zero walk", "aggregated", 0, {{Mode::walk, 0, 0}}, 0.007};
  EXPECT_NEAR(plan_utility(ProfileTable::builtin().get("aggregated"), golden::build(c)), 0.007,
              1e-12);
}

TEST(PlanUtility, EmptyPlanIsAnError) {
  TripPlan p;
  EXPECT_THROW(plan_utility(ProfileTable::builtin().get("aggregated"), p), std::invalid_argument);
}

TEST(PlanUtility, MoreExpensiveLegNeverHelpsAggregated) {
  const auto& agg = ProfileTable::builtin().get("aggregated");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (const auto& c : golden::cases()) {
    TripPlan p = golden::build(c);
    for (std::size_t i = 0; i < p.legs.size(); ++i) {
      const double before = plan_utility(agg, p);
      p.legs[i].money_cost += u(rng);
      EXPECT_LE(plan_utility(agg, p), before + 1e-12);
    }
  }
}

TEST(PlanUtility, SplittingAWalkLegIsNeutral) {
  const auto& agg = ProfileTable::builtin().get("aggregated");
  golden::Case one{"", "aggregated", 0, {{Mode::walk, 0, 14}}, 0};
  golden::Case two{"", "aggregated", 0, {{Mode::walk, 0, 5.5}, {Mode::walk, 5.5, 14}}, 0};
  EXPECT_NEAR(plan_utility(agg, golden::build(one)), plan_utility(agg, golden::build(two)), 1e-9);
}

TEST(PlanUtility, SharedSubModeChargedOncePerMode) {
  const auto& p = ProfileTable::builtin().get("aggregated");
  golden::Case twice{"", "aggregated", 0,
                     {{Mode::shared_scooter, 0, 5, 1},
                      {Mode::pt, 6, 16, 1.5, PtClass::metro},
                      {Mode::shared_scooter, 16, 20, 1}},
                     0};
  golden::Case mixed = twice;
  mixed.legs[2].mode = Mode::shared_bike;
  // Same times and costs: only the sub-mode constant count differs.
  EXPECT_NEAR(plan_utility(p, golden::build(mixed)) - plan_utility(p, golden::build(twice)),
              p.asc_sub_mode, 1e-12);
}

TEST(PlanUtility, ArgmaxInvariantUnderShift) {
  const auto table = ProfileTable::builtin();
  std::vector<double> u;
  for (const auto& c : golden::cases()) {
    if (c.profile == "aggregated") u.push_back(plan_utility(table.get(c.profile), golden::build(c)));
  }
  const auto best = std::ranges::max_element(u) - u.begin();
  for (double& x : u) x += 17.25;
  EXPECT_EQ(std::ranges::max_element(u) - u.begin(), best);
}

TEST(MainModeAsc, Mapping) {
  const auto& p = ProfileTable::builtin().get("aggregated");
  EXPECT_EQ(main_mode_asc(p, Mode::walk, PtClass::none), p.asc_walk);
  EXPECT_EQ(main_mode_asc(p, Mode::pt, PtClass::metro), p.asc_metro);
  EXPECT_EQ(main_mode_asc(p, Mode::pt, PtClass::bus_tram), p.asc_bus_tram);
  EXPECT_EQ(main_mode_asc(p, Mode::shared_bike, PtClass::none), p.asc_shared_bike);
  EXPECT_EQ(main_mode_asc(p, Mode::shared_scooter, PtClass::none), p.asc_shared_scooter);
  EXPECT_EQ(main_mode_asc(p, Mode::private_bike, PtClass::none), p.asc_private_bike);
  EXPECT_EQ(main_mode_asc(p, Mode::private_car, PtClass::none), 0.0);
}

TEST(SocialWelfare, SumOfPlans) {
  const World w = build_world(bare_scenario());
  SolutionState s = initial_state(w);
  EXPECT_EQ(social_welfare(w, s), 0.0);
  const auto cases = golden::cases();
  TripPlan a = golden::build(cases[1]);
  score_plan(w, a);
  s.plans[1] = a;
  EXPECT_NEAR(social_welfare(w, s), -2.092, 1e-9);
  TripPlan b = golden::build(cases[0]);
  b.request.id = 2;
  score_plan(w, b);
  s.plans[2] = b;
  EXPECT_NEAR(social_welfare(w, s), -2.092 - 0.633, 1e-9);
}
