#include <gtest/gtest.h>

#include "multiplan/integrated.hpp"
#include "support.hpp"

using namespace mptest;

namespace {

// Metro A(0,0) - B(2,0) - C(4,0) every 10 minutes from 08:00, 4 minutes per
// hop; bus C(4,0) - D(4,3) every 10 minutes from 08:05, 6 minutes.
PTTimetable line_network() {
  std::vector<PtStop> stops;
  const std::vector<std::pair<double, double>> xy{{0, 0}, {2, 0}, {4, 0}, {4, 3}};
  for (std::size_t k = 0; k < xy.size(); ++k) {
    PtStop s;
    s.id = std::string(1, static_cast<char>('A' + k));
    s.name = s.id;
    s.location = {location_ids::kPtStop + static_cast<LocationId>(k), xy[k].first, xy[k].second,
                  LocationKind::pt_stop};
    stops.push_back(s);
  }
  std::vector<PtRoute> routes{{"M", 1, PtClass::metro}, {"B", 3, PtClass::bus_tram}};
  std::vector<PtTrip> trips;
  for (int k = 0; k < 6; ++k) {
    PtTrip t;
    t.id = "M" + std::to_string(k);
    t.route = 0;
    const Seconds d = hms(8, 10 * k);
    t.stop_times = {{0, d, d}, {1, d + 240, d + 240}, {2, d + 480, d + 480}};
    t.cum_km = {0, 2, 4};
    trips.push_back(t);
    PtTrip b;
    b.id = "B" + std::to_string(k);
    b.route = 1;
    const Seconds e = hms(8, 5 + 10 * k);
    b.stop_times = {{2, e, e}, {3, e + 360, e + 360}};
    b.cum_km = {0, 3};
    trips.push_back(b);
  }
  return PTTimetable(stops, routes, trips, FareRule{}, Projection{52.0, 4.4});
}

struct PtWorld {
  World world;
  SolutionState state;
  GreedyAppendSolver solver;
  PtWorld() : world(build_world(bare_scenario())) {
    world.timetable = line_network();
    state = initial_state(world);
  }
  const Location& stop(std::size_t k) const { return world.timetable.stops()[k].location; }
  std::vector<Candidate> plan(const Request& r, bool keep_all = false) {
    return plan_integrated(world, state, r, r.earliest, solver, {ConnectionSearch{}, keep_all});
  }
};

}  // namespace

TEST(Connections, NoneWithoutStationInRadius) {
  PtWorld w;
  const auto r = request(1, point(0, 3.5), point(3.7, 0), hms(8, 0), hms(9, 0));
  EXPECT_TRUE(find_pt_connections(w.world, r, r.earliest, ConnectionSearch{}).empty());
  EXPECT_TRUE(w.plan(r).empty());
}

TEST(Connections, RespectWindowRadiusAndOrder) {
  PtWorld w;
  const auto r = request(1, point(0.3, 0), point(3.7, 0.2), hms(8, 0), hms(9, 0));
  ConnectionSearch all;
  all.beam = 0;
  all.all_trips = true;
  const auto cs = find_pt_connections(w.world, r, r.earliest, all);
  ASSERT_FALSE(cs.empty());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& c = cs[i];
    EXPECT_LE(euclidean_km(r.origin, w.stop(c.board_stop)), all.radius_km + 1e-12);
    EXPECT_LE(euclidean_km(r.destination, w.stop(c.alight_stop)), all.radius_km + 1e-12);
    EXPECT_GE(c.board_time, r.earliest + w.world.walk_time(r, r.origin, w.stop(c.board_stop)));
    EXPECT_LE(c.alight_time, r.latest);
    if (i > 0) {
      EXPECT_GE(cs[i - 1].estimate, c.estimate - 1e-9);
    }
  }
  // The 08:00 departure is gone by the time the traveller reaches A.
  for (const auto& c : cs) EXPECT_GT(c.board_time, hms(8, 0));
  ConnectionSearch beam = all;
  beam.beam = 2;
  EXPECT_EQ(find_pt_connections(w.world, r, r.earliest, beam).size(), std::min<std::size_t>(2, cs.size()));
}

TEST(Connections, TransferHappensAtOneStopInOrder) {
  PtWorld w;
  const auto r = request(1, point(0.2, 0), point(4, 3.2), hms(8, 0), hms(9, 30));
  const auto cs = find_pt_connections(w.world, r, r.earliest, ConnectionSearch{});
  bool saw_transfer = false;
  for (const auto& c : cs) {
    if (c.rides.size() != 2) continue;
    saw_transfer = true;
    const auto legs = pt_legs(w.world, c);
    ASSERT_EQ(legs.size(), 2u);
    EXPECT_TRUE(same_place(legs[0].to, legs[1].from));
    EXPECT_GE(legs[1].depart, legs[0].arrive);
    EXPECT_NEAR(c.fare, legs[0].money_cost + legs[1].money_cost, 1e-12);
  }
  EXPECT_TRUE(saw_transfer);
  ConnectionSearch direct;
  direct.max_transfers = 0;
  for (const auto& c : find_pt_connections(w.world, r, r.earliest, direct)) {
    EXPECT_EQ(c.rides.size(), 1u);
  }
}

TEST(Segments, SubRequestWindowsFollowTheConnection) {
  PtWorld w;
  const auto r = request(1, point(0.3, 0), point(3.7, 0.2), hms(8, 0), hms(9, 0));
  const auto cs = find_pt_connections(w.world, r, r.earliest, ConnectionSearch{});
  ASSERT_FALSE(cs.empty());
  const auto seg = segment_request(w.world, r, cs[0], hms(8, 2));
  EXPECT_EQ(seg.access.earliest, hms(8, 2));
  EXPECT_EQ(seg.access.latest, cs[0].board_time);
  EXPECT_EQ(seg.egress.earliest, cs[0].alight_time);
  EXPECT_EQ(seg.egress.latest, r.latest);
  EXPECT_TRUE(seg.access.needed);
  EXPECT_TRUE(seg.egress.needed);
}

TEST(Segments, OriginAtStopNeedsNoAccess) {
  PtWorld w;
  const auto r = request(1, w.stop(0), point(3.7, 0.2), hms(8, 0), hms(9, 0));
  const auto cs = find_pt_connections(w.world, r, r.earliest, ConnectionSearch{});
  ASSERT_FALSE(cs.empty());
  const auto seg = segment_request(w.world, r, cs[0], r.earliest);
  EXPECT_FALSE(seg.access.needed);
  const auto cands = w.plan(r);
  ASSERT_FALSE(cands.empty());
  EXPECT_EQ(cands[0].plan.legs.front().mode, Mode::pt);
}

TEST(Integrated, WalkPtWalkWithoutFleets) {
  PtWorld w;
  const auto r = request(1, point(0.3, 0), point(3.7, 0.2), hms(8, 0), hms(9, 0));
  const auto cs = find_pt_connections(w.world, r, r.earliest, ConnectionSearch{});
  const auto cands = w.plan(r);
  ASSERT_EQ(cands.size(), cs.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& p = cands[i].plan;
    EXPECT_EQ(p.kind, AlternativeKind::pt_walk);
    EXPECT_TRUE(p.transferred);
    EXPECT_TRUE(validate_plan_chaining(p).empty());
    ASSERT_EQ(p.legs.size(), 3u);
    EXPECT_EQ(p.legs[0].mode, Mode::walk);
    EXPECT_EQ(p.legs[0].arrive, cs[i].board_time);  // walk to arrive just in time
    EXPECT_EQ(p.legs[2].depart, cs[i].alight_time);
    // Same legs as the walk-based ranking estimate.
    EXPECT_NEAR(p.utility, cs[i].estimate, 1e-9);
    EXPECT_FALSE(cands[i].routes);
  }
}

TEST(Integrated, BestPerConnectionIsTheMaximum) {
  PtWorld w;
  add_micro(w.world, Mode::shared_scooter, point(3.9, 0.1), Docking::free_floating);
  add_micro(w.world, Mode::shared_scooter, point(0.05, 0), Docking::free_floating);
  w.state = initial_state(w.world);
  const auto r = request(1, point(0.8, 0.5), point(3.5, 1.6), hms(8, 0), hms(9, 0));
  const auto best = w.plan(r);
  const auto all = w.plan(r, true);
  ASSERT_FALSE(best.empty());
  bool saw_scooter = false;
  for (const auto& c : all) {
    saw_scooter = saw_scooter || c.plan.kind == AlternativeKind::pt_micromobility;
    EXPECT_TRUE(validate_plan_chaining(c.plan).empty());
  }
  EXPECT_TRUE(saw_scooter);
  double top = -1e18;
  for (const auto& c : all) top = std::max(top, c.score);
  double best_top = -1e18;
  for (const auto& c : best) best_top = std::max(best_top, c.score);
  EXPECT_NEAR(best_top, top, 1e-12);
}

TEST(Integrated, SameScooterNotUsedTwice) {
  PtWorld w;
  add_micro(w.world, Mode::shared_scooter, point(0.5, 0.5), Docking::free_floating);
  w.state = initial_state(w.world);
  const auto r = request(1, point(0.6, 0.6), point(3.5, 1.5), hms(8, 0), hms(9, 0));
  for (const auto& c : w.plan(r, true)) {
    int rides = 0;
    for (const auto& leg : c.plan.legs) rides += leg.mode == Mode::shared_scooter ? 1 : 0;
    EXPECT_LE(rides, 1);
  }
}

TEST(Integrated, RidePoolAccessIsOffered) {
  PtWorld w;
  add_ride(w.world, point(0.5, 0.5));
  w.state = initial_state(w.world);
  const auto r = request(1, point(1.0, 1.2), point(3.8, 0.3), hms(8, 0), hms(9, 0));
  bool saw_ride = false;
  for (const auto& c : w.plan(r, true)) {
    if (c.plan.kind != AlternativeKind::pt_ridepool) continue;
    saw_ride = true;
    ASSERT_TRUE(c.routes);
    EXPECT_FALSE(c.new_tasks.empty());
    EXPECT_TRUE(validate_plan_chaining(c.plan).empty());
    EXPECT_NEAR(c.others_delta, 0.0, 1e-12);  // nobody else on board
  }
  EXPECT_TRUE(saw_ride);
}
