#pragma once

#include <optional>
#include <vector>

#include "multiplan/ridepool.hpp"
#include "multiplan/state.hpp"

namespace multiplan {

struct PtRide {
  std::size_t trip = 0;
  std::size_t board = 0;   // index into the trip's stop_times
  std::size_t alight = 0;
};

// One or two PT rides; a transfer happens at a single stop.
struct PtConnection {
  std::vector<PtRide> rides;
  std::size_t board_stop = 0;
  std::size_t alight_stop = 0;
  Seconds board_time = 0;
  Seconds alight_time = 0;
  double fare = 0.0;
  double estimate = 0.0;  // walk-access/egress utility used for ranking
};

struct ConnectionSearch {
  double radius_km = 2.0;
  int beam = 5;  // 0 keeps every connection
  int max_transfers = 1;
  bool all_trips = true;  // false: only the first useful trip per route direction
  bool rank_by_utility = true;

  static ConnectionSearch from(const PlannerConfig& c);
  static ConnectionSearch exhaustive(const PlannerConfig& c);
};

// Candidate PT connections between stops near the origin and near the
// destination that fit the request window from decision time t.
std::vector<PtConnection> find_pt_connections(const World& world, const Request& request,
                                              Seconds t, const ConnectionSearch& search);

std::vector<TripLeg> pt_legs(const World& world, const PtConnection& c);

struct SubRequest {
  Location from;
  Location to;
  Seconds earliest = 0;
  Seconds latest = 0;
  bool needed = true;  // false when origin/destination coincide with the stop
};

struct Segments {
  SubRequest access;
  SubRequest egress;
};

Segments segment_request(const World& world, const Request& request, const PtConnection& c,
                         Seconds t);

// A fully timed alternative and what committing it changes.
struct Candidate {
  TripPlan plan;
  double score = 0.0;         // own utility plus the utility change of pooled passengers
  double others_delta = 0.0;
  std::optional<std::vector<RidepoolRoute>> routes;  // new ride-pool schedule, if any
  std::vector<RideTask> new_tasks;
};

// Better candidate first: higher score, then the fixed mode order.
bool candidate_before(const Candidate& a, const Candidate& b);

struct IntegratedOptions {
  ConnectionSearch search;
  bool keep_all = false;  // return every combination instead of only the best per connection
};

// PT-based alternatives (access x PT x egress) for the request at time t.
std::vector<Candidate> plan_integrated(const World& world, const SolutionState& state,
                                       const Request& request, Seconds t,
                                       RidepoolSolver& solver, const IntegratedOptions& options);

RideTask make_access_task(const World& world, const Request& r, const SubRequest& s,
                          Seconds board_time);
RideTask make_egress_task(const World& world, const Request& r, const SubRequest& s);

// Ride legs for newly inserted tasks, read off a timed schedule.
TripLeg ride_leg(const World& world, const RideModel& model,
                 const std::vector<RidepoolRoute>& routes, const RideTask& task);

}  // namespace multiplan
