#pragma once

#include <map>
#include <string>
#include <vector>

#include "multiplan/ridepool.hpp"
#include "multiplan/types.hpp"
#include "multiplan/world.hpp"

namespace multiplan {

struct MicroStatus {
  bool busy = false;
  Seconds busy_until = 0;  // t^k
  Location location;       // l^k
};

// Exclusive hold of a micromobility vehicle from the decision instant until
// the end of the ride.
struct Reservation {
  VehicleId vehicle = kNoVehicle;
  RequestId request = 0;
  Seconds start = 0;
  Seconds end = 0;
  Location from;
  Location to;
};

struct SolutionState {
  Seconds clock = 0;
  std::map<RequestId, TripPlan> plans;       // committed plans (H grows each step)
  std::map<RequestId, Request> unservable;   // no alternative at all
  std::vector<RidepoolRoute> routes;         // one per ride-pool vehicle, ascending id
  std::map<VehicleId, std::vector<RouteStop>> route_history;
  std::map<int, RideTask> ride_tasks;
  std::map<VehicleId, MicroStatus> micro;
  std::vector<Reservation> reservations;
  double welfare = 0.0;  // running sum of plan utilities

  std::size_t busy_micro() const;
};

SolutionState initial_state(const World& world);

RideModel ride_model(const World& world, const SolutionState& state,
                     std::span<const RideTask> extra = {});

// Sets g_r and the utility from the legs.
void score_plan(const World& world, TripPlan& plan);

// Sum of plan utilities recomputed from the plans' legs.
double social_welfare(const World& world, const SolutionState& state);

}  // namespace multiplan
