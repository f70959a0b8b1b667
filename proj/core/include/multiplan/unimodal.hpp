#pragma once

#include <optional>
#include <vector>

#include "multiplan/state.hpp"

namespace multiplan {

// Vehicles whose reservation ended before t become idle again.
void release_expired(SolutionState& state, Seconds t);

bool micro_idle(const SolutionState& state, VehicleId v);

struct MicroTrip {
  VehicleId vehicle = kNoVehicle;
  std::vector<TripLeg> legs;  // walk to vehicle, ride, walk from return point
  Location return_point;
};

struct MicroLegRequest {
  Location from;
  Location to;
  Seconds earliest = 0;
  Seconds latest = 0;
  bool arrive_by = false;        // schedule to arrive exactly at `latest`
  bool keep_zero_walk = true;    // keep a zero-length walk to the vehicle
};

// Walk to the vehicle's current location, ride to the return point (nearest
// dock for dock-based fleets, the destination otherwise) and walk on.
std::optional<MicroTrip> plan_micro_trip(const World& world, const SolutionState& state,
                                         const Request& owner, VehicleId vehicle,
                                         const MicroLegRequest& leg);

// Micromobility-only alternatives, one per idle vehicle that can make the window.
std::vector<TripPlan> micromobility_candidates(const World& world, const SolutionState& state,
                                               const Request& request);

// Reserves every micromobility leg of `plan` from time t; throws std::logic_error
// if a vehicle is already held.
void commit_micromobility(SolutionState& state, const TripPlan& plan, Seconds t);

// Door-to-door options with walking or owned private vehicles, in the order
// walk, bike, scooter, car.
std::vector<TripPlan> private_options(const World& world, const Request& request);

// Best private option by utility; empty when no mode fits the window.
std::optional<TripPlan> private_fallback(const World& world, const Request& request);

}  // namespace multiplan
