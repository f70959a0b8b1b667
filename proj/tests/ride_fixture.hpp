#pragma once

#include <map>
#include <vector>

#include "multiplan/ridepool.hpp"
#include "support.hpp"

namespace mptest {

// Ride-pool vehicles on the bare network with plain (non-PT) ride tasks.
struct RideFixture {
  World world = build_world(bare_scenario());
  std::map<int, RideTask> tasks;
  std::vector<RidepoolRoute> routes;

  VehicleId vehicle(Location depot, int capacity = 4, Seconds start = 0) {
    const VehicleId id = add_ride(world, depot, capacity);
    RidepoolRoute r;
    r.vehicle = id;
    r.anchor = world.vehicle(id).depot.value();
    r.anchor_time = start;
    routes.push_back(r);
    return id;
  }

  int task(Location from, Location to, Seconds ready, Seconds deadline, int load = 1) {
    RideTask t;
    t.id = static_cast<int>(tasks.size()) + 1;
    t.request = t.id;
    t.pickup = from;
    t.dropoff = to;
    t.ready = ready;
    t.deadline = deadline;
    t.load = load;
    t.beta_sub_time = -0.039;
    t.beta_sub_cost = -0.425;
    t.beta_pt_wait = -0.014;
    t.direct_km = world.network.distance_km(Mode::ridepool, from, to);
    tasks[t.id] = t;
    return t.id;
  }

  RideModel model() const {
    return RideModel(world.network, world.vehicles, TaskView(&tasks, {}),
                     world.scenario.alns.unserved_penalty);
  }
};

}  // namespace mptest
