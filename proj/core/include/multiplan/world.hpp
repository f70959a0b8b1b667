#pragma once

#include <map>
#include <vector>

#include "multiplan/network.hpp"
#include "multiplan/scenario.hpp"
#include "multiplan/timetable.hpp"
#include "multiplan/types.hpp"
#include "multiplan/utility.hpp"

namespace multiplan {

// Everything static about a run: the scenario plus the loaded and placed
// network, timetable, preference table and fleet. Read-only once built.
struct World {
  Scenario scenario;
  std::uint64_t seed = 1;
  Network network;
  PTTimetable timetable;
  ProfileTable profiles;
  std::vector<Location> grid;          // grid cell centres
  std::vector<Location> bike_docks;
  std::vector<Vehicle> vehicles;       // indexed by VehicleId
  std::map<VehicleId, Location> micro_start;  // initial l^k

  const Vehicle& vehicle(VehicleId id) const { return vehicles.at(static_cast<std::size_t>(id)); }
  std::vector<VehicleId> fleet_of(Mode mode) const;
  bool inside(double x_km, double y_km) const;

  // Nearest dock to a point; ties by lower id.
  const Location& nearest_dock(const Location& p) const;

  const ProfileParams& profile(const Request& r) const { return profiles.get(r.profile); }
  double walk_speed(const Request& r) const {
    return scenario.private_modes.walk_speed(r.profile);
  }
  Seconds walk_time(const Request& r, const Location& a, const Location& b) const {
    return network.travel(Mode::walk, walk_speed(r), a, b);
  }
};

// Builds the world; `seed` drives vehicle placement. Throws ConfigError/LoadError.
World build_world(const Scenario& scenario, std::uint64_t seed);
World build_world(const Scenario& scenario);

}  // namespace multiplan
