#pragma once

#include <filesystem>
#include <string>

#include "multiplan/scenario.hpp"
#include "multiplan/state.hpp"
#include "multiplan/world.hpp"

namespace mptest {

using namespace multiplan;

inline std::filesystem::path data_dir() { return MULTIPLAN_DATA_DIR; }

// Fresh directory under the system temp dir, removed first if present.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("multiplan_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

// Synthetic network, no shared fleets, walking only.
inline Scenario bare_scenario() {
  Scenario s = default_scenario();
  s.fleet.bikes.count = 0;
  s.fleet.scooters.count = 0;
  s.fleet.ridepool.count = 0;
  s.private_modes.owned = {Mode::walk};
  s.planner.service_level = 0.0;
  return s;
}

inline Location point(double x, double y, LocationId id = -1) {
  static LocationId next = 50'000'000;
  return Location{id >= 0 ? id : next++, x, y, LocationKind::free_point};
}

inline Request request(RequestId id, Location o, Location d, Seconds a, Seconds b,
                       std::string profile = "aggregated") {
  Request r;
  r.id = id;
  r.origin = o;
  r.destination = d;
  r.earliest = a;
  r.latest = b;
  r.profile = std::move(profile);
  return r;
}

inline VehicleId add_micro(World& w, Mode mode, Location at, Docking docking) {
  Vehicle v;
  v.id = static_cast<VehicleId>(w.vehicles.size());
  v.mode = mode;
  const auto& f = mode == Mode::shared_bike ? w.scenario.fleet.bikes : w.scenario.fleet.scooters;
  v.speed_kmh = f.speed_kmh;
  v.cost_fixed = f.cost_fixed;
  v.cost_per_min = f.cost_per_min;
  v.cost_per_km = f.cost_per_km;
  v.docking = docking;
  w.vehicles.push_back(v);
  w.micro_start[v.id] = at;
  return v.id;
}

inline VehicleId add_ride(World& w, Location depot, int capacity = 4) {
  Vehicle v;
  v.id = static_cast<VehicleId>(w.vehicles.size());
  v.mode = Mode::ridepool;
  v.capacity = capacity;
  const auto& f = w.scenario.fleet.ridepool;
  v.speed_kmh = f.speed_kmh;
  v.cost_fixed = f.cost_fixed;
  v.cost_per_min = f.cost_per_min;
  v.cost_per_km = f.cost_per_km;
  depot.kind = LocationKind::depot;
  v.depot = depot;
  w.vehicles.push_back(v);
  return v.id;
}

inline Seconds hms(int h, int m, int s = 0) { return h * 3600 + m * 60 + s; }

}  // namespace mptest
