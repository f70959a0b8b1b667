#include "multiplan/world.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace multiplan {

std::vector<VehicleId> World::fleet_of(Mode mode) const {
  std::vector<VehicleId> out;
  for (const auto& v : vehicles) {
    if (v.mode == mode) out.push_back(v.id);
  }
  return out;
}

bool World::inside(double x, double y) const {
  return x >= 0.0 && y >= 0.0 && x <= scenario.area_width_km && y <= scenario.area_height_km;
}

const Location& World::nearest_dock(const Location& p) const {
  if (bike_docks.empty()) throw std::logic_error("no bike docks configured");
  const Location* best = &bike_docks.front();
  double best_d = euclidean_km(p, *best);
  for (const auto& d : bike_docks) {
    const double dd = euclidean_km(p, d);
    if (dd < best_d - 1e-12) {
      best = &d;
      best_d = dd;
    }
  }
  return *best;
}

namespace {

// Stops spread over the area: start near the centre, then repeatedly the stop
// farthest from those already picked.
std::vector<std::size_t> spread_stops(const PTTimetable& tt, double cx, double cy) {
  const auto& stops = tt.stops();
  std::vector<std::size_t> order;
  if (stops.empty()) return order;
  std::vector<bool> used(stops.size(), false);
  std::size_t first = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < stops.size(); ++i) {
    const double d = std::hypot(stops[i].location.x_km - cx, stops[i].location.y_km - cy);
    if (d < best) {
      best = d;
      first = i;
    }
  }
  order.push_back(first);
  used[first] = true;
  while (order.size() < stops.size()) {
    std::size_t pick = 0;
    double far = -1.0;
    for (std::size_t i = 0; i < stops.size(); ++i) {
      if (used[i]) continue;
      double near = std::numeric_limits<double>::infinity();
      for (auto j : order) near = std::min(near, euclidean_km(stops[i].location, stops[j].location));
      if (near > far + 1e-12) {
        far = near;
        pick = i;
      }
    }
    used[pick] = true;
    order.push_back(pick);
  }
  return order;
}

Vehicle make_vehicle(VehicleId id, Mode mode, const SharedFleetConfig& f) {
  Vehicle v;
  v.id = id;
  v.mode = mode;
  v.capacity = mode == Mode::ridepool ? f.capacity : 1;
  v.speed_kmh = f.speed_kmh;
  v.cost_fixed = f.cost_fixed;
  v.cost_per_min = f.cost_per_min;
  v.cost_per_km = f.cost_per_km;
  v.docking = f.docking;
  return v;
}

}  // namespace

World build_world(const Scenario& sc, std::uint64_t seed) {
  World w;
  w.scenario = sc;
  w.seed = seed;
  w.network = Network(sc.modes);
  if (sc.preferences_file) w.profiles = load_preferences(sc.resolve(*sc.preferences_file));
  else w.profiles = ProfileTable::builtin();

  GtfsOptions opt;
  opt.projection = sc.projection;
  opt.horizon = std::pair{sc.horizon.start, sc.horizon.end};
  opt.fare = sc.fare;
  if (sc.gtfs_dir) {
    w.timetable = load_gtfs(sc.resolve(*sc.gtfs_dir), opt);
  } else {
    w.timetable = synthesize_timetable(sc.projection);
    w.timetable.set_fare_rule(sc.fare);
    w.timetable.restrict_to(sc.horizon.start, sc.horizon.end);
  }

  const int nx = std::max(1, static_cast<int>(std::ceil(sc.area_width_km / sc.cell_km - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil(sc.area_height_km / sc.cell_km - 1e-9)));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = std::min(sc.area_width_km, (i + 0.5) * sc.cell_km);
      const double y = std::min(sc.area_height_km, (j + 0.5) * sc.cell_km);
      w.grid.push_back({location_ids::kGridCell + static_cast<LocationId>(w.grid.size()), x, y,
                        LocationKind::grid_cell});
    }
  }

  const auto spread = spread_stops(w.timetable, sc.area_width_km / 2, sc.area_height_km / 2);
  auto near_stop = [&](std::size_t k, double dx, double dy) {
    if (spread.empty()) {
      const auto& c = w.grid[k % w.grid.size()];
      return std::pair{c.x_km, c.y_km};
    }
    const auto& s = w.timetable.stops()[spread[k % spread.size()]].location;
    return std::pair{std::clamp(s.x_km + dx, 0.0, sc.area_width_km),
                     std::clamp(s.y_km + dy, 0.0, sc.area_height_km)};
  };

  const bool docks_needed = sc.fleet.bikes.docking == Docking::dock_based ||
                            sc.fleet.scooters.docking == Docking::dock_based;
  if (docks_needed) {
    for (int k = 0; k < sc.fleet.bike_docks; ++k) {
      auto [x, y] = near_stop(static_cast<std::size_t>(k), 0.06, 0.04);
      w.bike_docks.push_back({location_ids::kBikeDock + k, x, y, LocationKind::bike_station});
    }
  }

  std::mt19937_64 rng(derive_seed(seed, "fleet"));
  std::uniform_real_distribution<double> ux(0.0, sc.area_width_km);
  std::uniform_real_distribution<double> uy(0.0, sc.area_height_km);
  VehicleId next = 0;
  for (int k = 0; k < sc.fleet.ridepool.count; ++k) {
    auto v = make_vehicle(next++, Mode::ridepool, sc.fleet.ridepool);
    auto [x, y] = near_stop(static_cast<std::size_t>(k), -0.05, 0.05);
    v.depot = Location{location_ids::kDepot + k, x, y, LocationKind::depot};
    w.vehicles.push_back(v);
  }
  auto place_micro = [&](Mode mode, const SharedFleetConfig& f, int count) {
    for (int k = 0; k < count; ++k) {
      auto v = make_vehicle(next++, mode, f);
      if (v.docking == Docking::dock_based) {
        w.micro_start[v.id] = w.bike_docks[static_cast<std::size_t>(k) % w.bike_docks.size()];
      } else {
        const double x = ux(rng);
        const double y = uy(rng);
        w.micro_start[v.id] = {location_ids::kScooterStart + v.id, x, y, LocationKind::free_point};
      }
      w.vehicles.push_back(v);
    }
  };
  place_micro(Mode::shared_bike, sc.fleet.bikes, sc.fleet.bikes.count);
  place_micro(Mode::shared_scooter, sc.fleet.scooters, sc.fleet.scooters.count);
  return w;
}

World build_world(const Scenario& scenario) { return build_world(scenario, scenario.seed); }

}  // namespace multiplan
