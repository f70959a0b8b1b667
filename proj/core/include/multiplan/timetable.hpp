#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "multiplan/types.hpp"

namespace multiplan {

// Location id ranges per kind, so ids are unique within a scenario.
namespace location_ids {
inline constexpr LocationId kGridCell = 0;
inline constexpr LocationId kPtStop = 1'000'000;
inline constexpr LocationId kBikeDock = 2'000'000;
inline constexpr LocationId kDepot = 3'000'000;
inline constexpr LocationId kScooterStart = 4'000'000;
inline constexpr LocationId kDestination = 10'000'000;
}  // namespace location_ids

struct PtStop {
  std::string id;
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
  Location location;
};

struct PtRoute {
  std::string id;
  int type = 3;  // GTFS route_type
  PtClass cls = PtClass::bus_tram;
};

struct StopTime {
  std::size_t stop = 0;  // index into PTTimetable::stops
  Seconds arrive = 0;
  Seconds depart = 0;
};

struct PtTrip {
  std::string id;
  std::size_t route = 0;  // index into PTTimetable::routes
  std::vector<StopTime> stop_times;
  std::vector<double> cum_km;  // along-route distance at each stop
};

struct FareRule {
  double boarding_fee = 1.08;
  double per_km = 0.196;

  double fare(double km) const { return boarding_fee + per_km * km; }
};

struct Projection {
  double lat0 = 0.0;
  double lon0 = 0.0;
  static constexpr double kEarthRadiusKm = 6371.0;

  // Local tangent plane around (lat0, lon0).
  std::pair<double, double> to_xy(double lat, double lon) const;
  std::pair<double, double> to_latlon(double x_km, double y_km) const;
};

PtClass pt_class_of_route_type(int route_type);

class PTTimetable {
 public:
  PTTimetable() = default;
  PTTimetable(std::vector<PtStop> stops, std::vector<PtRoute> routes, std::vector<PtTrip> trips,
              FareRule fare, Projection projection);

  const std::vector<PtStop>& stops() const { return stops_; }
  const std::vector<PtRoute>& routes() const { return routes_; }
  const std::vector<PtTrip>& trips() const { return trips_; }
  const FareRule& fare_rule() const { return fare_; }
  void set_fare_rule(FareRule f) { fare_ = f; }
  const Projection& projection() const { return projection_; }

  std::optional<std::size_t> stop_index(const std::string& id) const;
  std::optional<std::size_t> trip_index(const std::string& id) const;
  PtClass trip_class(const PtTrip& trip) const { return routes_[trip.route].cls; }

  struct Visit {
    std::size_t trip;
    std::size_t seq;  // position in the trip's stop_times
  };
  // Trips calling at a stop, sorted by departure there.
  const std::vector<Visit>& visits(std::size_t stop) const { return visits_[stop]; }

  // Keep only trips whose [first arrive, last depart] intersects [start, end].
  void restrict_to(Seconds start, Seconds end);

  friend bool operator==(const PTTimetable& a, const PTTimetable& b);

 private:
  void build_index();

  std::vector<PtStop> stops_;
  std::vector<PtRoute> routes_;
  std::vector<PtTrip> trips_;
  FareRule fare_;
  Projection projection_;
  std::unordered_map<std::string, std::size_t> stop_ids_;
  std::unordered_map<std::string, std::size_t> trip_ids_;
  std::vector<std::vector<Visit>> visits_;
};

struct GtfsOptions {
  std::optional<Projection> projection;  // default: south-west corner of the stops
  std::optional<std::pair<Seconds, Seconds>> horizon;
  FareRule fare;
};

// Reads stops.txt, routes.txt, trips.txt and stop_times.txt; throws LoadError.
PTTimetable load_gtfs(const std::filesystem::path& dir, const GtfsOptions& options = {});
void write_gtfs(const PTTimetable& timetable, const std::filesystem::path& dir);

// Small made-up network (one metro line, two radial buses, one loop bus)
// laid out over a 5 km x 4 km area.
PTTimetable synthesize_timetable(const Projection& projection = {52.0, 4.4});

}  // namespace multiplan
