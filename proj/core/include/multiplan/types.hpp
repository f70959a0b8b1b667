#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace multiplan {

// Seconds from the start of the service day.
using Seconds = std::int64_t;
using RequestId = std::int64_t;
using VehicleId = std::int32_t;
using LocationId = std::int64_t;
using ProfileId = std::string;

inline constexpr VehicleId kNoVehicle = -1;

inline double to_minutes(Seconds s) { return static_cast<double>(s) / 60.0; }

// "HH:MM:SS" (hours may exceed 24) -> seconds; throws std::invalid_argument.
Seconds parse_clock(std::string_view text);
std::string format_clock(Seconds s);

enum class LocationKind : std::uint8_t { grid_cell, pt_stop, bike_station, depot, free_point };

std::string_view to_string(LocationKind kind);
std::optional<LocationKind> parse_location_kind(std::string_view text);

struct Location {
  LocationId id = 0;
  double x_km = 0.0;
  double y_km = 0.0;
  LocationKind kind = LocationKind::free_point;

  friend bool operator==(const Location&, const Location&) = default;
};

double euclidean_km(const Location& a, const Location& b);

// Same place: identical id, or identical coordinates for free points.
bool same_place(const Location& a, const Location& b);

enum class Mode : std::uint8_t {
  walk,
  pt,
  ridepool,
  shared_bike,
  shared_scooter,
  private_car,
  private_bike,
  private_scooter,
};
inline constexpr std::size_t kModeCount = 8;

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

inline bool is_micromobility(Mode m) { return m == Mode::shared_bike || m == Mode::shared_scooter; }
inline bool is_shared(Mode m) { return m == Mode::ridepool || is_micromobility(m); }
inline bool is_private(Mode m) {
  return m == Mode::private_car || m == Mode::private_bike || m == Mode::private_scooter;
}

enum class Docking : std::uint8_t { dock_based, free_floating, not_applicable };

std::string_view to_string(Docking docking);
std::optional<Docking> parse_docking(std::string_view text);

struct Vehicle {
  VehicleId id = kNoVehicle;
  Mode mode = Mode::walk;
  int capacity = 1;
  double speed_kmh = 5.0;
  double cost_fixed = 0.0;    // euro per use
  double cost_per_min = 0.0;  // euro per minute
  double cost_per_km = 0.0;   // euro per km
  Docking docking = Docking::not_applicable;
  std::optional<Location> depot;
};

struct Request {
  RequestId id = 0;
  Location origin;
  Location destination;
  Seconds earliest = 0;  // a_r
  Seconds latest = 0;    // b_r
  int party_size = 1;    // q_r
  ProfileId profile = "aggregated";

  Seconds window() const { return latest - earliest; }
};

// Metro/rail and bus/tram carry different alternative-specific constants.
enum class PtClass : std::uint8_t { none, metro, bus_tram };

std::string_view to_string(PtClass cls);
std::optional<PtClass> parse_pt_class(std::string_view text);

struct TripLeg {
  Mode mode = Mode::walk;
  VehicleId vehicle = kNoVehicle;  // fleet vehicle for ride-pool / micromobility legs
  std::string pt_trip;             // timetable trip id for PT legs
  PtClass pt_class = PtClass::none;
  Location from;
  Location to;
  Seconds depart = 0;
  Seconds arrive = 0;
  double distance_km = 0.0;
  double money_cost = 0.0;
  bool is_main = false;

  Seconds duration() const { return arrive - depart; }
};

enum class AlternativeKind : std::uint8_t {
  pt_walk,
  pt_micromobility,
  pt_ridepool,
  micromobility_only,
  private_or_walk,
};
inline constexpr std::size_t kAlternativeKindCount = 5;

std::string_view to_string(AlternativeKind kind);
std::optional<AlternativeKind> parse_alternative_kind(std::string_view text);

// Tie-break rank when two alternatives have equal welfare (lower wins).
int tie_rank(AlternativeKind kind);

struct TripPlan {
  Request request;
  std::vector<TripLeg> legs;
  bool transferred = false;  // g_r
  double utility = 0.0;
  AlternativeKind kind = AlternativeKind::private_or_walk;
  Seconds decided_at = 0;

  Seconds first_depart() const { return legs.empty() ? 0 : legs.front().depart; }
  Seconds last_arrive() const { return legs.empty() ? 0 : legs.back().arrive; }
};

// g_r: PT combined with any other leg, or two non-walk legs.
bool compute_transferred(const std::vector<TripLeg>& legs);

// Violations of spatial/temporal chaining and of the request window; empty when
// the plan is a consistent door-to-door chain.
std::vector<std::string> validate_plan_chaining(const TripPlan& plan);

}  // namespace multiplan
