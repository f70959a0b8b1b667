#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "multiplan/network.hpp"
#include "multiplan/timetable.hpp"
#include "multiplan/types.hpp"
#include "multiplan/utility.hpp"

namespace multiplan {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimeWindow {
  Seconds start = 0;
  Seconds end = 0;
};

struct DemandConfig {
  double lambda_peak = 10.0;    // requests per hour
  double lambda_offpeak = 5.0;  // requests per hour
  std::vector<TimeWindow> peak_windows = {{7 * 3600, 9 * 3600}, {16 * 3600, 18 * 3600}};
  double gamma_shape = 2.0;
  double gamma_scale_km = 0.5;
  Seconds window_min = 30 * 60;
  Seconds window_max = 120 * 60;
  std::map<std::string, double> profile_mix = {{"aggregated", 1.0}};
  int party_size = 1;
  std::optional<int> max_requests;          // keep only the first N arrivals
  std::optional<std::string> requests_file;  // replay instead of sampling
};

struct SharedFleetConfig {
  int count = 0;
  int capacity = 1;
  double speed_kmh = 15.0;
  double cost_fixed = 1.0;
  double cost_per_min = 0.0;
  double cost_per_km = 0.0;
  Docking docking = Docking::not_applicable;
};

struct FleetConfig {
  SharedFleetConfig bikes{10, 1, 15.0, 1.0, 0.05, 0.0, Docking::dock_based};
  SharedFleetConfig scooters{10, 1, 20.0, 1.0, 0.0, 0.0, Docking::free_floating};
  SharedFleetConfig ridepool{3, 4, 30.0, 2.0, 0.0, 0.5, Docking::not_applicable};
  int bike_docks = 8;
  Seconds lock_unlock = 60;  // t'' added to every micromobility ride
};

struct PrivateConfig {
  double car_speed_kmh = 30.0;
  double car_cost_per_km = 0.3;
  double parking_cost = 2.0;           // c_park
  Seconds parking_search = 5 * 60;     // t_search
  double bike_speed_kmh = 15.0;
  double scooter_speed_kmh = 20.0;
  double walk_speed_kmh = 5.0;
  std::map<std::string, double> walk_speed_by_profile = {{"age_65_plus", 4.0}};
  std::set<Mode> owned = {Mode::walk, Mode::private_car};
  std::map<std::string, std::set<Mode>> owned_by_profile;

  const std::set<Mode>& ownership(const std::string& profile) const;
  double walk_speed(const std::string& profile) const;
};

struct PlannerConfig {
  double station_radius_km = 2.0;  // n
  int connection_beam = 5;         // 0 = no cap
  int max_pt_transfers = 1;
  bool rank_connections_by_utility = true;
  double service_level = 1.0;  // epsilon
};

struct AlnsConfig {
  int iterations = 1000;
  int segment = 100;
  double cooling = 0.9975;
  double reaction = 0.1;
  double reward_best = 33.0;
  double reward_accept = 13.0;
  double reward_reject = 0.0;
  double initial_worsening = 0.05;  // accepted with probability 1/2 at T0
  int max_idle = 100;               // stop after this many non-improving iterations; 0 = never
  double unserved_penalty = 1000.0;
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  TimeWindow horizon{6 * 3600, 22 * 3600};
  double area_width_km = 5.0;
  double area_height_km = 4.0;
  double cell_km = 0.5;

  std::optional<std::filesystem::path> gtfs_dir;  // empty = built-in synthetic network
  Projection projection{52.0, 4.4};
  FareRule fare;

  std::optional<std::filesystem::path> preferences_file;  // empty = built-in table

  std::map<Mode, ModeSpec> modes;  // detour factors and default speeds
  DemandConfig demand;
  FleetConfig fleet;
  PrivateConfig private_modes;
  PlannerConfig planner;
  AlnsConfig alns;

  std::filesystem::path base_dir = ".";  // relative paths resolve against this

  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

Scenario default_scenario();

// Throws ConfigError naming the offending key.
Scenario load_scenario(const std::filesystem::path& file);
Scenario parse_scenario(std::string_view yaml_text,
                        const std::filesystem::path& base_dir = ".");
std::string scenario_to_yaml(const Scenario& s);
// FNV-1a of the canonical serialization.
std::uint64_t scenario_hash(const Scenario& s);

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);

}  // namespace multiplan
