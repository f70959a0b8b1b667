#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "multiplan/types.hpp"

namespace multiplan {

struct ProfileParams {
  std::string name = "aggregated";

  double asc_metro = 0.0;
  double asc_bus_tram = 0.0;
  double asc_shared_bike = 0.0;     // shared bike as the sole main mode
  double asc_sub_mode = 0.0;        // shared access/egress mode next to PT
  double asc_walk = 0.0;
  double asc_shared_scooter = 0.0;  // shared scooter as the sole main mode
  double asc_private_bike = 0.0;
  double asc_car_ride = 0.0;        // reference alternative, always 0

  double beta_main_cost = 0.0;  // per euro
  double beta_sub_cost = 0.0;   // per euro
  double beta_main_time = 0.0;  // per minute
  double beta_sub_time = 0.0;   // per minute
  double beta_pt_wait = 0.0;    // per minute
  double beta_walk = 0.0;       // per minute
};

// Profiles keyed by name; unknown names resolve to "aggregated".
class ProfileTable {
 public:
  ProfileTable() = default;
  explicit ProfileTable(std::vector<ProfileParams> rows);

  // The full Appendix table compiled in, used when no file is configured.
  static const ProfileTable& builtin();

  const ProfileParams& get(const std::string& name) const;
  bool contains(const std::string& name) const { return rows_.contains(name); }
  std::vector<std::string> names() const;
  std::size_t size() const { return rows_.size(); }

 private:
  std::map<std::string, ProfileParams> rows_;
};

// Columns: profile, 8 ASC columns, 6 beta columns.
ProfileTable load_preferences(const std::filesystem::path& file);
ProfileTable parse_preferences(std::string_view text);
std::string format_preferences(const ProfileTable& table);

double leg_cost(const Vehicle& vehicle, double tau_minutes, double distance_km);
double leg_cost(double fixed, double per_min, double per_km, double tau_minutes,
                double distance_km);

// Alternative-specific constant of a non-transfer plan whose main mode is `mode`.
double main_mode_asc(const ProfileParams& p, Mode mode, PtClass cls);

double plan_utility(const ProfileParams& profile, const TripPlan& plan);

}  // namespace multiplan
