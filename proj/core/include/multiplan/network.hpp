#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

#include "multiplan/types.hpp"

namespace multiplan {

struct ModeSpec {
  double detour = 1.0;     // network distance / straight-line distance
  double speed_kmh = 5.0;  // default speed; fleet vehicles carry their own
};

// distance / speed, rounded up to whole seconds.
Seconds travel_seconds(double distance_km, double speed_kmh);

// Synthetic road network: straight-line distance times a per-mode detour factor.
class Network {
 public:
  Network();
  explicit Network(const std::map<Mode, ModeSpec>& specs);

  const ModeSpec& spec(Mode mode) const { return specs_[static_cast<std::size_t>(mode)]; }
  void set_spec(Mode mode, ModeSpec spec) { specs_[static_cast<std::size_t>(mode)] = spec; }

  double distance_km(Mode mode, const Location& a, const Location& b) const {
    return euclidean_km(a, b) * spec(mode).detour;
  }
  Seconds travel(Mode mode, const Location& a, const Location& b) const {
    return travel_seconds(distance_km(mode, a, b), spec(mode).speed_kmh);
  }
  Seconds travel(Mode mode, double speed_kmh, const Location& a, const Location& b) const {
    return travel_seconds(distance_km(mode, a, b), speed_kmh);
  }

 private:
  std::array<ModeSpec, kModeCount> specs_;
};

// Dense per-mode table over a fixed location set.
class TravelMatrix {
 public:
  struct Entry {
    double distance_km = 0.0;
    Seconds seconds = 0;
  };

  TravelMatrix() = default;
  TravelMatrix(std::vector<Location> locations, const std::map<Mode, ModeSpec>& specs);

  std::size_t size() const { return locations_.size(); }
  const std::vector<Location>& locations() const { return locations_; }
  bool has_mode(Mode mode) const { return tables_.contains(mode); }
  const Entry& at(Mode mode, std::size_t from, std::size_t to) const;

 private:
  std::vector<Location> locations_;
  std::map<Mode, std::vector<Entry>> tables_;
};

TravelMatrix build_travel_matrix(std::span<const Location> locations,
                                 const std::map<Mode, ModeSpec>& specs);

}  // namespace multiplan
