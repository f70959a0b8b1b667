#include "multiplan/network.hpp"

#include <cmath>
#include <stdexcept>

namespace multiplan {

Seconds travel_seconds(double distance_km, double speed_kmh) {
  if (distance_km <= 0.0) return 0;
  const double s = distance_km / speed_kmh * 3600.0;
  // Absorb representation error so that e.g. 1.3 km at 5 km/h is 936 s, not 937.
  return static_cast<Seconds>(std::ceil(s - 1e-7));
}

Network::Network() {
  set_spec(Mode::walk, {1.3, 5.0});
  set_spec(Mode::pt, {1.0, 30.0});
  set_spec(Mode::ridepool, {1.4, 30.0});
  set_spec(Mode::shared_bike, {1.25, 15.0});
  set_spec(Mode::shared_scooter, {1.25, 20.0});
  set_spec(Mode::private_car, {1.4, 30.0});
  set_spec(Mode::private_bike, {1.25, 15.0});
  set_spec(Mode::private_scooter, {1.25, 20.0});
}

Network::Network(const std::map<Mode, ModeSpec>& specs) : Network() {
  for (const auto& [mode, s] : specs) set_spec(mode, s);
}

TravelMatrix::TravelMatrix(std::vector<Location> locations,
                           const std::map<Mode, ModeSpec>& specs)
    : locations_(std::move(locations)) {
  const std::size_t n = locations_.size();
  for (const auto& [mode, s] : specs) {
    if (!(s.speed_kmh > 0.0)) throw std::invalid_argument("mode speed must be positive");
    auto& table = tables_[mode];
    table.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double d = i == j ? 0.0 : euclidean_km(locations_[i], locations_[j]) * s.detour;
        table[i * n + j] = {d, travel_seconds(d, s.speed_kmh)};
      }
    }
  }
}

const TravelMatrix::Entry& TravelMatrix::at(Mode mode, std::size_t from, std::size_t to) const {
  auto it = tables_.find(mode);
  if (it == tables_.end()) throw std::out_of_range("mode not in travel matrix");
  return it->second.at(from * locations_.size() + to);
}

TravelMatrix build_travel_matrix(std::span<const Location> locations,
                                 const std::map<Mode, ModeSpec>& specs) {
  return TravelMatrix({locations.begin(), locations.end()}, specs);
}

}  // namespace multiplan
