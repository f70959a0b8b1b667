#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "multiplan/scenario.hpp"
#include "multiplan/types.hpp"

namespace multiplan {

struct DemandSpec {
  double lambda_peak = 10.0;    // per hour
  double lambda_offpeak = 5.0;  // per hour
  std::vector<TimeWindow> peak_windows;
  TimeWindow horizon{6 * 3600, 22 * 3600};
  double gamma_shape = 2.0;
  double gamma_scale_km = 0.5;
  Seconds window_min = 30 * 60;
  Seconds window_max = 120 * 60;
  int party_size = 1;
  double area_width_km = 5.0;
  double area_height_km = 4.0;

  static DemandSpec from(const Scenario& s);
};

struct GeneratedDemand {
  std::vector<Request> requests;
  // Per request: the continuous arrival instant, the anchor station and the
  // sampled displacement before clamping.
  std::vector<double> arrival_exact;
  std::vector<std::size_t> anchor_station;
  std::vector<double> radius_km;
  int clamped = 0;  // destinations pulled back inside the area
};

double arrival_rate_per_hour(const DemandSpec& spec, double t);

// Piecewise-constant Poisson arrivals over the horizon; restarts the draw at
// every rate change (memoryless).
std::vector<double> sample_arrivals(const DemandSpec& spec, std::uint64_t seed);

// Throws ConfigError on an empty grid or station list.
GeneratedDemand generate_requests(const DemandSpec& spec, std::span<const Location> grid,
                                  std::span<const Location> stations, std::uint64_t seed);

std::vector<Request> assign_profiles(std::vector<Request> requests,
                                     const std::map<std::string, double>& mix,
                                     std::uint64_t seed);

// id,ox,oy,dx,dy,a_r,b_r,q_r,profile
std::string format_requests(std::span<const Request> requests);
std::vector<Request> parse_requests(std::string_view text);

}  // namespace multiplan
