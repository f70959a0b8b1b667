#include "multiplan/demand.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "multiplan/csv.hpp"
#include "multiplan/timetable.hpp"

namespace multiplan {

DemandSpec DemandSpec::from(const Scenario& s) {
  DemandSpec d;
  d.lambda_peak = s.demand.lambda_peak;
  d.lambda_offpeak = s.demand.lambda_offpeak;
  d.peak_windows = s.demand.peak_windows;
  d.horizon = s.horizon;
  d.gamma_shape = s.demand.gamma_shape;
  d.gamma_scale_km = s.demand.gamma_scale_km;
  d.window_min = s.demand.window_min;
  d.window_max = s.demand.window_max;
  d.party_size = s.demand.party_size;
  d.area_width_km = s.area_width_km;
  d.area_height_km = s.area_height_km;
  return d;
}

double arrival_rate_per_hour(const DemandSpec& spec, double t) {
  for (const auto& w : spec.peak_windows) {
    if (t >= static_cast<double>(w.start) && t < static_cast<double>(w.end)) return spec.lambda_peak;
  }
  return spec.lambda_offpeak;
}

namespace {

double next_rate_change(const DemandSpec& spec, double t) {
  double b = static_cast<double>(spec.horizon.end);
  for (const auto& w : spec.peak_windows) {
    for (Seconds edge : {w.start, w.end}) {
      const double e = static_cast<double>(edge);
      if (e > t && e < b) b = e;
    }
  }
  return b;
}

std::vector<double> arrivals(const DemandSpec& spec, std::mt19937_64& rng) {
  std::vector<double> out;
  double t = static_cast<double>(spec.horizon.start);
  const double end = static_cast<double>(spec.horizon.end);
  while (t < end) {
    const double rate = arrival_rate_per_hour(spec, t);
    const double boundary = next_rate_change(spec, t);
    if (rate <= 0.0) {
      t = boundary;
      continue;
    }
    std::exponential_distribution<double> gap(rate / 3600.0);
    const double next = t + gap(rng);
    if (next >= boundary) {
      t = boundary;
      continue;
    }
    t = next;
    out.push_back(t);
  }
  return out;
}

}  // namespace

std::vector<double> sample_arrivals(const DemandSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return arrivals(spec, rng);
}

GeneratedDemand generate_requests(const DemandSpec& spec, std::span<const Location> grid,
                                  std::span<const Location> stations, std::uint64_t seed) {
  if (grid.empty()) throw ConfigError("demand: grid has no cells");
  if (stations.empty()) throw ConfigError("demand: no stations to anchor destinations");
  if (!(spec.gamma_shape > 0) || !(spec.gamma_scale_km > 0)) {
    throw ConfigError("demand: gamma parameters must be > 0");
  }
  std::mt19937_64 rng(seed);
  GeneratedDemand out;
  const auto times = arrivals(spec, rng);
  std::uniform_int_distribution<std::size_t> cell(0, grid.size() - 1);
  std::uniform_int_distribution<std::size_t> station(0, stations.size() - 1);
  std::gamma_distribution<double> radius(spec.gamma_shape, spec.gamma_scale_km);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<Seconds> window(spec.window_min, spec.window_max);
  for (std::size_t i = 0; i < times.size(); ++i) {
    Request r;
    r.id = static_cast<RequestId>(i + 1);
    r.earliest = static_cast<Seconds>(std::llround(times[i]));
    const auto c = cell(rng);
    const auto s = station(rng);
    const double rad = radius(rng);
    const double th = angle(rng);
    r.latest = r.earliest + window(rng);
    r.party_size = spec.party_size;
    r.origin = grid[c];
    double x = stations[s].x_km + rad * std::cos(th);
    double y = stations[s].y_km + rad * std::sin(th);
    const double cx = std::clamp(x, 0.0, spec.area_width_km);
    const double cy = std::clamp(y, 0.0, spec.area_height_km);
    if (cx != x || cy != y) ++out.clamped;
    r.destination = {location_ids::kDestination + r.id, cx, cy, LocationKind::free_point};
    out.requests.push_back(std::move(r));
    out.arrival_exact.push_back(times[i]);
    out.anchor_station.push_back(s);
    out.radius_km.push_back(rad);
  }
  return out;
}

std::vector<Request> assign_profiles(std::vector<Request> requests,
                                     const std::map<std::string, double>& mix,
                                     std::uint64_t seed) {
  if (mix.empty()) throw ConfigError("assign_profiles: empty profile mix");
  std::vector<std::string> names;
  std::vector<double> weights;
  for (const auto& [name, w] : mix) {
    names.push_back(name);
    weights.push_back(w);
  }
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  for (auto& r : requests) r.profile = names[pick(rng)];
  return requests;
}

std::string format_requests(std::span<const Request> requests) {
  std::ostringstream out;
  out << "id,ox,oy,dx,dy,a_r,b_r,q_r,profile\n";
  for (const auto& r : requests) {
    out << r.id << ',' << format_double(r.origin.x_km) << ',' << format_double(r.origin.y_km)
        << ',' << format_double(r.destination.x_km) << ',' << format_double(r.destination.y_km)
        << ',' << r.earliest << ',' << r.latest << ',' << r.party_size << ','
        << csv_escape(r.profile) << '\n';
  }
  return out.str();
}

std::vector<Request> parse_requests(std::string_view text) {
  const auto t = CsvTable::parse(text, "requests");
  const auto c_id = t.column("id"), c_ox = t.column("ox"), c_oy = t.column("oy"),
             c_dx = t.column("dx"), c_dy = t.column("dy"), c_a = t.column("a_r"),
             c_b = t.column("b_r"), c_q = t.column("q_r"), c_p = t.column("profile");
  std::vector<Request> out;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    Request r;
    r.id = t.integer(i, c_id);
    r.origin = {location_ids::kDestination + 2 * r.id + 1'000'000'000, t.number(i, c_ox),
                t.number(i, c_oy), LocationKind::free_point};
    r.destination = {location_ids::kDestination + r.id, t.number(i, c_dx), t.number(i, c_dy),
                     LocationKind::free_point};
    r.earliest = t.integer(i, c_a);
    r.latest = t.integer(i, c_b);
    r.party_size = static_cast<int>(t.integer(i, c_q));
    r.profile = t.at(i, c_p);
    if (r.earliest >= r.latest || r.party_size < 1) {
      throw LoadError("requests:" + std::to_string(t.line_of(i)) + ": invalid request " +
                      std::to_string(r.id));
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace multiplan
