#include "multiplan/timetable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "multiplan/csv.hpp"

namespace multiplan {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

std::pair<double, double> Projection::to_xy(double lat, double lon) const {
  const double x = kEarthRadiusKm * (lon - lon0) * kDeg * std::cos(lat0 * kDeg);
  const double y = kEarthRadiusKm * (lat - lat0) * kDeg;
  return {x, y};
}

std::pair<double, double> Projection::to_latlon(double x_km, double y_km) const {
  const double lat = lat0 + y_km / (kEarthRadiusKm * kDeg);
  const double lon = lon0 + x_km / (kEarthRadiusKm * kDeg * std::cos(lat0 * kDeg));
  return {lat, lon};
}

PtClass pt_class_of_route_type(int route_type) {
  // 1 subway/metro, 2 rail; everything else rides with bus/tram constants.
  return route_type == 1 || route_type == 2 ? PtClass::metro : PtClass::bus_tram;
}

PTTimetable::PTTimetable(std::vector<PtStop> stops, std::vector<PtRoute> routes,
                         std::vector<PtTrip> trips, FareRule fare, Projection projection)
    : stops_(std::move(stops)),
      routes_(std::move(routes)),
      trips_(std::move(trips)),
      fare_(fare),
      projection_(projection) {
  build_index();
}

void PTTimetable::build_index() {
  stop_ids_.clear();
  trip_ids_.clear();
  for (std::size_t i = 0; i < stops_.size(); ++i) stop_ids_[stops_[i].id] = i;
  for (std::size_t i = 0; i < trips_.size(); ++i) trip_ids_[trips_[i].id] = i;
  visits_.assign(stops_.size(), {});
  for (std::size_t t = 0; t < trips_.size(); ++t) {
    auto& trip = trips_[t];
    trip.cum_km.assign(trip.stop_times.size(), 0.0);
    for (std::size_t s = 0; s < trip.stop_times.size(); ++s) {
      if (s > 0) {
        trip.cum_km[s] = trip.cum_km[s - 1] +
                         euclidean_km(stops_[trip.stop_times[s - 1].stop].location,
                                      stops_[trip.stop_times[s].stop].location);
      }
      visits_[trip.stop_times[s].stop].push_back({t, s});
    }
  }
  for (auto& v : visits_) {
    std::stable_sort(v.begin(), v.end(), [this](const Visit& a, const Visit& b) {
      return trips_[a.trip].stop_times[a.seq].depart < trips_[b.trip].stop_times[b.seq].depart;
    });
  }
}

std::optional<std::size_t> PTTimetable::stop_index(const std::string& id) const {
  auto it = stop_ids_.find(id);
  if (it == stop_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> PTTimetable::trip_index(const std::string& id) const {
  auto it = trip_ids_.find(id);
  if (it == trip_ids_.end()) return std::nullopt;
  return it->second;
}

void PTTimetable::restrict_to(Seconds start, Seconds end) {
  std::erase_if(trips_, [&](const PtTrip& t) {
    return t.stop_times.empty() || t.stop_times.back().depart < start ||
           t.stop_times.front().arrive > end;
  });
  build_index();
}

bool operator==(const PTTimetable& a, const PTTimetable& b) {
  auto stop_eq = [](const PtStop& x, const PtStop& y) {
    return x.id == y.id && x.name == y.name && x.lat == y.lat && x.lon == y.lon &&
           x.location == y.location;
  };
  auto route_eq = [](const PtRoute& x, const PtRoute& y) {
    return x.id == y.id && x.type == y.type && x.cls == y.cls;
  };
  auto st_eq = [](const StopTime& x, const StopTime& y) {
    return x.stop == y.stop && x.arrive == y.arrive && x.depart == y.depart;
  };
  auto trip_eq = [&](const PtTrip& x, const PtTrip& y) {
    return x.id == y.id && x.route == y.route &&
           std::ranges::equal(x.stop_times, y.stop_times, st_eq);
  };
  return std::ranges::equal(a.stops_, b.stops_, stop_eq) &&
         std::ranges::equal(a.routes_, b.routes_, route_eq) &&
         std::ranges::equal(a.trips_, b.trips_, trip_eq) &&
         a.fare_.boarding_fee == b.fare_.boarding_fee && a.fare_.per_km == b.fare_.per_km;
}

PTTimetable load_gtfs(const std::filesystem::path& dir, const GtfsOptions& options) {
  auto open = [&](const char* name) {
    const auto file = dir / name;
    if (!std::filesystem::exists(file)) throw LoadError("missing GTFS file " + file.string());
    return CsvTable::read(file);
  };
  const auto stops_csv = open("stops.txt");
  const auto routes_csv = open("routes.txt");
  const auto trips_csv = open("trips.txt");
  const auto times_csv = open("stop_times.txt");

  std::vector<PtStop> stops;
  {
    const auto c_id = stops_csv.column("stop_id");
    const auto c_lat = stops_csv.column("stop_lat");
    const auto c_lon = stops_csv.column("stop_lon");
    const bool has_name = stops_csv.has_column("stop_name");
    const auto c_name = has_name ? stops_csv.column("stop_name") : 0;
    for (std::size_t r = 0; r < stops_csv.rows(); ++r) {
      PtStop s;
      s.id = stops_csv.at(r, c_id);
      s.lat = stops_csv.number(r, c_lat);
      s.lon = stops_csv.number(r, c_lon);
      if (has_name) s.name = stops_csv.at(r, c_name);
      stops.push_back(std::move(s));
    }
  }
  if (stops.empty()) throw LoadError(stops_csv.source() + ": no stops");
  Projection proj;
  if (options.projection) {
    proj = *options.projection;
  } else {
    proj.lat0 = std::ranges::min_element(stops, {}, &PtStop::lat)->lat;
    proj.lon0 = std::ranges::min_element(stops, {}, &PtStop::lon)->lon;
  }
  std::unordered_map<std::string, std::size_t> stop_index;
  for (std::size_t i = 0; i < stops.size(); ++i) {
    auto [x, y] = proj.to_xy(stops[i].lat, stops[i].lon);
    stops[i].location = {location_ids::kPtStop + static_cast<LocationId>(i), x, y,
                         LocationKind::pt_stop};
    if (!stop_index.emplace(stops[i].id, i).second) {
      throw LoadError(stops_csv.source() + ": duplicate stop_id " + stops[i].id);
    }
  }

  std::vector<PtRoute> routes;
  std::unordered_map<std::string, std::size_t> route_index;
  {
    const auto c_id = routes_csv.column("route_id");
    const auto c_type = routes_csv.column("route_type");
    for (std::size_t r = 0; r < routes_csv.rows(); ++r) {
      PtRoute route;
      route.id = routes_csv.at(r, c_id);
      route.type = static_cast<int>(routes_csv.integer(r, c_type));
      route.cls = pt_class_of_route_type(route.type);
      route_index[route.id] = routes.size();
      routes.push_back(std::move(route));
    }
  }

  std::vector<PtTrip> trips;
  std::unordered_map<std::string, std::size_t> trip_index;
  {
    const auto c_trip = trips_csv.column("trip_id");
    const auto c_route = trips_csv.column("route_id");
    for (std::size_t r = 0; r < trips_csv.rows(); ++r) {
      PtTrip trip;
      trip.id = trips_csv.at(r, c_trip);
      auto it = route_index.find(trips_csv.at(r, c_route));
      if (it == route_index.end()) {
        throw LoadError(trips_csv.source() + ": trip " + trip.id + " references unknown route " +
                        trips_csv.at(r, c_route));
      }
      trip.route = it->second;
      trip_index[trip.id] = trips.size();
      trips.push_back(std::move(trip));
    }
  }

  {
    const auto c_trip = times_csv.column("trip_id");
    const auto c_seq = times_csv.column("stop_sequence");
    const auto c_stop = times_csv.column("stop_id");
    const auto c_arr = times_csv.column("arrival_time");
    const auto c_dep = times_csv.column("departure_time");
    std::vector<std::vector<std::pair<long long, StopTime>>> rows(trips.size());
    for (std::size_t r = 0; r < times_csv.rows(); ++r) {
      const auto& trip_id = times_csv.at(r, c_trip);
      auto t = trip_index.find(trip_id);
      if (t == trip_index.end()) {
        throw LoadError(times_csv.source() + ":" + std::to_string(times_csv.line_of(r)) +
                        ": unknown trip " + trip_id);
      }
      auto s = stop_index.find(times_csv.at(r, c_stop));
      if (s == stop_index.end()) {
        throw LoadError(times_csv.source() + ":" + std::to_string(times_csv.line_of(r)) +
                        ": trip " + trip_id + " references unknown stop " +
                        times_csv.at(r, c_stop));
      }
      StopTime st;
      st.stop = s->second;
      try {
        st.arrive = parse_clock(times_csv.at(r, c_arr));
        st.depart = parse_clock(times_csv.at(r, c_dep));
      } catch (const std::invalid_argument& e) {
        throw LoadError(times_csv.source() + ":" + std::to_string(times_csv.line_of(r)) +
                        ": trip " + trip_id + ": " + e.what());
      }
      rows[t->second].emplace_back(times_csv.integer(r, c_seq), st);
    }
    for (std::size_t t = 0; t < trips.size(); ++t) {
      auto& r = rows[t];
      std::ranges::stable_sort(r, {}, &std::pair<long long, StopTime>::first);
      for (std::size_t i = 0; i < r.size(); ++i) {
        const auto& st = r[i].second;
        if (st.arrive > st.depart || (i > 0 && st.arrive <= r[i - 1].second.depart)) {
          throw LoadError(times_csv.source() + ": trip " + trips[t].id +
                          " has non-increasing stop times at sequence " +
                          std::to_string(r[i].first));
        }
        trips[t].stop_times.push_back(st);
      }
      if (trips[t].stop_times.size() < 2) {
        throw LoadError(times_csv.source() + ": trip " + trips[t].id +
                        " has fewer than two stop times");
      }
    }
  }

  PTTimetable tt(std::move(stops), std::move(routes), std::move(trips), options.fare, proj);
  if (options.horizon) tt.restrict_to(options.horizon->first, options.horizon->second);
  return tt;
}

void write_gtfs(const PTTimetable& tt, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream stops, routes, trips, times;
  stops << "stop_id,stop_name,stop_lat,stop_lon\n";
  for (const auto& s : tt.stops()) {
    stops << csv_escape(s.id) << ',' << csv_escape(s.name) << ',' << format_double(s.lat) << ','
          << format_double(s.lon) << '\n';
  }
  routes << "route_id,route_type\n";
  for (const auto& r : tt.routes()) routes << csv_escape(r.id) << ',' << r.type << '\n';
  trips << "trip_id,route_id\n";
  times << "trip_id,stop_sequence,stop_id,arrival_time,departure_time\n";
  for (const auto& t : tt.trips()) {
    trips << csv_escape(t.id) << ',' << csv_escape(tt.routes()[t.route].id) << '\n';
    for (std::size_t i = 0; i < t.stop_times.size(); ++i) {
      const auto& st = t.stop_times[i];
      times << csv_escape(t.id) << ',' << i + 1 << ',' << csv_escape(tt.stops()[st.stop].id)
            << ',' << format_clock(st.arrive) << ',' << format_clock(st.depart) << '\n';
    }
  }
  write_text_file(dir / "stops.txt", stops.str());
  write_text_file(dir / "routes.txt", routes.str());
  write_text_file(dir / "trips.txt", trips.str());
  write_text_file(dir / "stop_times.txt", times.str());
}

namespace {

struct LineSpec {
  std::string route_id;
  int route_type;
  std::vector<std::string> stops;
  double speed_kmh;
  Seconds dwell;
  bool both_directions;
};

// Departure times from the first stop: `peak` headway inside the peak windows,
// `base` elsewhere, over [first, last].
std::vector<Seconds> departures(Seconds first, Seconds last, Seconds base, Seconds peak) {
  auto in_peak = [](Seconds t) {
    return (t >= 7 * 3600 && t < 9 * 3600) || (t >= 16 * 3600 && t < 18 * 3600);
  };
  std::vector<Seconds> out;
  for (Seconds t = first; t <= last; t += in_peak(t) ? peak : base) out.push_back(t);
  return out;
}

}  // namespace

PTTimetable synthesize_timetable(const Projection& projection) {
  struct StopSpec {
    const char* id;
    const char* name;
    double x, y;
  };
  // clang-format off
  const std::vector<StopSpec> stop_specs = {
    {"M1", "West Terminus", 0.3, 2.0}, {"M2", "Market", 1.3, 2.0}, {"M3", "Central", 2.5, 2.0},
    {"M4", "Harbour Gate", 3.7, 2.0}, {"M5", "East Terminus", 4.7, 2.0},
    {"A1", "South Fields", 1.3, 0.3}, {"A2", "Mill Lane", 1.3, 1.1},
    {"A3", "Church Square", 1.3, 2.9}, {"A4", "North Park", 1.3, 3.7},
    {"C1", "Dockside", 3.7, 0.3}, {"C2", "Canal Street", 3.7, 1.1},
    {"C3", "Hospital", 3.7, 2.9}, {"C4", "Polder Road", 3.7, 3.7},
    {"L1", "Ring South-West", 0.7, 0.8}, {"L2", "Ring South", 2.5, 0.6},
    {"L3", "Ring South-East", 4.3, 0.8}, {"L4", "Ring East", 4.4, 2.6},
    {"L5", "Ring North-East", 4.3, 3.3}, {"L6", "Ring North", 2.5, 3.5},
    {"L7", "Ring North-West", 0.7, 3.3}, {"L8", "Ring West", 0.5, 1.4},
  };
  // clang-format on
  std::vector<PtStop> stops;
  for (std::size_t i = 0; i < stop_specs.size(); ++i) {
    const auto& s = stop_specs[i];
    PtStop stop;
    stop.id = s.id;
    stop.name = s.name;
    std::tie(stop.lat, stop.lon) = projection.to_latlon(s.x, s.y);
    auto [x, y] = projection.to_xy(stop.lat, stop.lon);
    stop.location = {location_ids::kPtStop + static_cast<LocationId>(i), x, y,
                     LocationKind::pt_stop};
    stops.push_back(std::move(stop));
  }
  auto index_of = [&](const std::string& id) {
    for (std::size_t i = 0; i < stops.size(); ++i) {
      if (stops[i].id == id) return i;
    }
    throw std::logic_error("unknown synthetic stop " + id);
  };

  const std::vector<LineSpec> lines = {
      {"metro", 1, {"M1", "M2", "M3", "M4", "M5"}, 36.0, 30, true},
      {"bus_west", 3, {"A1", "A2", "M2", "A3", "A4"}, 18.0, 20, true},
      {"bus_east", 3, {"C1", "C2", "M4", "C3", "C4"}, 18.0, 20, true},
      {"bus_ring", 0, {"L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8", "L1"}, 20.0, 20, false},
  };
  std::vector<PtRoute> routes;
  std::vector<PtTrip> trips;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto& line = lines[li];
    routes.push_back({line.route_id, line.route_type, pt_class_of_route_type(line.route_type)});
    std::vector<Seconds> deps;
    if (line.route_id == "metro") deps = departures(6 * 3600, 21 * 3600 + 59 * 60, 900, 600);
    else if (line.route_id == "bus_ring") deps = departures(6 * 3600, 21 * 3600, 1800, 1800);
    else deps = departures(6 * 3600, 21 * 3600 + 40 * 60, 1200, 1200);
    for (int dir = 0; dir < (line.both_directions ? 2 : 1); ++dir) {
      auto seq = line.stops;
      if (dir == 1) std::ranges::reverse(seq);
      for (std::size_t k = 0; k < deps.size(); ++k) {
        PtTrip trip;
        trip.id = line.route_id + (dir ? "_in_" : "_out_") + std::to_string(k + 1);
        trip.route = li;
        Seconds t = deps[k];
        for (std::size_t s = 0; s < seq.size(); ++s) {
          const auto idx = index_of(seq[s]);
          if (s > 0) {
            const double km = euclidean_km(stops[index_of(seq[s - 1])].location,
                                           stops[idx].location);
            t += static_cast<Seconds>(std::ceil(km / line.speed_kmh * 3600.0));
          }
          const bool terminal = s == 0 || s + 1 == seq.size();
          trip.stop_times.push_back({idx, t, terminal ? t : t + line.dwell});
          if (!terminal) t += line.dwell;
        }
        trips.push_back(std::move(trip));
      }
    }
  }
  return PTTimetable(std::move(stops), std::move(routes), std::move(trips), FareRule{},
                     projection);
}

}  // namespace multiplan
