#include "multiplan/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>

#include "multiplan/csv.hpp"

namespace multiplan {

const std::set<Mode>& PrivateConfig::ownership(const std::string& profile) const {
  if (auto it = owned_by_profile.find(profile); it != owned_by_profile.end()) return it->second;
  return owned;
}

double PrivateConfig::walk_speed(const std::string& profile) const {
  if (auto it = walk_speed_by_profile.find(profile); it != walk_speed_by_profile.end()) {
    return it->second;
  }
  return walk_speed_kmh;
}

std::filesystem::path Scenario::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

Scenario default_scenario() {
  Scenario s;
  s.modes = {
      {Mode::walk, {1.3, 5.0}},           {Mode::pt, {1.0, 30.0}},
      {Mode::ridepool, {1.4, 30.0}},      {Mode::shared_bike, {1.25, 15.0}},
      {Mode::shared_scooter, {1.25, 20.0}}, {Mode::private_car, {1.4, 30.0}},
      {Mode::private_bike, {1.25, 15.0}}, {Mode::private_scooter, {1.25, 20.0}},
  };
  return s;
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

void check_keys(const YAML::Node& node, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) fail(path.empty() ? "<root>" : path, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::ranges::find(allowed, key) == allowed.end()) fail(join(path, key), "unknown key");
  }
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(key, "expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(key, "cannot read '" + n.Scalar() + "' as the expected type");
  }
}

template <typename T>
void read(const YAML::Node& parent, const std::string& path, const char* key, T& out) {
  if (auto n = parent[key]) out = scalar<T>(n, join(path, key));
}

void read_clock(const YAML::Node& parent, const std::string& path, const char* key,
                Seconds& out) {
  auto n = parent[key];
  if (!n) return;
  const auto k = join(path, key);
  if (!n.IsScalar()) fail(k, "expected HH:MM[:SS]");
  const auto& text = n.Scalar();
  try {
    out = text.find(':') == std::string::npos ? std::stoll(text) : parse_clock(text);
  } catch (const std::exception&) {
    fail(k, "bad clock value '" + text + "'");
  }
}

void read_minutes(const YAML::Node& parent, const std::string& path, const char* key,
                  Seconds& out) {
  if (auto n = parent[key]) {
    const double m = scalar<double>(n, join(path, key));
    out = static_cast<Seconds>(std::llround(m * 60.0));
  }
}

Mode mode_key(const std::string& text, const std::string& key) {
  if (text == "bike") return Mode::shared_bike;
  if (text == "scooter") return Mode::shared_scooter;
  if (text == "car") return Mode::private_car;
  if (auto m = parse_mode(text)) return *m;
  fail(key, "unknown mode '" + text + "'");
}

std::set<Mode> mode_set(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) fail(key, "expected a list of modes");
  std::set<Mode> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const auto m = mode_key(scalar<std::string>(n[i], key), key);
    if (m != Mode::walk && !is_private(m)) fail(key, "only walk and private modes can be owned");
    out.insert(m);
  }
  return out;
}

void read_fleet(const YAML::Node& n, const std::string& path, SharedFleetConfig& f,
                bool micromobility) {
  check_keys(n, path,
             {"count", "capacity", "speed_kmh", "cost_fixed", "cost_per_min", "cost_per_km",
              "docking"});
  read(n, path, "count", f.count);
  read(n, path, "capacity", f.capacity);
  read(n, path, "speed_kmh", f.speed_kmh);
  read(n, path, "cost_fixed", f.cost_fixed);
  read(n, path, "cost_per_min", f.cost_per_min);
  read(n, path, "cost_per_km", f.cost_per_km);
  if (auto d = n["docking"]) {
    auto parsed = parse_docking(scalar<std::string>(d, join(path, "docking")));
    if (!parsed || (micromobility && *parsed == Docking::not_applicable)) {
      fail(join(path, "docking"), "expected dock_based or free_floating");
    }
    f.docking = *parsed;
  }
  if (f.count < 0) fail(join(path, "count"), "must be >= 0");
  if (f.capacity < 1) fail(join(path, "capacity"), "must be >= 1");
  if (!(f.speed_kmh > 0.0)) fail(join(path, "speed_kmh"), "must be > 0");
  if (f.cost_fixed < 0 || f.cost_per_min < 0 || f.cost_per_km < 0) {
    fail(path, "costs must be >= 0");
  }
}

void validate(const Scenario& s) {
  if (s.horizon.start >= s.horizon.end) fail("horizon", "start must precede end");
  if (!(s.area_width_km > 0) || !(s.area_height_km > 0)) fail("area", "dimensions must be > 0");
  if (!(s.cell_km > 0)) fail("area.cell_km", "must be > 0");
  const auto& d = s.demand;
  if (d.lambda_peak < 0) fail("demand.lambda_peak", "must be >= 0");
  if (d.lambda_offpeak < 0) fail("demand.lambda_offpeak", "must be >= 0");
  if (!(d.gamma_shape > 0)) fail("demand.gamma_shape", "must be > 0");
  if (!(d.gamma_scale_km > 0)) fail("demand.gamma_scale_km", "must be > 0");
  if (d.window_min <= 0 || d.window_min > d.window_max) {
    fail("demand.window_min", "need 0 < window_min <= window_max");
  }
  if (d.party_size < 1) fail("demand.party_size", "must be >= 1");
  if (d.max_requests && *d.max_requests < 0) fail("demand.max_requests", "must be >= 0");
  if (d.profile_mix.empty()) fail("demand.profile_mix", "must not be empty");
  double total = 0.0;
  for (const auto& [name, w] : d.profile_mix) {
    if (w < 0) fail("demand.profile_mix." + name, "weight must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) fail("demand.profile_mix", "weights must sum to 1");
  for (const auto& w : d.peak_windows) {
    if (w.start >= w.end) fail("demand.peak_windows", "start must precede end");
  }
  if (s.fleet.bike_docks < 1 && s.fleet.bikes.count > 0 &&
      s.fleet.bikes.docking == Docking::dock_based) {
    fail("fleet.bike_docks", "dock-based bikes need at least one dock");
  }
  if (s.fleet.lock_unlock < 0) fail("fleet.lock_unlock_s", "must be >= 0");
  if (!(s.planner.station_radius_km > 0)) fail("planner.station_radius_km", "must be > 0");
  if (s.planner.connection_beam < 0) fail("planner.connection_beam", "must be >= 0");
  if (s.planner.max_pt_transfers < 0 || s.planner.max_pt_transfers > 1) {
    fail("planner.max_pt_transfers", "must be 0 or 1");
  }
  if (s.planner.service_level < 0 || s.planner.service_level > 1) {
    fail("planner.service_level", "must lie in [0,1]");
  }
  const auto& a = s.alns;
  if (a.iterations < 1) fail("alns.iterations", "must be >= 1");
  if (a.segment < 1) fail("alns.segment", "must be >= 1");
  if (!(a.cooling > 0 && a.cooling < 1)) fail("alns.cooling", "must lie in (0,1)");
  if (!(a.reaction >= 0 && a.reaction <= 1)) fail("alns.reaction", "must lie in [0,1]");
  if (!(a.initial_worsening > 0)) fail("alns.initial_worsening", "must be > 0");
  if (a.max_idle < 0) fail("alns.max_idle", "must be >= 0");
  for (const auto& [mode, spec] : s.modes) {
    if (!(spec.speed_kmh > 0) || !(spec.detour >= 1.0)) {
      fail("network", std::string(to_string(mode)) + " needs speed > 0 and detour >= 1");
    }
  }
  if (!(s.private_modes.walk_speed_kmh > 0)) fail("private.walk_speed_kmh", "must be > 0");
}

}  // namespace

Scenario parse_scenario(std::string_view yaml_text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("<yaml>: ") + e.what());
  }
  Scenario s = default_scenario();
  s.base_dir = base_dir;
  if (root.IsNull()) return s;
  check_keys(root, "",
             {"name", "seed", "horizon", "area", "gtfs", "preferences", "network", "demand",
              "fleet", "private", "planner", "alns"});
  read(root, "", "name", s.name);
  read(root, "", "seed", s.seed);
  if (auto h = root["horizon"]) {
    check_keys(h, "horizon", {"start", "end"});
    read_clock(h, "horizon", "start", s.horizon.start);
    read_clock(h, "horizon", "end", s.horizon.end);
  }
  if (auto a = root["area"]) {
    check_keys(a, "area", {"width_km", "height_km", "cell_km"});
    read(a, "area", "width_km", s.area_width_km);
    read(a, "area", "height_km", s.area_height_km);
    read(a, "area", "cell_km", s.cell_km);
  }
  if (auto g = root["gtfs"]) {
    check_keys(g, "gtfs", {"dir", "origin_lat", "origin_lon", "boarding_fee", "fare_per_km"});
    if (auto d = g["dir"]) {
      auto dir = scalar<std::string>(d, "gtfs.dir");
      if (dir.empty() || dir == "synthetic") s.gtfs_dir.reset();
      else s.gtfs_dir = dir;
    }
    read(g, "gtfs", "origin_lat", s.projection.lat0);
    read(g, "gtfs", "origin_lon", s.projection.lon0);
    read(g, "gtfs", "boarding_fee", s.fare.boarding_fee);
    read(g, "gtfs", "fare_per_km", s.fare.per_km);
    if (s.fare.boarding_fee < 0 || s.fare.per_km < 0) fail("gtfs", "fares must be >= 0");
  }
  if (auto p = root["preferences"]) {
    auto file = scalar<std::string>(p, "preferences");
    if (file.empty() || file == "builtin") s.preferences_file.reset();
    else s.preferences_file = file;
  }
  if (auto n = root["network"]) {
    check_keys(n, "network", {"detour", "speed_kmh", "station_radius_km"});
    if (auto d = n["detour"]) {
      if (!d.IsMap()) fail("network.detour", "expected a mapping");
      for (const auto& kv : d) {
        const auto key = "network.detour." + kv.first.as<std::string>();
        const Mode m = mode_key(kv.first.as<std::string>(), key);
        s.modes[m].detour = scalar<double>(kv.second, key);
        if (m == Mode::shared_bike) s.modes[Mode::private_bike].detour = s.modes[m].detour;
        if (m == Mode::shared_scooter) s.modes[Mode::private_scooter].detour = s.modes[m].detour;
        if (m == Mode::private_car) s.modes[Mode::ridepool].detour = s.modes[m].detour;
      }
    }
    if (auto v = n["speed_kmh"]) {
      if (!v.IsMap()) fail("network.speed_kmh", "expected a mapping");
      for (const auto& kv : v) {
        const auto key = "network.speed_kmh." + kv.first.as<std::string>();
        s.modes[mode_key(kv.first.as<std::string>(), key)].speed_kmh =
            scalar<double>(kv.second, key);
      }
    }
    read(n, "network", "station_radius_km", s.planner.station_radius_km);
  }
  if (auto d = root["demand"]) {
    const std::string p = "demand";
    check_keys(d, p,
               {"lambda_peak", "lambda_offpeak", "peak_windows", "gamma_shape", "gamma_scale_km",
                "window_min_minutes", "window_max_minutes", "profile_mix", "party_size",
                "max_requests", "requests_file"});
    auto& dc = s.demand;
    read(d, p, "lambda_peak", dc.lambda_peak);
    read(d, p, "lambda_offpeak", dc.lambda_offpeak);
    read(d, p, "gamma_shape", dc.gamma_shape);
    read(d, p, "gamma_scale_km", dc.gamma_scale_km);
    read_minutes(d, p, "window_min_minutes", dc.window_min);
    read_minutes(d, p, "window_max_minutes", dc.window_max);
    read(d, p, "party_size", dc.party_size);
    if (auto m = d["max_requests"]) dc.max_requests = scalar<int>(m, "demand.max_requests");
    if (auto f = d["requests_file"]) dc.requests_file = scalar<std::string>(f, "demand.requests_file");
    if (auto w = d["peak_windows"]) {
      if (!w.IsSequence()) fail("demand.peak_windows", "expected a list of [start, end] pairs");
      dc.peak_windows.clear();
      for (std::size_t i = 0; i < w.size(); ++i) {
        const auto key = "demand.peak_windows[" + std::to_string(i) + "]";
        if (!w[i].IsSequence() || w[i].size() != 2) fail(key, "expected [start, end]");
        TimeWindow tw;
        try {
          tw.start = parse_clock(scalar<std::string>(w[i][0], key));
          tw.end = parse_clock(scalar<std::string>(w[i][1], key));
        } catch (const std::invalid_argument& e) {
          fail(key, e.what());
        }
        dc.peak_windows.push_back(tw);
      }
    }
    if (auto mix = d["profile_mix"]) {
      if (!mix.IsMap()) fail("demand.profile_mix", "expected a mapping profile -> weight");
      dc.profile_mix.clear();
      for (const auto& kv : mix) {
        const auto name = kv.first.as<std::string>();
        dc.profile_mix[name] = scalar<double>(kv.second, "demand.profile_mix." + name);
      }
    }
  }
  if (auto f = root["fleet"]) {
    check_keys(f, "fleet", {"bikes", "scooters", "ridepool", "bike_docks", "lock_unlock_s"});
    if (auto b = f["bikes"]) read_fleet(b, "fleet.bikes", s.fleet.bikes, true);
    if (auto b = f["scooters"]) read_fleet(b, "fleet.scooters", s.fleet.scooters, true);
    if (auto b = f["ridepool"]) {
      read_fleet(b, "fleet.ridepool", s.fleet.ridepool, false);
      s.fleet.ridepool.docking = Docking::not_applicable;
    }
    read(f, "fleet", "bike_docks", s.fleet.bike_docks);
    read(f, "fleet", "lock_unlock_s", s.fleet.lock_unlock);
  }
  if (auto pv = root["private"]) {
    const std::string p = "private";
    check_keys(pv, p,
               {"car_speed_kmh", "car_cost_per_km", "parking_cost", "parking_search_minutes",
                "bike_speed_kmh", "scooter_speed_kmh", "walk_speed_kmh", "walk_speed_by_profile",
                "owned", "owned_by_profile"});
    auto& pc = s.private_modes;
    read(pv, p, "car_speed_kmh", pc.car_speed_kmh);
    read(pv, p, "car_cost_per_km", pc.car_cost_per_km);
    read(pv, p, "parking_cost", pc.parking_cost);
    read_minutes(pv, p, "parking_search_minutes", pc.parking_search);
    read(pv, p, "bike_speed_kmh", pc.bike_speed_kmh);
    read(pv, p, "scooter_speed_kmh", pc.scooter_speed_kmh);
    read(pv, p, "walk_speed_kmh", pc.walk_speed_kmh);
    if (auto w = pv["walk_speed_by_profile"]) {
      if (!w.IsMap()) fail("private.walk_speed_by_profile", "expected a mapping");
      pc.walk_speed_by_profile.clear();
      for (const auto& kv : w) {
        const auto name = kv.first.as<std::string>();
        pc.walk_speed_by_profile[name] =
            scalar<double>(kv.second, "private.walk_speed_by_profile." + name);
      }
    }
    if (auto o = pv["owned"]) pc.owned = mode_set(o, "private.owned");
    if (auto o = pv["owned_by_profile"]) {
      if (!o.IsMap()) fail("private.owned_by_profile", "expected a mapping");
      pc.owned_by_profile.clear();
      for (const auto& kv : o) {
        const auto name = kv.first.as<std::string>();
        pc.owned_by_profile[name] = mode_set(kv.second, "private.owned_by_profile." + name);
      }
    }
  }
  if (auto pl = root["planner"]) {
    check_keys(pl, "planner",
               {"station_radius_km", "connection_beam", "max_pt_transfers",
                "rank_connections_by_utility", "service_level"});
    read(pl, "planner", "station_radius_km", s.planner.station_radius_km);
    read(pl, "planner", "connection_beam", s.planner.connection_beam);
    read(pl, "planner", "max_pt_transfers", s.planner.max_pt_transfers);
    read(pl, "planner", "rank_connections_by_utility", s.planner.rank_connections_by_utility);
    read(pl, "planner", "service_level", s.planner.service_level);
  }
  if (auto a = root["alns"]) {
    check_keys(a, "alns",
               {"iterations", "segment", "cooling", "reaction", "reward_best", "reward_accept",
                "reward_reject", "initial_worsening", "max_idle", "unserved_penalty"});
    read(a, "alns", "iterations", s.alns.iterations);
    read(a, "alns", "segment", s.alns.segment);
    read(a, "alns", "cooling", s.alns.cooling);
    read(a, "alns", "reaction", s.alns.reaction);
    read(a, "alns", "reward_best", s.alns.reward_best);
    read(a, "alns", "reward_accept", s.alns.reward_accept);
    read(a, "alns", "reward_reject", s.alns.reward_reject);
    read(a, "alns", "initial_worsening", s.alns.initial_worsening);
    read(a, "alns", "max_idle", s.alns.max_idle);
    read(a, "alns", "unserved_penalty", s.alns.unserved_penalty);
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::string text;
  try {
    text = read_text_file(file);
  } catch (const LoadError& e) {
    throw ConfigError(e.what());
  }
  try {
    return parse_scenario(text, file.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

namespace {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::shared_bike: return "bike";
    case Mode::shared_scooter: return "scooter";
    case Mode::private_car: return "car";
    default: return std::string(to_string(m));
  }
}

void emit_fleet(YAML::Emitter& out, const char* key, const SharedFleetConfig& f, bool docking) {
  out << YAML::Key << key << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "count" << YAML::Value << f.count;
  out << YAML::Key << "capacity" << YAML::Value << f.capacity;
  out << YAML::Key << "speed_kmh" << YAML::Value << format_double(f.speed_kmh);
  out << YAML::Key << "cost_fixed" << YAML::Value << format_double(f.cost_fixed);
  out << YAML::Key << "cost_per_min" << YAML::Value << format_double(f.cost_per_min);
  out << YAML::Key << "cost_per_km" << YAML::Value << format_double(f.cost_per_km);
  if (docking) out << YAML::Key << "docking" << YAML::Value << std::string(to_string(f.docking));
  out << YAML::EndMap;
}

void emit_modes(YAML::Emitter& out, const std::set<Mode>& modes) {
  out << YAML::Flow << YAML::BeginSeq;
  for (Mode m : modes) out << mode_name(m);
  out << YAML::EndSeq;
}

}  // namespace

std::string scenario_to_yaml(const Scenario& s) {
  YAML::Emitter out;
  auto num = [](double v) { return format_double(v); };
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::Key << "horizon" << YAML::Value << YAML::BeginMap << YAML::Key << "start"
      << YAML::Value << format_clock(s.horizon.start) << YAML::Key << "end" << YAML::Value
      << format_clock(s.horizon.end) << YAML::EndMap;
  out << YAML::Key << "area" << YAML::Value << YAML::BeginMap << YAML::Key << "width_km"
      << YAML::Value << num(s.area_width_km) << YAML::Key << "height_km" << YAML::Value
      << num(s.area_height_km) << YAML::Key << "cell_km" << YAML::Value << num(s.cell_km)
      << YAML::EndMap;
  out << YAML::Key << "gtfs" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dir" << YAML::Value << (s.gtfs_dir ? s.gtfs_dir->string() : "synthetic");
  out << YAML::Key << "origin_lat" << YAML::Value << num(s.projection.lat0);
  out << YAML::Key << "origin_lon" << YAML::Value << num(s.projection.lon0);
  out << YAML::Key << "boarding_fee" << YAML::Value << num(s.fare.boarding_fee);
  out << YAML::Key << "fare_per_km" << YAML::Value << num(s.fare.per_km);
  out << YAML::EndMap;
  out << YAML::Key << "preferences" << YAML::Value
      << (s.preferences_file ? s.preferences_file->string() : "builtin");

  out << YAML::Key << "network" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "detour" << YAML::Value << YAML::BeginMap;
  for (Mode m : {Mode::walk, Mode::shared_bike, Mode::shared_scooter, Mode::private_car}) {
    out << YAML::Key << mode_name(m) << YAML::Value << num(s.modes.at(m).detour);
  }
  out << YAML::Key << "pt" << YAML::Value << num(s.modes.at(Mode::pt).detour);
  out << YAML::EndMap;
  out << YAML::Key << "speed_kmh" << YAML::Value << YAML::BeginMap;
  for (const auto& [m, spec] : s.modes) {
    out << YAML::Key << std::string(to_string(m)) << YAML::Value << num(spec.speed_kmh);
  }
  out << YAML::EndMap;
  out << YAML::Key << "station_radius_km" << YAML::Value << num(s.planner.station_radius_km);
  out << YAML::EndMap;

  const auto& d = s.demand;
  out << YAML::Key << "demand" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lambda_peak" << YAML::Value << num(d.lambda_peak);
  out << YAML::Key << "lambda_offpeak" << YAML::Value << num(d.lambda_offpeak);
  out << YAML::Key << "peak_windows" << YAML::Value << YAML::BeginSeq;
  for (const auto& w : d.peak_windows) {
    out << YAML::Flow << YAML::BeginSeq << format_clock(w.start) << format_clock(w.end)
        << YAML::EndSeq;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "gamma_shape" << YAML::Value << num(d.gamma_shape);
  out << YAML::Key << "gamma_scale_km" << YAML::Value << num(d.gamma_scale_km);
  out << YAML::Key << "window_min_minutes" << YAML::Value << num(d.window_min / 60.0);
  out << YAML::Key << "window_max_minutes" << YAML::Value << num(d.window_max / 60.0);
  out << YAML::Key << "profile_mix" << YAML::Value << YAML::BeginMap;
  for (const auto& [name, w] : d.profile_mix) out << YAML::Key << name << YAML::Value << num(w);
  out << YAML::EndMap;
  out << YAML::Key << "party_size" << YAML::Value << d.party_size;
  if (d.max_requests) out << YAML::Key << "max_requests" << YAML::Value << *d.max_requests;
  if (d.requests_file) out << YAML::Key << "requests_file" << YAML::Value << *d.requests_file;
  out << YAML::EndMap;

  out << YAML::Key << "fleet" << YAML::Value << YAML::BeginMap;
  emit_fleet(out, "bikes", s.fleet.bikes, true);
  emit_fleet(out, "scooters", s.fleet.scooters, true);
  emit_fleet(out, "ridepool", s.fleet.ridepool, false);
  out << YAML::Key << "bike_docks" << YAML::Value << s.fleet.bike_docks;
  out << YAML::Key << "lock_unlock_s" << YAML::Value << s.fleet.lock_unlock;
  out << YAML::EndMap;

  const auto& pc = s.private_modes;
  out << YAML::Key << "private" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "car_speed_kmh" << YAML::Value << num(pc.car_speed_kmh);
  out << YAML::Key << "car_cost_per_km" << YAML::Value << num(pc.car_cost_per_km);
  out << YAML::Key << "parking_cost" << YAML::Value << num(pc.parking_cost);
  out << YAML::Key << "parking_search_minutes" << YAML::Value << num(pc.parking_search / 60.0);
  out << YAML::Key << "bike_speed_kmh" << YAML::Value << num(pc.bike_speed_kmh);
  out << YAML::Key << "scooter_speed_kmh" << YAML::Value << num(pc.scooter_speed_kmh);
  out << YAML::Key << "walk_speed_kmh" << YAML::Value << num(pc.walk_speed_kmh);
  out << YAML::Key << "walk_speed_by_profile" << YAML::Value << YAML::BeginMap;
  for (const auto& [name, v] : pc.walk_speed_by_profile) {
    out << YAML::Key << name << YAML::Value << num(v);
  }
  out << YAML::EndMap;
  out << YAML::Key << "owned" << YAML::Value;
  emit_modes(out, pc.owned);
  out << YAML::Key << "owned_by_profile" << YAML::Value << YAML::BeginMap;
  for (const auto& [name, modes] : pc.owned_by_profile) {
    out << YAML::Key << name << YAML::Value;
    emit_modes(out, modes);
  }
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "planner" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "connection_beam" << YAML::Value << s.planner.connection_beam;
  out << YAML::Key << "max_pt_transfers" << YAML::Value << s.planner.max_pt_transfers;
  out << YAML::Key << "rank_connections_by_utility" << YAML::Value
      << s.planner.rank_connections_by_utility;
  out << YAML::Key << "service_level" << YAML::Value << num(s.planner.service_level);
  out << YAML::EndMap;

  const auto& a = s.alns;
  out << YAML::Key << "alns" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "iterations" << YAML::Value << a.iterations;
  out << YAML::Key << "segment" << YAML::Value << a.segment;
  out << YAML::Key << "cooling" << YAML::Value << num(a.cooling);
  out << YAML::Key << "reaction" << YAML::Value << num(a.reaction);
  out << YAML::Key << "reward_best" << YAML::Value << num(a.reward_best);
  out << YAML::Key << "reward_accept" << YAML::Value << num(a.reward_accept);
  out << YAML::Key << "reward_reject" << YAML::Value << num(a.reward_reject);
  out << YAML::Key << "initial_worsening" << YAML::Value << num(a.initial_worsening);
  out << YAML::Key << "max_idle" << YAML::Value << a.max_idle;
  out << YAML::Key << "unserved_penalty" << YAML::Value << num(a.unserved_penalty);
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::uint64_t scenario_hash(const Scenario& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : scenario_to_yaml(s)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) {
  // splitmix64 over the seed mixed with an FNV-1a hash of the stream name.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : stream) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (h | 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace multiplan
