#include "multiplan/report.hpp"

#include <cmath>
#include <sstream>

#include "multiplan/csv.hpp"
#include "multiplan/demand.hpp"

namespace multiplan {

namespace {

const char* kEventsHeader =
    "request,time,served,kind,modes,utility_at_decision,others_delta,welfare_after,candidates\n";
const char* kPlansHeader =
    "request,profile,a_r,b_r,q_r,ox,oy,dx,dy,kind,transferred,utility,decided_at,leg,mode,"
    "vehicle,pt_trip,pt_class,from_id,from_kind,from_x,from_y,to_id,to_kind,to_x,to_y,depart,"
    "arrive,distance_km,cost,main\n";

template <class T>
T parse_enum(const std::optional<T>& v, const CsvTable& t, std::size_t row, std::string_view what) {
  if (!v) {
    throw LoadError(t.source() + " line " + std::to_string(t.line_of(row)) + ": bad " +
                    std::string(what));
  }
  return *v;
}

}  // namespace

std::string format_events(std::span<const EventRecord> events) {
  std::ostringstream out;
  out << kEventsHeader;
  for (const auto& e : events) {
    out << e.request << ',' << e.time << ',' << (e.served ? 1 : 0) << ','
        << (e.served ? to_string(e.kind) : "unservable") << ',' << csv_escape(e.modes) << ','
        << format_double(e.utility_at_decision) << ',' << format_double(e.others_delta) << ','
        << format_double(e.welfare_after) << ',' << e.candidates << '\n';
  }
  return out.str();
}

std::vector<EventRecord> parse_events(std::string_view text) {
  const auto t = CsvTable::parse(text, "events.csv");
  const auto c_r = t.column("request"), c_t = t.column("time"), c_s = t.column("served"),
             c_k = t.column("kind"), c_m = t.column("modes"), c_u = t.column("utility_at_decision"),
             c_o = t.column("others_delta"), c_w = t.column("welfare_after"),
             c_c = t.column("candidates");
  std::vector<EventRecord> out;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    EventRecord e;
    e.request = t.integer(i, c_r);
    e.time = t.integer(i, c_t);
    e.served = t.integer(i, c_s) != 0;
    if (e.served) e.kind = parse_enum(parse_alternative_kind(t.at(i, c_k)), t, i, "kind");
    e.modes = t.at(i, c_m);
    e.utility_at_decision = t.number(i, c_u);
    e.others_delta = t.number(i, c_o);
    e.welfare_after = t.number(i, c_w);
    e.candidates = static_cast<std::size_t>(t.integer(i, c_c));
    out.push_back(std::move(e));
  }
  return out;
}

std::string format_plans(const SolutionState& state) {
  std::ostringstream out;
  out << kPlansHeader;
  for (const auto& [id, p] : state.plans) {
    const Request& r = p.request;
    for (std::size_t i = 0; i < p.legs.size(); ++i) {
      const TripLeg& l = p.legs[i];
      out << id << ',' << csv_escape(r.profile) << ',' << r.earliest << ',' << r.latest << ','
          << r.party_size << ',' << format_double(r.origin.x_km) << ','
          << format_double(r.origin.y_km) << ',' << format_double(r.destination.x_km) << ','
          << format_double(r.destination.y_km) << ',' << to_string(p.kind) << ','
          << (p.transferred ? 1 : 0) << ',' << format_double(p.utility) << ',' << p.decided_at
          << ',' << i << ',' << to_string(l.mode) << ',' << l.vehicle << ','
          << csv_escape(l.pt_trip) << ',' << to_string(l.pt_class) << ',' << l.from.id << ','
          << to_string(l.from.kind) << ',' << format_double(l.from.x_km) << ','
          << format_double(l.from.y_km) << ',' << l.to.id << ',' << to_string(l.to.kind) << ','
          << format_double(l.to.x_km) << ',' << format_double(l.to.y_km) << ',' << l.depart << ','
          << l.arrive << ',' << format_double(l.distance_km) << ','
          << format_double(l.money_cost) << ',' << (l.is_main ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

std::map<RequestId, TripPlan> parse_plans(std::string_view text) {
  const auto t = CsvTable::parse(text, "plans.csv");
  auto col = [&](std::string_view n) { return t.column(n); };
  const auto c_req = col("request"), c_prof = col("profile"), c_a = col("a_r"), c_b = col("b_r"),
             c_q = col("q_r"), c_ox = col("ox"), c_oy = col("oy"), c_dx = col("dx"),
             c_dy = col("dy"), c_kind = col("kind"), c_g = col("transferred"),
             c_u = col("utility"), c_dec = col("decided_at"), c_leg = col("leg"),
             c_mode = col("mode"), c_veh = col("vehicle"), c_trip = col("pt_trip"),
             c_cls = col("pt_class"), c_fid = col("from_id"), c_fk = col("from_kind"),
             c_fx = col("from_x"), c_fy = col("from_y"), c_tid = col("to_id"),
             c_tk = col("to_kind"), c_tx = col("to_x"), c_ty = col("to_y"),
             c_dep = col("depart"), c_arr = col("arrive"), c_km = col("distance_km"),
             c_cost = col("cost"), c_main = col("main");
  std::map<RequestId, TripPlan> out;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const RequestId id = t.integer(i, c_req);
    TripPlan& p = out[id];
    if (p.legs.empty()) {
      Request& r = p.request;
      r.id = id;
      r.profile = t.at(i, c_prof);
      r.earliest = t.integer(i, c_a);
      r.latest = t.integer(i, c_b);
      r.party_size = static_cast<int>(t.integer(i, c_q));
      r.origin = {0, t.number(i, c_ox), t.number(i, c_oy), LocationKind::free_point};
      r.destination = {0, t.number(i, c_dx), t.number(i, c_dy), LocationKind::free_point};
      p.kind = parse_enum(parse_alternative_kind(t.at(i, c_kind)), t, i, "kind");
      p.transferred = t.integer(i, c_g) != 0;
      p.utility = t.number(i, c_u);
      p.decided_at = t.integer(i, c_dec);
    }
    if (static_cast<std::size_t>(t.integer(i, c_leg)) != p.legs.size()) {
      throw LoadError("plans.csv line " + std::to_string(t.line_of(i)) + ": legs out of order");
    }
    TripLeg l;
    l.mode = parse_enum(parse_mode(t.at(i, c_mode)), t, i, "mode");
    l.vehicle = static_cast<VehicleId>(t.integer(i, c_veh));
    l.pt_trip = t.at(i, c_trip);
    l.pt_class = parse_enum(parse_pt_class(t.at(i, c_cls)), t, i, "pt_class");
    l.from = {t.integer(i, c_fid), t.number(i, c_fx), t.number(i, c_fy),
              parse_enum(parse_location_kind(t.at(i, c_fk)), t, i, "from_kind")};
    l.to = {t.integer(i, c_tid), t.number(i, c_tx), t.number(i, c_ty),
            parse_enum(parse_location_kind(t.at(i, c_tk)), t, i, "to_kind")};
    l.depart = t.integer(i, c_dep);
    l.arrive = t.integer(i, c_arr);
    l.distance_km = t.number(i, c_km);
    l.money_cost = t.number(i, c_cost);
    l.is_main = t.integer(i, c_main) != 0;
    p.legs.push_back(std::move(l));
  }
  // Endpoint ids are not stored; adopt the legs' ids where the coordinates agree.
  auto adopt = [](Location& endpoint, const Location& leg_end) {
    if (std::abs(endpoint.x_km - leg_end.x_km) < 1e-9 && std::abs(endpoint.y_km - leg_end.y_km) < 1e-9) {
      endpoint = leg_end;
    }
  };
  for (auto& [id, p] : out) {
    adopt(p.request.origin, p.legs.front().from);
    adopt(p.request.destination, p.legs.back().to);
  }
  return out;
}

std::string format_summary(const World& world, const RunResult& r) {
  const RunSummary& s = r.summary;
  std::ostringstream out;
  out << "scenario = " << world.scenario.name << '\n'
      << "scenario_hash = " << scenario_hash(world.scenario) << '\n'
      << "seed = " << world.seed << '\n'
      << "requests = " << s.requests << '\n'
      << "served = " << s.served << '\n'
      << "unservable = " << s.unservable << '\n'
      << "welfare = " << format_double(s.welfare) << '\n'
      << "mean_travel_min = " << format_double(s.mean_travel_min) << '\n'
      << "mean_wait_min = " << format_double(s.mean_wait_min) << '\n'
      << "mean_ride_wait_min = " << format_double(s.mean_ride_wait_min) << '\n'
      << "mean_walk_min = " << format_double(s.mean_walk_min) << '\n'
      << "mean_money = " << format_double(s.mean_money) << '\n'
      << "busy_micro_peak = " << s.busy_micro_peak << '\n'
      << "violations = " << r.violations.size() << '\n'
      << "horizon_warnings = " << r.warnings.size() << '\n';
  for (std::size_t k = 0; k < kAlternativeKindCount; ++k) {
    const auto kind = static_cast<AlternativeKind>(k);
    out << "share." << to_string(kind) << " = " << format_double(s.all.kind_share(kind)) << '\n';
  }
  for (const auto& [sig, n] : s.all.signatures) out << "count." << sig << " = " << n << '\n';
  for (const auto& [profile, g] : s.by_profile) {
    for (const auto& [sig, n] : g.signatures) {
      out << "profile." << profile << '.' << sig << " = " << n << '\n';
    }
  }
  return out.str();
}

std::map<std::string, std::string> parse_summary(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

void write_run_outputs(const std::filesystem::path& dir, const World& world,
                       const RunResult& result) {
  write_text_file(dir / "events.csv", format_events(result.events));
  write_text_file(dir / "plans.csv", format_plans(result.state));
  write_text_file(dir / "requests.csv", format_requests(result.requests));
  write_text_file(dir / "summary.txt", format_summary(world, result));
  std::string feas = format_violations(result.violations);
  for (const auto& w : result.warnings) feas += "warning\thorizon\t" + w + '\n';
  write_text_file(dir / "feasibility.txt", feas);
}

std::vector<std::string> validate_outputs(const std::filesystem::path& dir, const World* world) {
  std::vector<std::string> problems;
  const auto events = parse_events(read_text_file(dir / "events.csv"));
  const auto plans = parse_plans(read_text_file(dir / "plans.csv"));
  const auto requests = parse_requests(read_text_file(dir / "requests.csv"));
  const auto summary = parse_summary(read_text_file(dir / "summary.txt"));
  const auto feas = parse_violations(read_text_file(dir / "feasibility.txt"));

  auto expect = [&](bool ok, std::string what) {
    if (!ok) problems.push_back(std::move(what));
  };
  auto field = [&](const std::string& key) -> std::string {
    auto it = summary.find(key);
    if (it == summary.end()) {
      problems.push_back("summary.txt lacks " + key);
      return "0";
    }
    return it->second;
  };

  expect(events.size() == requests.size(), "events.csv and requests.csv differ in length");
  std::size_t served = 0;
  for (const auto& e : events) {
    served += e.served ? 1 : 0;
    expect(e.served == plans.contains(e.request),
           "request " + std::to_string(e.request) + " served flag disagrees with plans.csv");
  }
  expect(std::to_string(served) == field("served"), "served count disagrees with summary.txt");
  expect(std::to_string(requests.size()) == field("requests"), "request count disagrees");

  double welfare = 0.0;
  for (const auto& [id, p] : plans) {
    welfare += p.utility;
    for (const auto& m : validate_plan_chaining(p)) {
      problems.push_back("request " + std::to_string(id) + ": " + m);
    }
    expect(p.transferred == compute_transferred(p.legs),
           "request " + std::to_string(id) + ": transferred flag disagrees with legs");
    if (world) {
      const double u = plan_utility(world->profiles.get(p.request.profile), p);
      expect(std::abs(u - p.utility) < 1e-9,
             "request " + std::to_string(id) + ": utility does not match the preference table");
    }
  }
  const double reported = parse_double(field("welfare"));
  expect(std::abs(welfare - reported) < 1e-6, "welfare differs from the sum of plan utilities");
  if (!events.empty()) {
    expect(std::abs(events.back().welfare_after - reported) < 1e-6,
           "final running welfare differs from summary.txt");
  }
  std::size_t violations = 0;
  for (const auto& v : feas) violations += v.family == "warning" ? 0 : 1;
  expect(std::to_string(violations) == field("violations"),
         "feasibility.txt disagrees with the violation count");
  if (world) {
    expect(field("scenario_hash") == std::to_string(scenario_hash(world->scenario)),
           "outputs were produced by a different scenario");
  }
  return problems;
}

}  // namespace multiplan
