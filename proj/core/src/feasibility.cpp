#include "multiplan/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "multiplan/csv.hpp"

namespace multiplan {

namespace {

constexpr double kTol = 1e-9;

std::string req(RequestId id) { return "request " + std::to_string(id); }
std::string veh(VehicleId id) { return "vehicle " + std::to_string(id); }

struct Checker {
  const World& world;
  const SolutionState& state;
  std::vector<Violation> out;

  void add(std::string family, std::string subject, std::string message) {
    out.push_back({std::move(family), std::move(subject), std::move(message)});
  }

  void service_level(std::span<const Request> requests) {
    std::map<RequestId, const Request*> known;
    for (const auto& r : requests) known[r.id] = &r;
    for (const auto& [id, plan] : state.plans) {
      if (!known.contains(id)) add("unknown_request", req(id), "plan for a request not in R");
      if (state.unservable.contains(id)) add("unknown_request", req(id), "planned and unservable");
    }
    const double eps = world.scenario.planner.service_level;
    if (!requests.empty()) {
      const double level =
          static_cast<double>(state.plans.size()) / static_cast<double>(requests.size());
      if (level + kTol < eps) {
        add("service_level", "all", "served " + std::to_string(state.plans.size()) + " of " +
                                        std::to_string(requests.size()));
      }
    }
  }

  void plan_structure(const TripPlan& plan) {
    const std::string who = req(plan.request.id);
    for (const auto& m : validate_plan_chaining(plan)) add("chaining", who, m);
    if (plan.transferred != compute_transferred(plan.legs)) {
      add("transfer_flag", who, "g_r does not match the legs");
    }
    const double u = plan_utility(world.profile(plan.request), plan);
    if (std::abs(u - plan.utility) > 1e-6) add("utility", who, "stored utility is stale");

    // Non-walk legs in order; shared or private legs may only meet PT.
    std::vector<const TripLeg*> moving;
    for (const auto& leg : plan.legs) {
      if (leg.mode != Mode::walk) moving.push_back(&leg);
    }
    std::map<LocationId, int> transfers_at;
    for (std::size_t i = 0; i + 1 < moving.size(); ++i) {
      const TripLeg& a = *moving[i];
      const TripLeg& b = *moving[i + 1];
      if (a.mode != Mode::pt && b.mode != Mode::pt) {
        add("transfer_rules", who, "transfer between two non-PT legs");
      }
      const Location& at = a.mode == Mode::pt ? a.to : b.from;
      if (a.mode == Mode::pt || b.mode == Mode::pt) {
        const Location& stop = a.mode == Mode::pt ? a.to : b.from;
        if (stop.kind != LocationKind::pt_stop) add("transfer_rules", who, "transfer away from a PT stop");
      }
      if (++transfers_at[at.id] > 1) add("transfer_rules", who, "two transfers at one location");
    }
    for (const auto* leg : moving) {
      if (is_private(leg->mode) && moving.size() > 1) {
        add("transfer_rules", who, "private vehicle combined with another mode");
      }
    }
  }

  void leg_times(const TripPlan& plan) {
    const std::string who = req(plan.request.id);
    const auto& cfg = world.scenario.private_modes;
    for (std::size_t i = 0; i < plan.legs.size(); ++i) {
      const TripLeg& leg = plan.legs[i];
      const std::string where = who + " leg " + std::to_string(i);
      Seconds need = 0;
      switch (leg.mode) {
        case Mode::walk: need = world.walk_time(plan.request, leg.from, leg.to); break;
        case Mode::pt: pt_leg(leg, where); continue;
        case Mode::ridepool: {
          const Vehicle& v = world.vehicle(leg.vehicle);
          need = world.network.travel(Mode::ridepool, v.speed_kmh, leg.from, leg.to);
          const double cost = leg_cost(v, to_minutes(leg.duration()), leg.distance_km);
          if (std::abs(cost - leg.money_cost) > kTol) add("leg_cost", where, "ride-pool fare mismatch");
          break;
        }
        case Mode::shared_bike:
        case Mode::shared_scooter: {
          const Vehicle& v = world.vehicle(leg.vehicle);
          need = world.network.travel(v.mode, v.speed_kmh, leg.from, leg.to) +
                 world.scenario.fleet.lock_unlock;
          if (v.mode != leg.mode) add("micro_vehicle", where, "leg mode differs from the vehicle");
          break;
        }
        case Mode::private_car:
          need = world.network.travel(Mode::private_car, cfg.car_speed_kmh, leg.from, leg.to) +
                 cfg.parking_search;
          break;
        case Mode::private_bike:
          need = world.network.travel(Mode::private_bike, cfg.bike_speed_kmh, leg.from, leg.to);
          break;
        case Mode::private_scooter:
          need = world.network.travel(Mode::private_scooter, cfg.scooter_speed_kmh, leg.from, leg.to);
          break;
      }
      if (leg.duration() < need) {
        add("leg_duration", where,
            "takes " + std::to_string(leg.duration()) + " s, needs " + std::to_string(need));
      }
      if (is_private(leg.mode) && !cfg.ownership(plan.request.profile).contains(leg.mode)) {
        add("ownership", where, "uses a private vehicle the traveller does not own");
      }
    }
  }

  void pt_leg(const TripLeg& leg, const std::string& where) {
    const auto& tt = world.timetable;
    const auto idx = tt.trip_index(leg.pt_trip);
    if (!idx) {
      add("pt_timetable", where, "unknown trip " + leg.pt_trip);
      return;
    }
    const PtTrip& trip = tt.trips()[*idx];
    std::optional<std::size_t> board, alight;
    for (std::size_t k = 0; k < trip.stop_times.size(); ++k) {
      const auto& st = trip.stop_times[k];
      const Location& loc = tt.stops()[st.stop].location;
      if (!board && same_place(loc, leg.from) && st.depart == leg.depart) board = k;
      else if (board && same_place(loc, leg.to) && st.arrive == leg.arrive) {
        alight = k;
        break;
      }
    }
    if (!board || !alight) {
      add("pt_timetable", where, "does not match trip " + leg.pt_trip);
      return;
    }
    const double km = trip.cum_km[*alight] - trip.cum_km[*board];
    if (std::abs(tt.fare_rule().fare(km) - leg.money_cost) > kTol) {
      add("leg_cost", where, "PT fare mismatch");
    }
  }

  void ridepool() {
    const RideModel model = ride_model(world, state);
    std::map<int, std::pair<Seconds, VehicleId>> pickups, dropoffs;
    for (const auto& route : state.routes) {
      const Vehicle& v = world.vehicle(route.vehicle);
      const std::string who = veh(v.id);
      std::vector<RouteStop> all;
      if (auto it = state.route_history.find(v.id); it != state.route_history.end()) all = it->second;
      all.insert(all.end(), route.stops.begin(), route.stops.end());
      Location prev = v.depot.value_or(route.anchor);
      Seconds clock = world.scenario.horizon.start;
      int load = 0;
      for (const auto& s : all) {
        const auto tit = state.ride_tasks.find(s.task);
        if (tit == state.ride_tasks.end()) {
          add("ride_task", who, "stop for unknown task " + std::to_string(s.task));
          continue;
        }
        const RideTask& task = tit->second;
        if (s.service < clock + model.travel(v, prev, s.where)) {
          add("ride_timing", who, "reaches task " + std::to_string(task.id) + " too early");
        }
        if (s.kind == StopKind::pickup) {
          if (s.service < task.ready) add("ride_timing", who, "pickup before the ready time");
          if (!pickups.emplace(task.id, std::pair{s.service, v.id}).second) {
            add("ride_task", who, "task picked up twice");
          }
          load += task.load;
        } else {
          if (!pickups.contains(task.id)) add("ride_precedence", who, "dropoff before pickup");
          if (s.service > task.deadline) add("ride_promise", who, "dropoff later than promised");
          dropoffs.emplace(task.id, std::pair{s.service, v.id});
          load -= task.load;
        }
        if (load > v.capacity) add("ride_capacity", who, "load " + std::to_string(load));
        clock = s.service;
        prev = s.where;
      }
    }
    for (const auto& [id, task] : state.ride_tasks) {
      const std::string who = req(task.request);
      if (!pickups.contains(id) || !dropoffs.contains(id)) {
        add("ride_task", who, "task " + std::to_string(id) + " not fully routed");
        continue;
      }
      const auto pit = state.plans.find(task.request);
      if (pit == state.plans.end()) {
        add("ride_task", who, "ride task without a plan");
        continue;
      }
      const auto& legs = pit->second.legs;
      const TripLeg& leg = task.access ? legs.front() : legs.back();
      if (leg.mode != Mode::ridepool || leg.vehicle != pickups[id].second ||
          leg.depart != pickups[id].first || leg.arrive != dropoffs[id].first) {
        add("ride_plan_mismatch", who, "plan leg disagrees with the vehicle schedule");
      }
    }
    for (const auto& [id, plan] : state.plans) {
      int rides = 0;
      for (const auto& leg : plan.legs) rides += leg.mode == Mode::ridepool ? 1 : 0;
      int tasks = 0;
      for (bool access : {true, false}) {
        tasks += state.ride_tasks.contains(RideTask::make_id(id, access)) ? 1 : 0;
      }
      if (rides != tasks) add("ride_plan_mismatch", req(id), "ride legs without ride tasks");
    }
  }

  void micromobility() {
    std::map<VehicleId, std::vector<const Reservation*>> by_vehicle;
    for (const auto& r : state.reservations) by_vehicle[r.vehicle].push_back(&r);
    for (const auto& [id, status] : state.micro) {
      const Vehicle& v = world.vehicle(id);
      const std::string who = veh(id);
      auto& list = by_vehicle[id];
      std::ranges::stable_sort(list, {}, &Reservation::start);
      Location at = world.micro_start.at(id);
      Seconds free_after = -1;
      bool first = true;
      for (const Reservation* r : list) {
        if (!same_place(r->from, at)) add("micro_location", who, "ride starts away from the vehicle");
        if (!first && r->start <= free_after) add("micro_exclusive", who, "overlapping reservations");
        if (v.docking == Docking::dock_based &&
            (r->from.kind != LocationKind::bike_station || r->to.kind != LocationKind::bike_station)) {
          add("micro_dock", who, "dock-based vehicle used away from a dock");
        }
        at = r->to;
        free_after = r->end;
        first = false;
      }
      const bool should_be_busy = !list.empty() && list.back()->end >= state.clock;
      if (status.busy != should_be_busy) add("micro_status", who, "busy flag disagrees with reservations");
      if (!same_place(status.location, at)) add("micro_status", who, "location disagrees with reservations");
    }
    std::size_t legs = 0;
    for (const auto& [id, plan] : state.plans) {
      for (const auto& leg : plan.legs) {
        if (!is_micromobility(leg.mode)) continue;
        ++legs;
        const bool found = std::ranges::any_of(state.reservations, [&](const Reservation& r) {
          return r.vehicle == leg.vehicle && r.request == id && r.end == leg.arrive &&
                 same_place(r.from, leg.from) && same_place(r.to, leg.to) &&
                 r.start <= leg.depart;
        });
        if (!found) add("micro_reservation", req(id), "ride leg without a matching reservation");
      }
    }
    if (legs != state.reservations.size()) {
      add("micro_reservation", "all", "reservation count differs from micromobility legs");
    }
  }

  void welfare() {
    if (std::abs(social_welfare(world, state) - state.welfare) > 1e-6) {
      add("welfare", "all", "running welfare differs from the sum of plan utilities");
    }
  }
};

}  // namespace

std::vector<Violation> check_state(const World& world, const SolutionState& state,
                                   std::span<const Request> requests) {
  Checker c{world, state, {}};
  c.service_level(requests);
  for (const auto& [id, plan] : state.plans) {
    c.plan_structure(plan);
    c.leg_times(plan);
  }
  c.ridepool();
  c.micromobility();
  c.welfare();
  return std::move(c.out);
}

std::vector<Violation> check_transition(const SolutionState& before, const SolutionState& after,
                                        RequestId request) {
  std::vector<Violation> out;
  auto add = [&](std::string f, std::string s, std::string m) {
    out.push_back({std::move(f), std::move(s), std::move(m)});
  };
  const bool planned = after.plans.contains(request);
  if (planned == after.unservable.contains(request)) {
    add("history", req(request), "decision must be exactly one of planned or unservable");
  }
  if (before.plans.contains(request) || before.unservable.contains(request)) {
    add("history", req(request), "request decided twice");
  }
  if (after.plans.size() + after.unservable.size() != before.plans.size() + before.unservable.size() + 1) {
    add("history", "all", "more than one decision in a step");
  }
  for (const auto& [id, old] : before.plans) {
    const auto it = after.plans.find(id);
    if (it == after.plans.end()) {
      add("history", req(id), "committed plan removed");
      continue;
    }
    const auto& now = it->second;
    if (now.legs.size() != old.legs.size() || now.kind != old.kind ||
        now.decided_at != old.decided_at) {
      add("history", req(id), "committed plan restructured");
      continue;
    }
    for (std::size_t i = 0; i < old.legs.size(); ++i) {
      const TripLeg& a = old.legs[i];
      const TripLeg& b = now.legs[i];
      if (a.mode == Mode::ridepool) {
        if (b.mode != a.mode || b.vehicle != a.vehicle || b.arrive > a.arrive ||
            !same_place(a.from, b.from) || !same_place(a.to, b.to)) {
          add("history", req(id), "ride-pool leg changed beyond a pickup shift");
        }
        if (a.depart < after.clock && b.depart != a.depart) {
          add("history", req(id), "past pickup moved");
        }
      } else if (a.depart != b.depart || a.arrive != b.arrive || a.vehicle != b.vehicle ||
                 a.pt_trip != b.pt_trip || a.mode != b.mode || !same_place(a.from, b.from) ||
                 !same_place(a.to, b.to)) {
        add("history", req(id), "committed leg " + std::to_string(i) + " changed");
      }
    }
  }
  for (const auto& [v, hist] : before.route_history) {
    const auto it = after.route_history.find(v);
    if (it == after.route_history.end() || it->second.size() < hist.size() ||
        !std::equal(hist.begin(), hist.end(), it->second.begin(), [](const auto& a, const auto& b) {
          return a.task == b.task && a.kind == b.kind && a.service == b.service;
        })) {
      add("history", veh(v), "served stops rewritten");
    }
  }
  if (after.reservations.size() < before.reservations.size() ||
      !std::equal(before.reservations.begin(), before.reservations.end(),
                  after.reservations.begin(), [](const Reservation& a, const Reservation& b) {
                    return a.vehicle == b.vehicle && a.request == b.request &&
                           a.start == b.start && a.end == b.end;
                  })) {
    add("history", "all", "micromobility reservations rewritten");
  }
  return out;
}

std::vector<std::string> horizon_warnings(const World& world, const SolutionState& state) {
  std::vector<std::string> out;
  for (const auto& [id, plan] : state.plans) {
    if (plan.last_arrive() > world.scenario.horizon.end) {
      out.push_back(req(id) + " arrives at " + format_clock(plan.last_arrive()) +
                    ", after the horizon end " + format_clock(world.scenario.horizon.end));
    }
  }
  return out;
}

std::string format_violations(std::span<const Violation> violations) {
  std::string out;
  for (const auto& v : violations) out += v.family + '\t' + v.subject + '\t' + v.message + '\n';
  return out;
}

std::vector<Violation> parse_violations(std::string_view text) {
  std::vector<Violation> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto a = line.find('\t');
    const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos) {
      throw LoadError("violation line " + std::to_string(n) + " needs three tab-separated fields");
    }
    out.push_back({line.substr(0, a), line.substr(a + 1, b - a - 1), line.substr(b + 1)});
  }
  return out;
}

}  // namespace multiplan
