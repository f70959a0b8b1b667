#include "multiplan/integrated.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "multiplan/unimodal.hpp"

namespace multiplan {

namespace {

constexpr double kEps = 1e-12;

struct FastestBound {
  std::vector<std::pair<Mode, double>> fleets;  // mode, top speed
  Seconds lock = 0;
};

FastestBound fastest_bound(const World& world, const Request& r) {
  FastestBound b;
  b.lock = world.scenario.fleet.lock_unlock;
  for (Mode m : {Mode::shared_bike, Mode::shared_scooter, Mode::ridepool}) {
    if (m != Mode::ridepool && r.party_size != 1) continue;
    double top = 0.0;
    for (VehicleId id : world.fleet_of(m)) top = std::max(top, world.vehicle(id).speed_kmh);
    if (top > 0.0) b.fleets.emplace_back(m, top);
  }
  return b;
}

// Fastest way any mode the request could use covers a -> b.
std::pair<Mode, Seconds> fastest_leg(const World& world, const Request& r, const FastestBound& fb,
                                     const Location& a, const Location& b) {
  std::pair<Mode, Seconds> best{Mode::walk, world.walk_time(r, a, b)};
  for (const auto& [m, speed] : fb.fleets) {
    Seconds t = world.network.travel(m, speed, a, b);
    if (m != Mode::ridepool) t += fb.lock;
    if (t < best.second) best = {m, t};
  }
  return best;
}

Seconds lower_bound_time(const World& world, const Request& r, const FastestBound& fb,
                         const Location& a, const Location& b) {
  return fastest_leg(world, r, fb, a, b).second;
}

double fleet_fixed_cost(const World& world, Mode m) {
  for (VehicleId id : world.fleet_of(m)) return world.vehicle(id).cost_fixed;
  return 0.0;
}

}  // namespace

ConnectionSearch ConnectionSearch::from(const PlannerConfig& c) {
  ConnectionSearch s;
  s.radius_km = c.station_radius_km;
  s.beam = c.connection_beam;
  s.max_transfers = c.max_pt_transfers;
  s.rank_by_utility = c.rank_connections_by_utility;
  return s;
}

ConnectionSearch ConnectionSearch::exhaustive(const PlannerConfig& c) {
  ConnectionSearch s = from(c);
  s.beam = 0;
  s.all_trips = true;
  return s;
}

std::vector<TripLeg> pt_legs(const World& world, const PtConnection& c) {
  const auto& tt = world.timetable;
  std::vector<TripLeg> legs;
  for (const auto& ride : c.rides) {
    const PtTrip& trip = tt.trips()[ride.trip];
    const auto& b = trip.stop_times[ride.board];
    const auto& a = trip.stop_times[ride.alight];
    TripLeg leg;
    leg.mode = Mode::pt;
    leg.pt_trip = trip.id;
    leg.pt_class = tt.trip_class(trip);
    leg.from = tt.stops()[b.stop].location;
    leg.to = tt.stops()[a.stop].location;
    leg.depart = b.depart;
    leg.arrive = a.arrive;
    leg.distance_km = trip.cum_km[ride.alight] - trip.cum_km[ride.board];
    leg.money_cost = tt.fare_rule().fare(leg.distance_km);
    leg.is_main = true;
    legs.push_back(std::move(leg));
  }
  return legs;
}

std::vector<PtConnection> find_pt_connections(const World& world, const Request& r, Seconds t,
                                              const ConnectionSearch& search) {
  const auto& tt = world.timetable;
  const auto& stops = tt.stops();
  const auto& trips = tt.trips();
  const Seconds start = std::max(r.earliest, t);
  const FastestBound fb = fastest_bound(world, r);

  std::vector<std::size_t> near_origin;
  std::vector<Seconds> egress_lb(stops.size(), -1);  // -1: not near the destination
  for (std::size_t s = 0; s < stops.size(); ++s) {
    const Location& loc = stops[s].location;
    if (euclidean_km(r.origin, loc) <= search.radius_km + kEps) near_origin.push_back(s);
    if (euclidean_km(r.destination, loc) <= search.radius_km + kEps) {
      egress_lb[s] = lower_bound_time(world, r, fb, loc, r.destination);
    }
  }

  // Route direction of a boarding: route plus the next stop served.
  auto direction = [&](const PtTrip& trip, std::size_t seq) {
    return std::pair{trip.route, trip.stop_times[seq + 1].stop};
  };

  std::vector<PtConnection> out;
  auto emit = [&](std::vector<PtRide> rides) {
    PtConnection c;
    c.rides = std::move(rides);
    const auto& first = trips[c.rides.front().trip];
    const auto& last = trips[c.rides.back().trip];
    c.board_stop = first.stop_times[c.rides.front().board].stop;
    c.board_time = first.stop_times[c.rides.front().board].depart;
    c.alight_stop = last.stop_times[c.rides.back().alight].stop;
    c.alight_time = last.stop_times[c.rides.back().alight].arrive;
    for (const auto& ride : c.rides) {
      const auto& tr = trips[ride.trip];
      c.fare += tt.fare_rule().fare(tr.cum_km[ride.alight] - tr.cum_km[ride.board]);
    }
    out.push_back(std::move(c));
  };

  for (std::size_t sp : near_origin) {
    const Location& board_loc = stops[sp].location;
    const Seconds fast = start + lower_bound_time(world, r, fb, r.origin, board_loc);
    const Seconds walk = start + world.walk_time(r, r.origin, board_loc);
    std::set<std::pair<std::size_t, std::size_t>> seen_fast, seen_walk;
    for (const auto& v : tt.visits(sp)) {
      const PtTrip& trip = trips[v.trip];
      const Seconds dep = trip.stop_times[v.seq].depart;
      if (dep < fast) continue;
      if (dep > r.latest) break;
      if (v.seq + 1 >= trip.stop_times.size()) continue;
      if (!search.all_trips) {
        const auto key = direction(trip, v.seq);
        bool take = seen_fast.insert(key).second;
        if (dep >= walk) take = seen_walk.insert(key).second || take;
        if (!take) continue;
      }
      for (std::size_t k = v.seq + 1; k < trip.stop_times.size(); ++k) {
        const auto& st = trip.stop_times[k];
        if (st.arrive > r.latest) break;
        const std::size_t x = st.stop;
        if (x == sp) break;  // loop lines come back round
        if (egress_lb[x] >= 0) {
          if (st.arrive + egress_lb[x] <= r.latest) emit(std::vector<PtRide>{{v.trip, v.seq, k}});
          continue;  // alighting here dominates riding on to transfer
        }
        if (search.max_transfers < 1) continue;
        const auto& xv = tt.visits(x);
        auto it = std::ranges::lower_bound(xv, st.arrive, {}, [&](const PTTimetable::Visit& w) {
          return trips[w.trip].stop_times[w.seq].depart;
        });
        std::set<std::pair<std::size_t, std::size_t>> seen_second;
        for (; it != xv.end(); ++it) {
          const PtTrip& t2 = trips[it->trip];
          if (t2.stop_times[it->seq].depart > r.latest) break;
          if (t2.route == trip.route || it->seq + 1 >= t2.stop_times.size()) continue;
          if (!search.all_trips && !seen_second.insert(direction(t2, it->seq)).second) continue;
          for (std::size_t k2 = it->seq + 1; k2 < t2.stop_times.size(); ++k2) {
            const auto& s2 = t2.stop_times[k2];
            if (s2.arrive > r.latest) break;
            if (s2.stop == x) break;
            if (egress_lb[s2.stop] >= 0 && s2.arrive + egress_lb[s2.stop] <= r.latest) {
              emit(std::vector<PtRide>{{v.trip, v.seq, k}, {it->trip, it->seq, k2}});
            }
          }
        }
      }
    }
  }

  // Estimated utility for ranking: walking at both ends where the walk fits
  // the window, otherwise the fastest shared mode at its fixed fare.
  const ProfileParams& prof = world.profile(r);
  auto side = [&](const Location& from, const Location& to, Seconds anchor, bool access) {
    const Seconds w = world.walk_time(r, from, to);
    Mode m = Mode::walk;
    Seconds d = w;
    if (access ? anchor - w < start : anchor + w > r.latest) {
      std::tie(m, d) = fastest_leg(world, r, fb, from, to);
    }
    const Seconds dep = access ? anchor - d : anchor;
    const double cost = m == Mode::walk ? 0.0 : fleet_fixed_cost(world, m);
    return TripLeg{m, kNoVehicle, {}, PtClass::none, from, to, dep, dep + d, 0.0, cost, false};
  };
  for (auto& c : out) {
    TripPlan p;
    p.request = r;
    const Location& b = stops[c.board_stop].location;
    const Location& a = stops[c.alight_stop].location;
    if (!same_place(r.origin, b)) p.legs.push_back(side(r.origin, b, c.board_time, true));
    for (auto& leg : pt_legs(world, c)) p.legs.push_back(std::move(leg));
    if (!same_place(a, r.destination)) p.legs.push_back(side(a, r.destination, c.alight_time, false));
    p.transferred = compute_transferred(p.legs);
    c.estimate = plan_utility(prof, p);
  }
  auto order = [&](const PtConnection& x, const PtConnection& y) {
    if (search.rank_by_utility && std::abs(x.estimate - y.estimate) > 1e-9) {
      return x.estimate > y.estimate;
    }
    return std::tie(x.alight_time, x.fare, x.board_stop, x.alight_stop) <
           std::tie(y.alight_time, y.fare, y.board_stop, y.alight_stop);
  };
  std::ranges::stable_sort(out, order);
  if (search.beam > 0 && out.size() > static_cast<std::size_t>(search.beam)) {
    out.resize(static_cast<std::size_t>(search.beam));
  }
  return out;
}

Segments segment_request(const World& world, const Request& r, const PtConnection& c,
                         Seconds t) {
  const Location& b = world.timetable.stops()[c.board_stop].location;
  const Location& a = world.timetable.stops()[c.alight_stop].location;
  Segments s;
  s.access = {r.origin, b, std::max(r.earliest, t), c.board_time, !same_place(r.origin, b)};
  s.egress = {a, r.destination, c.alight_time, r.latest, !same_place(a, r.destination)};
  return s;
}

bool candidate_before(const Candidate& a, const Candidate& b) {
  if (std::abs(a.score - b.score) > 1e-9) return a.score > b.score;
  return tie_rank(a.plan.kind) < tie_rank(b.plan.kind);
}

namespace {

RideTask base_task(const World& world, const Request& r, const SubRequest& s) {
  const ProfileParams& p = world.profile(r);
  RideTask t;
  t.request = r.id;
  t.pickup = s.from;
  t.dropoff = s.to;
  t.ready = s.earliest;
  t.deadline = s.latest;
  t.load = r.party_size;
  t.beta_sub_time = p.beta_sub_time;
  t.beta_sub_cost = p.beta_sub_cost;
  t.beta_pt_wait = p.beta_pt_wait;
  t.direct_km = world.network.distance_km(Mode::ridepool, s.from, s.to);
  return t;
}

}  // namespace

RideTask make_access_task(const World& world, const Request& r, const SubRequest& s,
                          Seconds board_time) {
  RideTask t = base_task(world, r, s);
  t.id = RideTask::make_id(r.id, true);
  t.access = true;
  t.next_board = board_time;
  return t;
}

RideTask make_egress_task(const World& world, const Request& r, const SubRequest& s) {
  RideTask t = base_task(world, r, s);
  t.id = RideTask::make_id(r.id, false);
  return t;
}

TripLeg ride_leg(const World& world, const RideModel& model,
                 const std::vector<RidepoolRoute>& routes, const RideTask& task) {
  for (const auto& route : routes) {
    auto p = model.pickup_time(route, task.id);
    auto d = model.dropoff_time(route, task.id);
    if (!d || !p) continue;
    const Vehicle& v = world.vehicle(route.vehicle);
    TripLeg leg;
    leg.mode = Mode::ridepool;
    leg.vehicle = v.id;
    leg.from = task.pickup;
    leg.to = task.dropoff;
    leg.depart = *p;
    leg.arrive = *d;
    leg.distance_km = task.direct_km;
    leg.money_cost = leg_cost(v, to_minutes(*d - *p), task.direct_km);
    return leg;
  }
  throw std::logic_error("ride task " + std::to_string(task.id) + " is not on any route");
}

namespace {

enum class SideClass : std::uint8_t { walk, bike, scooter, ride };

struct SideOption {
  SideClass cls = SideClass::walk;
  std::vector<TripLeg> legs;
  VehicleId micro = kNoVehicle;
  double rank = 0.0;
};

struct RideOutcome {
  std::vector<RidepoolRoute> routes;
  std::vector<RideTask> tasks;
  std::vector<TripLeg> legs;  // parallel to tasks
  double others_delta = 0.0;
};

// Keeps the two best micromobility options per fleet; with additive utility
// that is enough to pair them with any option on the other side.
void keep_top_micro(std::vector<SideOption>& opts) {
  std::vector<SideOption> kept;
  for (SideClass cls : {SideClass::walk, SideClass::bike, SideClass::scooter, SideClass::ride}) {
    std::vector<SideOption*> of;
    for (auto& o : opts) {
      if (o.cls == cls) of.push_back(&o);
    }
    std::ranges::stable_sort(of, [](auto* a, auto* b) { return a->rank > b->rank + kEps; });
    const std::size_t keep = (cls == SideClass::bike || cls == SideClass::scooter) ? 2 : of.size();
    for (std::size_t i = 0; i < of.size() && i < keep; ++i) kept.push_back(std::move(*of[i]));
  }
  opts = std::move(kept);
}

}  // namespace

std::vector<Candidate> plan_integrated(const World& world, const SolutionState& state,
                                       const Request& r, Seconds t, RidepoolSolver& solver,
                                       const IntegratedOptions& options) {
  std::vector<Candidate> out;
  // The walk-based estimate cannot tell which connections are reachable at
  // all, so the beam counts connections that produced a candidate.
  ConnectionSearch search = options.search;
  const int beam = search.beam;
  search.beam = 0;
  const auto connections = find_pt_connections(world, r, t, search);
  if (connections.empty()) return out;
  int productive = 0;

  const bool have_rides = !state.routes.empty();
  const double incumbent_value = ride_model(world, state).objective(state.routes, 0);

  // Access rides differ by boarding stop and time, egress rides by alighting stop and time.
  using RideKey = std::tuple<LocationId, Seconds, LocationId, Seconds>;
  std::map<RideKey, std::optional<RideOutcome>> ride_cache;
  auto solve_rides = [&](const std::vector<RideTask>& tasks) -> const std::optional<RideOutcome>& {
    RideKey key{-1, 0, -1, 0};
    for (const auto& task : tasks) {
      if (task.access) {
        std::get<0>(key) = task.dropoff.id;
        std::get<1>(key) = task.deadline;
      } else {
        std::get<2>(key) = task.pickup.id;
        std::get<3>(key) = task.ready;
      }
    }
    if (auto it = ride_cache.find(key); it != ride_cache.end()) return it->second;
    RideModel model = ride_model(world, state, tasks);
    std::vector<int> pool;
    for (const auto& task : tasks) pool.push_back(task.id);
    RideSolution sol = solver.solve(model, state.routes, pool);
    std::optional<RideOutcome> result;
    if (sol.unserved.empty()) {
      RideOutcome o;
      o.tasks = tasks;
      double own = 0.0;
      for (const auto& task : tasks) {
        TripLeg leg = ride_leg(world, model, sol.routes, task);
        own += model.task_value(task, world.vehicle(leg.vehicle), leg.depart, leg.arrive);
        o.legs.push_back(std::move(leg));
      }
      o.others_delta = model.objective(sol.routes, 0) - own - incumbent_value;
      o.routes = std::move(sol.routes);
      result = std::move(o);
    }
    return ride_cache.emplace(key, std::move(result)).first->second;
  };

  for (const auto& c : connections) {
    if (beam > 0 && productive >= beam) break;
    const Segments seg = segment_request(world, r, c, t);
    const std::vector<TripLeg> pt = pt_legs(world, c);

    auto rank_side = [&](std::vector<TripLeg> side, bool access) {
      TripPlan p;
      p.request = r;
      if (access) {
        p.legs = std::move(side);
        p.legs.insert(p.legs.end(), pt.begin(), pt.end());
      } else {
        p.legs = pt;
        p.legs.insert(p.legs.end(), side.begin(), side.end());
      }
      p.transferred = compute_transferred(p.legs);
      return plan_utility(world.profile(r), p);
    };

    auto side_options = [&](const SubRequest& s, bool access) {
      std::vector<SideOption> opts;
      if (!s.needed) {
        opts.push_back({SideClass::walk, {}, kNoVehicle, 0.0});
        return opts;
      }
      const Seconds w = world.walk_time(r, s.from, s.to);
      const Seconds depart = access ? s.latest - w : s.earliest;
      if (depart >= s.earliest && depart + w <= s.latest) {
        TripLeg leg{Mode::walk, kNoVehicle, {}, PtClass::none, s.from, s.to, depart, depart + w,
                    world.network.distance_km(Mode::walk, s.from, s.to), 0.0, false};
        opts.push_back({SideClass::walk, {leg}, kNoVehicle, 0.0});
      }
      const MicroLegRequest q{s.from, s.to, s.earliest, s.latest, access, false};
      for (const auto& [id, status] : state.micro) {
        auto trip = plan_micro_trip(world, state, r, id, q);
        if (!trip) continue;
        const SideClass cls =
            world.vehicle(id).mode == Mode::shared_bike ? SideClass::bike : SideClass::scooter;
        opts.push_back({cls, std::move(trip->legs), id, 0.0});
      }
      if (have_rides) opts.push_back({SideClass::ride, {}, kNoVehicle, 0.0});
      for (auto& o : opts) {
        if (o.cls == SideClass::bike || o.cls == SideClass::scooter) o.rank = rank_side(o.legs, access);
      }
      keep_top_micro(opts);
      return opts;
    };

    const auto access = side_options(seg.access, true);
    const auto egress = side_options(seg.egress, false);
    const RideTask access_task = make_access_task(world, r, seg.access, c.board_time);
    const RideTask egress_task = make_egress_task(world, r, seg.egress);

    std::optional<Candidate> best;
    bool any = false;
    for (const auto& a : access) {
      for (const auto& e : egress) {
        if (a.micro != kNoVehicle && a.micro == e.micro) continue;
        std::vector<RideTask> tasks;
        if (a.cls == SideClass::ride) tasks.push_back(access_task);
        if (e.cls == SideClass::ride) tasks.push_back(egress_task);
        const RideOutcome* ride = nullptr;
        if (!tasks.empty()) {
          const auto& o = solve_rides(tasks);
          if (!o) continue;
          ride = &*o;
        }
        Candidate cand;
        cand.plan.request = r;
        auto& legs = cand.plan.legs;
        std::size_t next_ride = 0;
        if (a.cls == SideClass::ride) legs.push_back(ride->legs[next_ride++]);
        else legs.insert(legs.end(), a.legs.begin(), a.legs.end());
        legs.insert(legs.end(), pt.begin(), pt.end());
        if (e.cls == SideClass::ride) legs.push_back(ride->legs[next_ride++]);
        else legs.insert(legs.end(), e.legs.begin(), e.legs.end());
        if (ride) cand.plan.kind = AlternativeKind::pt_ridepool;
        else if (a.micro != kNoVehicle || e.micro != kNoVehicle) cand.plan.kind = AlternativeKind::pt_micromobility;
        else cand.plan.kind = AlternativeKind::pt_walk;
        score_plan(world, cand.plan);
        cand.score = cand.plan.utility;
        if (ride) {
          cand.others_delta = ride->others_delta;
          cand.score += ride->others_delta;
          cand.routes = ride->routes;
          cand.new_tasks = ride->tasks;
        }
        if (options.keep_all) {
          out.push_back(std::move(cand));
          any = true;
        } else if (!best || candidate_before(cand, *best)) {
          best = std::move(cand);
        }
      }
    }
    if (best) {
      out.push_back(std::move(*best));
      any = true;
    }
    productive += any ? 1 : 0;
  }
  return out;
}

}  // namespace multiplan
