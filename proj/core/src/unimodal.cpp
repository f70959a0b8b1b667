#include "multiplan/unimodal.hpp"

#include <stdexcept>

namespace multiplan {

void release_expired(SolutionState& state, Seconds t) {
  for (auto& [id, m] : state.micro) {
    if (m.busy && t > m.busy_until) m.busy = false;
  }
}

bool micro_idle(const SolutionState& state, VehicleId v) {
  auto it = state.micro.find(v);
  return it != state.micro.end() && !it->second.busy;
}

namespace {

TripLeg walk_leg(const World& world, const Request& r, const Location& a, const Location& b,
                 Seconds depart) {
  TripLeg leg;
  leg.mode = Mode::walk;
  leg.from = a;
  leg.to = b;
  leg.depart = depart;
  leg.arrive = depart + world.walk_time(r, a, b);
  leg.distance_km = world.network.distance_km(Mode::walk, a, b);
  return leg;
}

}  // namespace

std::optional<MicroTrip> plan_micro_trip(const World& world, const SolutionState& state,
                                         const Request& owner, VehicleId id,
                                         const MicroLegRequest& q) {
  if (owner.party_size != 1 || !micro_idle(state, id)) return std::nullopt;
  const Vehicle& v = world.vehicle(id);
  const Location& at = state.micro.at(id).location;
  const Location back = v.docking == Docking::dock_based ? world.nearest_dock(q.to) : q.to;
  if (same_place(at, back)) return std::nullopt;

  // Straight feasibility screen on distances and speeds.
  const double walk_km = world.network.distance_km(Mode::walk, q.from, at) +
                         world.network.distance_km(Mode::walk, back, q.to);
  const double ride_km = world.network.distance_km(v.mode, at, back);
  const double hours = walk_km / world.walk_speed(owner) + ride_km / v.speed_kmh;
  if (hours * 3600.0 >= static_cast<double>(q.latest - q.earliest)) return std::nullopt;

  const Seconds walk_in = world.walk_time(owner, q.from, at);
  const Seconds ride = world.network.travel(v.mode, v.speed_kmh, at, back) +
                       world.scenario.fleet.lock_unlock;
  const Seconds walk_out = same_place(back, q.to) ? 0 : world.walk_time(owner, back, q.to);
  const Seconds total = walk_in + ride + walk_out;
  const Seconds depart = q.arrive_by ? q.latest - total : q.earliest;
  if (depart < q.earliest || depart + total > q.latest) return std::nullopt;

  MicroTrip trip;
  trip.vehicle = id;
  trip.return_point = back;
  Seconds clock = depart;
  if (q.keep_zero_walk || !same_place(q.from, at)) {
    trip.legs.push_back(walk_leg(world, owner, q.from, at, clock));
  }
  clock += walk_in;
  TripLeg r;
  r.mode = v.mode;
  r.vehicle = id;
  r.from = at;
  r.to = back;
  r.depart = clock;
  r.arrive = clock + ride;
  r.distance_km = ride_km;
  r.money_cost = leg_cost(v, to_minutes(ride), ride_km);
  r.is_main = true;
  trip.legs.push_back(r);
  clock += ride;
  if (!same_place(back, q.to)) trip.legs.push_back(walk_leg(world, owner, back, q.to, clock));
  return trip;
}

std::vector<TripPlan> micromobility_candidates(const World& world, const SolutionState& state,
                                               const Request& request) {
  std::vector<TripPlan> out;
  const MicroLegRequest q{request.origin, request.destination, request.earliest, request.latest,
                          false, true};
  for (const auto& [id, status] : state.micro) {
    auto trip = plan_micro_trip(world, state, request, id, q);
    if (!trip) continue;
    TripPlan plan;
    plan.request = request;
    plan.legs = std::move(trip->legs);
    plan.kind = AlternativeKind::micromobility_only;
    score_plan(world, plan);
    out.push_back(std::move(plan));
  }
  return out;
}

void commit_micromobility(SolutionState& state, const TripPlan& plan, Seconds t) {
  for (const auto& leg : plan.legs) {
    if (!is_micromobility(leg.mode)) continue;
    auto& m = state.micro.at(leg.vehicle);
    if (m.busy) {
      throw std::logic_error("vehicle " + std::to_string(leg.vehicle) + " is already reserved");
    }
    m.busy = true;
    m.busy_until = leg.arrive;
    m.location = leg.to;
    state.reservations.push_back({leg.vehicle, plan.request.id, t, leg.arrive, leg.from, leg.to});
  }
}

std::vector<TripPlan> private_options(const World& world, const Request& request) {
  const auto& cfg = world.scenario.private_modes;
  const auto& owned = cfg.ownership(request.profile);
  std::vector<TripPlan> out;
  for (Mode mode : {Mode::walk, Mode::private_bike, Mode::private_scooter, Mode::private_car}) {
    if (!owned.contains(mode)) continue;
    double speed = 0.0;
    switch (mode) {
      case Mode::walk: speed = world.walk_speed(request); break;
      case Mode::private_bike: speed = cfg.bike_speed_kmh; break;
      case Mode::private_scooter: speed = cfg.scooter_speed_kmh; break;
      default: speed = cfg.car_speed_kmh; break;
    }
    const double km = world.network.distance_km(mode, request.origin, request.destination);
    if (km / speed * 3600.0 >= static_cast<double>(request.window())) continue;
    TripLeg leg;
    leg.mode = mode;
    leg.from = request.origin;
    leg.to = request.destination;
    leg.depart = request.earliest;
    leg.arrive = request.earliest + travel_seconds(km, speed);
    leg.distance_km = km;
    leg.is_main = true;
    if (mode == Mode::private_car) {
      leg.arrive += cfg.parking_search;
      leg.money_cost = cfg.parking_cost + cfg.car_cost_per_km * km;
    }
    if (leg.arrive > request.latest) continue;
    TripPlan plan;
    plan.request = request;
    plan.legs.push_back(leg);
    plan.kind = AlternativeKind::private_or_walk;
    score_plan(world, plan);
    out.push_back(std::move(plan));
  }
  return out;
}

std::optional<TripPlan> private_fallback(const World& world, const Request& request) {
  std::optional<TripPlan> best;
  for (auto& p : private_options(world, request)) {
    if (!best || p.utility > best->utility + 1e-12) best = std::move(p);
  }
  return best;
}

}  // namespace multiplan
