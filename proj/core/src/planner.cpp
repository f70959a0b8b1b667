#include "multiplan/planner.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "multiplan/unimodal.hpp"

namespace multiplan {

PlannerOptions PlannerOptions::from(const Scenario& s) {
  PlannerOptions o;
  o.search = ConnectionSearch::from(s.planner);
  return o;
}

RollingPlanner::RollingPlanner(const World& world, RidepoolSolver& solver, PlannerOptions options)
    : world_(&world), solver_(&solver), options_(options), state_(initial_state(world)) {}

void RollingPlanner::advance_to(Seconds t) {
  if (t < state_.clock) {
    throw std::invalid_argument("requests must arrive in time order (" + format_clock(t) +
                                " after " + format_clock(state_.clock) + ")");
  }
  state_.clock = t;
  const RideModel model = ride_model(*world_, state_);
  for (auto& route : state_.routes) {
    advance_route(route, t, model, state_.ride_tasks, state_.route_history[route.vehicle]);
  }
  release_expired(state_, t);
}

std::vector<Candidate> RollingPlanner::candidates(const Request& r) {
  const Seconds t = state_.clock;
  solver_->reseed(derive_seed(world_->seed, "ride-" + std::to_string(r.id)));
  IntegratedOptions io{options_.search, options_.keep_all_combinations};
  std::vector<Candidate> out = plan_integrated(*world_, state_, r, t, *solver_, io);
  for (auto& p : micromobility_candidates(*world_, state_, r)) {
    Candidate c;
    c.score = p.utility;
    c.plan = std::move(p);
    out.push_back(std::move(c));
  }
  for (auto& p : private_options(*world_, r)) {
    Candidate c;
    c.score = p.utility;
    c.plan = std::move(p);
    out.push_back(std::move(c));
  }
  for (auto& c : out) c.plan.decided_at = t;
  std::ranges::stable_sort(out, candidate_before);
  return out;
}

void RollingPlanner::commit(const Request& r, Candidate chosen) {
  const Seconds t = state_.clock;
  TripPlan& plan = chosen.plan;
  plan.decided_at = t;
  commit_micromobility(state_, plan, t);

  if (chosen.routes) {
    state_.routes = std::move(*chosen.routes);
    for (auto task : chosen.new_tasks) {
      for (const auto& leg : plan.legs) {
        if (leg.mode == Mode::ridepool && same_place(leg.from, task.pickup) &&
            same_place(leg.to, task.dropoff)) {
          task.deadline = leg.arrive;  // promised dropoff
        }
      }
      state_.ride_tasks[task.id] = task;
    }
    // Earlier passengers sharing a vehicle may now be picked up later.
    const RideModel model = ride_model(*world_, state_);
    for (const auto& route : state_.routes) {
      for (const auto& stop : route.stops) {
        if (stop.kind != StopKind::dropoff) continue;
        const RideTask& task = state_.ride_tasks.at(stop.task);
        if (task.request == r.id) continue;
        TripPlan& other = state_.plans.at(task.request);
        TripLeg& leg = task.access ? other.legs.front() : other.legs.back();
        if (leg.mode != Mode::ridepool) throw std::logic_error("ride task without a ride leg");
        const TripLeg fresh = ride_leg(*world_, model, state_.routes, task);
        if (fresh.depart == leg.depart && fresh.arrive == leg.arrive &&
            fresh.vehicle == leg.vehicle) {
          continue;
        }
        const double before = other.utility;
        leg = fresh;
        score_plan(*world_, other);
        state_.welfare += other.utility - before;
      }
    }
  }
  state_.welfare += plan.utility;
  state_.plans[r.id] = std::move(plan);
}

const EventRecord& RollingPlanner::step(const Request& r) {
  std::optional<SolutionState> before;
  advance_to(r.earliest);
  if (observer_) before = state_;
  auto cands = candidates(r);
  EventRecord ev;
  ev.request = r.id;
  ev.time = r.earliest;
  ev.candidates = cands.size();
  if (cands.empty()) {
    state_.unservable[r.id] = r;
  } else {
    Candidate& best = cands.front();
    ev.served = true;
    ev.kind = best.plan.kind;
    ev.modes = mode_signature(best.plan);
    ev.utility_at_decision = best.plan.utility;
    ev.others_delta = best.others_delta;
    commit(r, std::move(best));
  }
  ev.welfare_after = state_.welfare;
  events_.push_back(std::move(ev));
  if (observer_) observer_(r, *before, state_);
  return events_.back();
}

void RollingPlanner::run(std::span<const Request> requests) {
  for (const auto& r : arrival_order(requests)) step(r);
}

std::vector<Request> arrival_order(std::span<const Request> requests) {
  std::vector<Request> out(requests.begin(), requests.end());
  std::ranges::stable_sort(out, [](const Request& a, const Request& b) {
    return std::tie(a.earliest, a.id) < std::tie(b.earliest, b.id);
  });
  return out;
}

std::string mode_signature(const TripPlan& plan) {
  std::set<Mode> modes;
  for (const auto& leg : plan.legs) {
    if (leg.mode != Mode::walk) modes.insert(leg.mode);
  }
  if (modes.empty()) return "walk";
  std::string out;
  for (Mode m : modes) {
    if (!out.empty()) out += '+';
    out += to_string(m);
  }
  return out;
}

PlanMetrics plan_metrics(const TripPlan& plan) {
  PlanMetrics m;
  if (plan.legs.empty()) return m;
  Seconds start = plan.first_depart();
  const auto& first = plan.legs.front();
  if (first.mode == Mode::ridepool) {
    start = plan.request.earliest;
    m.ride_wait_min += to_minutes(first.depart - plan.request.earliest);
  }
  m.travel_min = to_minutes(plan.last_arrive() - start);
  m.wait_min = m.ride_wait_min;
  for (std::size_t i = 0; i < plan.legs.size(); ++i) {
    const auto& leg = plan.legs[i];
    if (i > 0) {
      const double gap = to_minutes(leg.depart - plan.legs[i - 1].arrive);
      m.wait_min += gap;
      if (leg.mode == Mode::ridepool) m.ride_wait_min += gap;
    }
    const double tau = to_minutes(leg.duration());
    switch (leg.mode) {
      case Mode::walk: m.walk_min += tau; break;
      case Mode::pt: m.pt_min += tau; break;
      case Mode::ridepool: m.ridepool_min += tau; break;
      case Mode::shared_bike:
      case Mode::shared_scooter: m.micro_min += tau; break;
      default: m.private_min += tau; break;
    }
    m.money += leg.money_cost;
  }
  return m;
}

double GroupStats::kind_share(AlternativeKind k) const {
  if (served == 0) return 0.0;
  auto it = kinds.find(k);
  return it == kinds.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(served);
}

double GroupStats::signature_share(const std::string& s) const {
  if (served == 0) return 0.0;
  auto it = signatures.find(s);
  return it == signatures.end() ? 0.0
                                : static_cast<double>(it->second) / static_cast<double>(served);
}

RunSummary summarize(const SolutionState& state, std::span<const Request> requests) {
  RunSummary s;
  s.requests = requests.size();
  s.served = state.plans.size();
  s.unservable = state.unservable.size();
  s.welfare = state.welfare;
  std::size_t with_ride = 0;
  for (const auto& [id, plan] : state.plans) {
    const std::string sig = mode_signature(plan);
    for (GroupStats* g : {&s.all, &s.by_profile[plan.request.profile]}) {
      ++g->served;
      ++g->kinds[plan.kind];
      ++g->signatures[sig];
    }
    const PlanMetrics m = plan_metrics(plan);
    s.mean_travel_min += m.travel_min;
    s.mean_wait_min += m.wait_min;
    s.mean_walk_min += m.walk_min;
    s.mean_money += m.money;
    if (sig.find("ridepool") != std::string::npos) {
      s.mean_ride_wait_min += m.ride_wait_min;
      ++with_ride;
    }
  }
  if (s.served > 0) {
    const double n = static_cast<double>(s.served);
    s.mean_travel_min /= n;
    s.mean_wait_min /= n;
    s.mean_walk_min /= n;
    s.mean_money /= n;
  }
  if (with_ride > 0) s.mean_ride_wait_min /= static_cast<double>(with_ride);

  // Peak number of micromobility vehicles held at once.
  std::vector<std::pair<Seconds, int>> sweep;
  for (const auto& res : state.reservations) {
    sweep.emplace_back(res.start, 1);
    sweep.emplace_back(res.end + 1, -1);
  }
  std::ranges::sort(sweep);
  int busy = 0;
  for (const auto& [time, d] : sweep) {
    busy += d;
    s.busy_micro_peak = std::max(s.busy_micro_peak, static_cast<std::size_t>(std::max(busy, 0)));
  }
  return s;
}

}  // namespace multiplan
