#include "multiplan/state.hpp"

namespace multiplan {

std::size_t SolutionState::busy_micro() const {
  std::size_t n = 0;
  for (const auto& [id, m] : micro) n += m.busy ? 1 : 0;
  return n;
}

SolutionState initial_state(const World& world) {
  SolutionState s;
  s.clock = world.scenario.horizon.start;
  for (const auto& v : world.vehicles) {
    if (v.mode == Mode::ridepool) {
      RidepoolRoute r;
      r.vehicle = v.id;
      r.anchor = v.depot.value_or(world.grid.front());
      r.anchor_time = world.scenario.horizon.start;
      s.routes.push_back(std::move(r));
      s.route_history[v.id];
    } else if (is_micromobility(v.mode)) {
      s.micro[v.id] = MicroStatus{false, world.scenario.horizon.start, world.micro_start.at(v.id)};
    }
  }
  return s;
}

RideModel ride_model(const World& world, const SolutionState& state,
                     std::span<const RideTask> extra) {
  return RideModel(world.network, world.vehicles, TaskView(&state.ride_tasks, extra),
                   world.scenario.alns.unserved_penalty);
}

void score_plan(const World& world, TripPlan& plan) {
  plan.transferred = compute_transferred(plan.legs);
  plan.utility = plan_utility(world.profile(plan.request), plan);
}

double social_welfare(const World& world, const SolutionState& state) {
  double total = 0.0;
  for (const auto& [id, plan] : state.plans) total += plan_utility(world.profile(plan.request), plan);
  return total;
}

}  // namespace multiplan
