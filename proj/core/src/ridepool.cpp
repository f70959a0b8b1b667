#include "multiplan/ridepool.hpp"

#include <algorithm>
#include <stdexcept>

namespace multiplan {

namespace {

constexpr double kEps = 1e-12;

}  // namespace

bool RidepoolRoute::serves(int task) const {
  for (const auto& s : stops) {
    if (s.task == task) return true;
  }
  return std::ranges::find(onboard, task) != onboard.end();
}

const RideTask& TaskView::operator()(int id) const {
  for (const auto& t : extra_) {
    if (t.id == id) return t;
  }
  if (committed_) {
    if (auto it = committed_->find(id); it != committed_->end()) return it->second;
  }
  throw std::out_of_range("unknown ride task " + std::to_string(id));
}

bool RideModel::retime(RidepoolRoute& r) const {
  const Vehicle& v = vehicle(r.vehicle);
  Location prev = r.anchor;
  Seconds t = r.anchor_time;
  int load = r.anchor_load;
  for (std::size_t i = 0; i < r.stops.size(); ++i) {
    auto& s = r.stops[i];
    const RideTask& task = this->task(s.task);
    s.arrive = t + travel(v, prev, s.where);
    if (s.kind == StopKind::pickup) {
      s.service = std::max(s.arrive, task.ready);
      load += task.load;
      if (load > v.capacity) return false;
    } else {
      s.service = s.arrive;
      load -= task.load;
      if (s.service > task.deadline) return false;
    }
    t = s.service;
    prev = s.where;
  }
  return true;
}

double RideModel::task_value(const RideTask& t, const Vehicle& v, Seconds pickup,
                             Seconds dropoff) const {
  const double ride_min = to_minutes(dropoff - pickup);
  double value = t.beta_sub_time * (to_minutes(pickup - t.ready) + ride_min) +
                 t.beta_sub_cost * leg_cost(v, ride_min, t.direct_km);
  if (t.access && t.next_board) value += t.beta_pt_wait * to_minutes(*t.next_board - dropoff);
  return value;
}

std::optional<Seconds> RideModel::pickup_time(const RidepoolRoute& r, int task) const {
  for (const auto& s : r.stops) {
    if (s.task == task && s.kind == StopKind::pickup) return s.service;
  }
  return this->task(task).picked_up_at;
}

std::optional<Seconds> RideModel::dropoff_time(const RidepoolRoute& r, int task) const {
  for (const auto& s : r.stops) {
    if (s.task == task && s.kind == StopKind::dropoff) return s.service;
  }
  return std::nullopt;
}

double RideModel::route_value(const RidepoolRoute& r) const {
  const Vehicle& v = vehicle(r.vehicle);
  double total = 0.0;
  for (std::size_t i = 0; i < r.stops.size(); ++i) {
    const auto& s = r.stops[i];
    if (s.kind != StopKind::dropoff) continue;
    const RideTask& t = task(s.task);
    std::optional<Seconds> pickup;
    for (std::size_t k = 0; k < i; ++k) {
      if (r.stops[k].task == s.task) {
        pickup = r.stops[k].service;
        break;
      }
    }
    if (!pickup) pickup = t.picked_up_at;
    if (!pickup) throw std::logic_error("dropoff without pickup for task " + std::to_string(t.id));
    total += task_value(t, v, *pickup, s.service);
  }
  return total;
}

double RideModel::objective(std::span<const RidepoolRoute> routes, std::size_t unserved) const {
  double total = -penalty_ * static_cast<double>(unserved);
  for (const auto& r : routes) total += route_value(r);
  return total;
}

void RideModel::for_each_insertion(std::span<const RidepoolRoute> routes, int task_id,
                                   const std::function<void(const Insertion&)>& fn,
                                   bool append_only) const {
  const RideTask& t = task(task_id);
  RidepoolRoute scratch;
  for (std::size_t ri = 0; ri < routes.size(); ++ri) {
    const auto& base = routes[ri];
    const Vehicle& v = vehicle(base.vehicle);
    if (t.load > v.capacity) continue;
    // Cheap reachability bound: anchor -> pickup -> dropoff must fit the deadline.
    const Seconds direct = travel(v, t.pickup, t.dropoff);
    if (std::max(base.anchor_time + travel(v, base.anchor, t.pickup), t.ready) + direct >
        t.deadline) {
      continue;
    }
    const double base_value = route_value(base);
    const std::size_t m = base.stops.size();
    for (std::size_t i = append_only ? m : 0; i <= m; ++i) {
      for (std::size_t j = i; j <= m; ++j) {
        if (append_only && j != m) continue;
        scratch.vehicle = base.vehicle;
        scratch.anchor = base.anchor;
        scratch.anchor_time = base.anchor_time;
        scratch.anchor_load = base.anchor_load;
        scratch.stops.clear();
        scratch.stops.reserve(m + 2);
        for (std::size_t k = 0; k <= m; ++k) {
          if (k == i) scratch.stops.push_back({task_id, StopKind::pickup, t.pickup, 0, 0});
          if (k == j) scratch.stops.push_back({task_id, StopKind::dropoff, t.dropoff, 0, 0});
          if (k < m) scratch.stops.push_back(base.stops[k]);
        }
        if (!retime(scratch)) continue;
        Seconds p = 0, d = 0;
        for (const auto& s : scratch.stops) {
          if (s.task != task_id) continue;
          (s.kind == StopKind::pickup ? p : d) = s.service;
        }
        Insertion ins;
        ins.route = ri;
        ins.pickup_pos = i;
        ins.dropoff_pos = j + 1;
        ins.own_value = task_value(t, v, p, d);
        ins.delta = route_value(scratch) - base_value + penalty_;
        fn(ins);
      }
    }
  }
}

std::optional<Insertion> RideModel::best_insertion(std::span<const RidepoolRoute> routes,
                                                   int task) const {
  std::optional<Insertion> best;
  for_each_insertion(routes, task, [&](const Insertion& ins) {
    if (!best || ins.delta > best->delta + kEps) best = ins;
  });
  return best;
}

void RideModel::apply(std::vector<RidepoolRoute>& routes, int task_id, const Insertion& ins) const {
  const RideTask& t = task(task_id);
  auto& r = routes.at(ins.route);
  r.stops.insert(r.stops.begin() + static_cast<std::ptrdiff_t>(ins.pickup_pos),
                 RouteStop{task_id, StopKind::pickup, t.pickup, 0, 0});
  r.stops.insert(r.stops.begin() + static_cast<std::ptrdiff_t>(ins.dropoff_pos),
                 RouteStop{task_id, StopKind::dropoff, t.dropoff, 0, 0});
  if (!retime(r)) throw std::logic_error("applied an infeasible insertion");
}

bool RideModel::remove(std::vector<RidepoolRoute>& routes, int task_id) const {
  for (auto& r : routes) {
    const auto before = r.stops.size();
    std::erase_if(r.stops, [&](const RouteStop& s) { return s.task == task_id; });
    if (r.stops.size() != before) {
      if (!retime(r)) throw std::logic_error("route infeasible after removal");
      return true;
    }
  }
  return false;
}

void advance_route(RidepoolRoute& r, Seconds t, const RideModel& model,
                   std::map<int, RideTask>& tasks, std::vector<RouteStop>& history) {
  const Vehicle& v = model.vehicle(r.vehicle);
  std::size_t frozen = 0;
  Location prev = r.anchor;
  for (const auto& s : r.stops) {
    // The vehicle waits where it is and leaves just in time for the stop.
    if (s.service - model.travel(v, prev, s.where) >= t) break;
    prev = s.where;
    ++frozen;
  }
  for (std::size_t k = 0; k < frozen; ++k) {
    const auto& s = r.stops[k];
    auto& task = tasks.at(s.task);
    if (s.kind == StopKind::pickup) {
      task.picked_up_at = s.service;
      r.onboard.push_back(s.task);
      r.anchor_load += task.load;
    } else {
      std::erase(r.onboard, s.task);
      r.anchor_load -= task.load;
    }
    r.anchor = s.where;
    r.anchor_time = s.service;
    history.push_back(s);
  }
  r.stops.erase(r.stops.begin(), r.stops.begin() + static_cast<std::ptrdiff_t>(frozen));
  r.anchor_time = std::max(r.anchor_time, t);
  if (!model.retime(r)) throw std::logic_error("route became infeasible while advancing");
}

RideSolution GreedyAppendSolver::solve(const RideModel& model,
                                       std::vector<RidepoolRoute> incumbent,
                                       std::span<const int> pool) {
  RideSolution out;
  out.routes = std::move(incumbent);
  for (int task : pool) {
    std::optional<Insertion> best;
    model.for_each_insertion(
        out.routes, task,
        [&](const Insertion& ins) {
          if (!best || ins.delta > best->delta + kEps) best = ins;
        },
        true);
    if (best) model.apply(out.routes, task, *best);
    else out.unserved.push_back(task);
  }
  out.objective = model.objective(out.routes, out.unserved.size());
  return out;
}

namespace {

void exhaustive(const RideModel& model, std::vector<RidepoolRoute>& routes,
                std::span<const int> pool, std::size_t k, std::vector<int>& unserved,
                RideSolution& best, bool& have) {
  if (k == pool.size()) {
    const double obj = model.objective(routes, unserved.size());
    ++best.iterations;
    if (!have || obj > best.objective + kEps) {
      have = true;
      const long it = best.iterations;
      best.routes = routes;
      best.unserved = unserved;
      best.objective = obj;
      best.iterations = it;
    }
    return;
  }
  const int task = pool[k];
  std::vector<Insertion> options;
  model.for_each_insertion(routes, task, [&](const Insertion& ins) { options.push_back(ins); });
  for (const auto& ins : options) {
    auto saved = routes[ins.route];
    model.apply(routes, task, ins);
    exhaustive(model, routes, pool, k + 1, unserved, best, have);
    routes[ins.route] = std::move(saved);
  }
  unserved.push_back(task);
  exhaustive(model, routes, pool, k + 1, unserved, best, have);
  unserved.pop_back();
}

}  // namespace

RideSolution ExhaustiveSolver::solve(const RideModel& model, std::vector<RidepoolRoute> incumbent,
                                     std::span<const int> pool) {
  RideSolution best;
  bool have = false;
  std::vector<int> unserved;
  exhaustive(model, incumbent, pool, 0, unserved, best, have);
  return best;
}

}  // namespace multiplan
