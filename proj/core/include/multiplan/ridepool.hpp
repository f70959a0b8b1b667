#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "multiplan/network.hpp"
#include "multiplan/types.hpp"
#include "multiplan/utility.hpp"

namespace multiplan {

// One ride-pool sub-request: an access leg ending at a PT boarding stop, an
// egress leg starting at an alighting stop, or (tests only) a plain ride.
struct RideTask {
  int id = 0;
  RequestId request = 0;
  bool access = false;
  Location pickup;
  Location dropoff;
  Seconds ready = 0;     // earliest pickup
  Seconds deadline = 0;  // latest dropoff; the promised dropoff once committed
  int load = 1;
  std::optional<Seconds> next_board;  // PT departure after an access dropoff
  double beta_sub_time = 0.0;
  double beta_sub_cost = 0.0;
  double beta_pt_wait = 0.0;
  double direct_km = 0.0;
  std::optional<Seconds> picked_up_at;  // set once the pickup is frozen

  static int make_id(RequestId r, bool access) { return static_cast<int>(r * 2 + (access ? 0 : 1)); }
};

enum class StopKind : std::uint8_t { pickup, dropoff };

struct RouteStop {
  int task = 0;
  StopKind kind = StopKind::pickup;
  Location where;
  Seconds arrive = 0;
  Seconds service = 0;  // pickups wait for the task's ready time
};

// Open schedule of one vehicle. Stops the vehicle is already driving to (or
// has served) are frozen by advance_route and leave the open list.
struct RidepoolRoute {
  VehicleId vehicle = kNoVehicle;
  Location anchor;
  Seconds anchor_time = 0;
  int anchor_load = 0;
  std::vector<int> onboard;  // tasks picked up whose dropoff is still open
  std::vector<RouteStop> stops;

  bool serves(int task) const;
};

// Task lookup: a small overlay of candidate tasks over the committed ones.
class TaskView {
 public:
  TaskView() = default;
  TaskView(const std::map<int, RideTask>* committed, std::span<const RideTask> extra)
      : committed_(committed), extra_(extra) {}
  const RideTask& operator()(int id) const;

 private:
  const std::map<int, RideTask>* committed_ = nullptr;
  std::span<const RideTask> extra_;
};

struct Insertion {
  std::size_t route = 0;
  std::size_t pickup_pos = 0;   // index of the pickup in the new stop list
  std::size_t dropoff_pos = 0;  // index of the dropoff in the new stop list
  double delta = 0.0;           // objective change, penalty relief included
  double own_value = 0.0;       // value of the inserted task alone
};

class RideModel {
 public:
  RideModel(const Network& network, const std::vector<Vehicle>& vehicles, TaskView tasks,
            double unserved_penalty)
      : network_(&network), vehicles_(&vehicles), tasks_(tasks), penalty_(unserved_penalty) {}

  const RideTask& task(int id) const { return tasks_(id); }
  const Vehicle& vehicle(VehicleId id) const {
    return (*vehicles_)[static_cast<std::size_t>(id)];
  }
  const Network& network() const { return *network_; }
  double penalty() const { return penalty_; }

  Seconds travel(const Vehicle& v, const Location& a, const Location& b) const {
    return network_->travel(Mode::ridepool, v.speed_kmh, a, b);
  }

  // Recomputes open-stop times from the anchor; false on any capacity,
  // deadline or precedence violation.
  bool retime(RidepoolRoute& route) const;

  double task_value(const RideTask& t, const Vehicle& v, Seconds pickup, Seconds dropoff) const;
  // Sum of values of tasks with an open stop on the route (route must be timed).
  double route_value(const RidepoolRoute& route) const;
  double objective(std::span<const RidepoolRoute> routes, std::size_t unserved) const;

  // Service times of a task on a timed route; a frozen pickup comes from the task.
  std::optional<Seconds> pickup_time(const RidepoolRoute& route, int task) const;
  std::optional<Seconds> dropoff_time(const RidepoolRoute& route, int task) const;

  // Every feasible insertion of `task` into `routes`, in (route, pickup, dropoff) order.
  void for_each_insertion(std::span<const RidepoolRoute> routes, int task,
                          const std::function<void(const Insertion&)>& fn,
                          bool append_only = false) const;
  std::optional<Insertion> best_insertion(std::span<const RidepoolRoute> routes, int task) const;
  void apply(std::vector<RidepoolRoute>& routes, int task, const Insertion& ins) const;

  // Takes a task's stops out of its route and retimes it; false if not served.
  bool remove(std::vector<RidepoolRoute>& routes, int task) const;

 private:
  const Network* network_;
  const std::vector<Vehicle>* vehicles_;
  TaskView tasks_;
  double penalty_;
};

// Freezes stops the vehicle has started driving to by time t, appends them to
// `frozen` and moves the anchor forward. Picked-up tasks get picked_up_at set.
void advance_route(RidepoolRoute& route, Seconds t, const RideModel& model,
                   std::map<int, RideTask>& tasks, std::vector<RouteStop>& frozen);

struct RideSolution {
  std::vector<RidepoolRoute> routes;
  std::vector<int> unserved;
  double objective = 0.0;
  long iterations = 0;
};

class RidepoolSolver {
 public:
  virtual ~RidepoolSolver() = default;
  // Inserts as many pool tasks as possible into the incumbent routes. Tasks in
  // the incumbent keep their relative order; none of their dropoffs moves later.
  virtual RideSolution solve(const RideModel& model, std::vector<RidepoolRoute> incumbent,
                             std::span<const int> pool) = 0;
  // Randomized solvers draw a fresh stream per decision.
  virtual void reseed(std::uint64_t /*seed*/) {}
};

// Single pass, tasks in pool order, each appended to the end of the vehicle
// schedule that gives the best objective; no en-route insertion.
class GreedyAppendSolver final : public RidepoolSolver {
 public:
  RideSolution solve(const RideModel& model, std::vector<RidepoolRoute> incumbent,
                     std::span<const int> pool) override;
};

// Enumerates every insertion sequence; exact for small pools.
class ExhaustiveSolver final : public RidepoolSolver {
 public:
  RideSolution solve(const RideModel& model, std::vector<RidepoolRoute> incumbent,
                     std::span<const int> pool) override;
};

}  // namespace multiplan
