#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multiplan/integrated.hpp"
#include "multiplan/state.hpp"

namespace multiplan {

struct PlannerOptions {
  ConnectionSearch search;
  bool keep_all_combinations = false;

  static PlannerOptions from(const Scenario& s);
};

struct EventRecord {
  RequestId request = 0;
  Seconds time = 0;
  bool served = false;
  AlternativeKind kind = AlternativeKind::private_or_walk;
  std::string modes;              // e.g. "pt+shared_scooter"
  double utility_at_decision = 0.0;
  double others_delta = 0.0;
  double welfare_after = 0.0;     // running F(t)
  std::size_t candidates = 0;
};

// Rolling-horizon planner: one decision per request, in arrival order. The
// committed history only changes where a later ride-pool insertion moves an
// earlier passenger's pickup.
class RollingPlanner {
 public:
  using StepObserver = std::function<void(const Request&, const SolutionState& before,
                                          const SolutionState& after)>;

  RollingPlanner(const World& world, RidepoolSolver& solver, PlannerOptions options);

  const SolutionState& state() const { return state_; }
  const std::vector<EventRecord>& events() const { return events_; }
  void set_observer(StepObserver obs) { observer_ = std::move(obs); }
  // Continue from an arbitrary state (used by search over decisions).
  void reset(SolutionState state) { state_ = std::move(state); }

  // Freezes ride-pool stops already under way and releases finished
  // micromobility reservations.
  void advance_to(Seconds t);

  // All alternatives for the request at its arrival time, best first
  // (advance_to must have been called).
  std::vector<Candidate> candidates(const Request& request);

  void commit(const Request& request, Candidate chosen);
  const EventRecord& step(const Request& request);
  void run(std::span<const Request> requests);

 private:
  const World* world_;
  RidepoolSolver* solver_;
  PlannerOptions options_;
  SolutionState state_;
  std::vector<EventRecord> events_;
  StepObserver observer_;
};

// Requests ordered by arrival time, then id.
std::vector<Request> arrival_order(std::span<const Request> requests);

// Non-walk modes of a plan joined by '+', or "walk".
std::string mode_signature(const TripPlan& plan);

struct PlanMetrics {
  double travel_min = 0.0;   // door-to-door, counting an initial ride-pool wait
  double wait_min = 0.0;     // idle time between legs plus ride-pool pickup waits
  double ride_wait_min = 0.0;
  double walk_min = 0.0;
  double pt_min = 0.0;
  double ridepool_min = 0.0;
  double micro_min = 0.0;
  double private_min = 0.0;
  double money = 0.0;
};

PlanMetrics plan_metrics(const TripPlan& plan);

struct GroupStats {
  std::size_t served = 0;
  std::map<AlternativeKind, std::size_t> kinds;
  std::map<std::string, std::size_t> signatures;

  double kind_share(AlternativeKind k) const;
  double signature_share(const std::string& s) const;
};

struct RunSummary {
  std::size_t requests = 0;
  std::size_t served = 0;
  std::size_t unservable = 0;
  double welfare = 0.0;
  GroupStats all;
  std::map<ProfileId, GroupStats> by_profile;
  double mean_travel_min = 0.0;
  double mean_wait_min = 0.0;
  double mean_ride_wait_min = 0.0;  // over plans with a ride-pool leg
  double mean_walk_min = 0.0;
  double mean_money = 0.0;
  std::size_t busy_micro_peak = 0;
};

RunSummary summarize(const SolutionState& state, std::span<const Request> requests);

}  // namespace multiplan
