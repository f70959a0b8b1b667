#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "multiplan/ridepool.hpp"
#include "multiplan/scenario.hpp"

namespace multiplan {

enum class InsertionOp : std::uint8_t { greedy, random, most_constrained, regret };
enum class RemovalOp : std::uint8_t { worst, random, related, history };
inline constexpr std::size_t kInsertionOps = 4;
inline constexpr std::size_t kRemovalOps = 4;

std::string_view to_string(InsertionOp op);
std::string_view to_string(RemovalOp op);

struct AlnsParams {
  int iterations = 1000;
  int segment = 100;
  std::optional<double> initial_temperature;  // default: from initial_worsening
  double initial_worsening = 0.05;
  double cooling = 0.9975;
  double reaction = 0.1;
  double reward_best = 33.0;
  double reward_accept = 13.0;
  double reward_reject = 0.0;
  int max_idle = 100;  // 0 = run all iterations
  double related_threshold = 1.0;
  std::uint64_t seed = 1;

  static AlnsParams from(const AlnsConfig& c, std::uint64_t seed);
};

using Rng = std::mt19937_64;

// Roulette wheel over positive weights.
std::size_t select_operator(std::span<const double> weights, Rng& rng);

struct OperatorStats {
  std::vector<double> score;
  std::vector<int> uses;
  explicit OperatorStats(std::size_t n = 0) : score(n, 0.0), uses(n, 0) {}
};

// w <- (1 - rho) w + rho * score / uses for operators used in the segment.
std::vector<double> update_weights(std::span<const double> weights, const OperatorStats& stats,
                                   double reaction);

// Simulated annealing rule for a maximization objective.
bool accept(double candidate, double incumbent, double temperature, Rng& rng);

// Minimum insertion cost observed per task, for the history removal.
using HistoryStore = std::map<int, double>;

struct PoolState {
  std::vector<RidepoolRoute> routes;
  std::vector<int> pool;       // tasks waiting for insertion
  std::vector<int> removable;  // tasks this search may move
};

// Inserts zero or more pool tasks; returns how many were inserted.
int apply_insertion(InsertionOp op, const RideModel& model, PoolState& s, Rng& rng,
                    HistoryStore* history = nullptr);
// Moves up to q removable served tasks back to the pool; returns how many.
int apply_removal(RemovalOp op, const RideModel& model, PoolState& s, Rng& rng, int q,
                  const HistoryStore& history, double related_threshold = 1.0);

// Similarity used by the related removal: normalized OD distance plus one
// minus the window overlap ratio. Lower is more similar.
double relatedness(const RideTask& a, const RideTask& b, double max_km);

struct AlnsTraceRow {
  int iteration;
  RemovalOp removal;
  InsertionOp insertion;
  double objective;
  double best;
  double temperature;
};

class AlnsSolver final : public RidepoolSolver {
 public:
  explicit AlnsSolver(AlnsParams params) : params_(params) {}

  RideSolution solve(const RideModel& model, std::vector<RidepoolRoute> incumbent,
                     std::span<const int> pool) override;

  void set_trace(std::vector<AlnsTraceRow>* trace) { trace_ = trace; }
  void reseed(std::uint64_t seed) override { params_.seed = seed; }
  const AlnsParams& params() const { return params_; }
  const std::array<double, kInsertionOps>& insertion_weights() const { return w_ins_; }
  const std::array<double, kRemovalOps>& removal_weights() const { return w_rem_; }

 private:
  AlnsParams params_;
  std::vector<AlnsTraceRow>* trace_ = nullptr;
  std::array<double, kInsertionOps> w_ins_{1, 1, 1, 1};
  std::array<double, kRemovalOps> w_rem_{1, 1, 1, 1};
};

std::string format_trace(const std::vector<AlnsTraceRow>& trace);

}  // namespace multiplan
