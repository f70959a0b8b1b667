#include "multiplan/alns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "multiplan/csv.hpp"

namespace multiplan {

namespace {

constexpr double kEps = 1e-12;

bool is_served(const PoolState& s, int task) {
  return std::ranges::find(s.pool, task) == s.pool.end();
}

// Removable tasks currently sitting on a route with their pickup still open.
std::vector<int> served_removable(const PoolState& s) {
  std::vector<int> out;
  for (int t : s.removable) {
    if (!is_served(s, t)) continue;
    for (const auto& r : s.routes) {
      if (std::ranges::any_of(r.stops, [&](const RouteStop& st) {
            return st.task == t && st.kind == StopKind::pickup;
          })) {
        out.push_back(t);
        break;
      }
    }
  }
  return out;
}

void record_history(HistoryStore* history, const RideModel& model, int task,
                    const Insertion& ins) {
  if (!history) return;
  const double cost = -(ins.delta - model.penalty());
  auto [it, fresh] = history->try_emplace(task, cost);
  if (!fresh) it->second = std::min(it->second, cost);
}

void insert_task(const RideModel& model, PoolState& s, int task, const Insertion& ins,
                 HistoryStore* history) {
  model.apply(s.routes, task, ins);
  std::erase(s.pool, task);
  record_history(history, model, task, ins);
}

// Objective loss caused by keeping `task` on its route (the "cost" of the task).
double removal_gain(const RideModel& model, const PoolState& s, int task) {
  for (const auto& r : s.routes) {
    if (!std::ranges::any_of(r.stops, [&](const RouteStop& st) { return st.task == task; })) {
      continue;
    }
    RidepoolRoute without = r;
    std::erase_if(without.stops, [&](const RouteStop& st) { return st.task == task; });
    if (!model.retime(without)) return 0.0;
    return model.route_value(without) - model.route_value(r);
  }
  return 0.0;
}

int greedy_insert(const RideModel& model, PoolState& s, HistoryStore* history) {
  int inserted = 0;
  while (!s.pool.empty()) {
    std::optional<Insertion> best;
    int best_task = -1;
    for (int task : s.pool) {
      auto ins = model.best_insertion(s.routes, task);
      if (ins && (!best || ins->delta > best->delta + kEps)) {
        best = ins;
        best_task = task;
      }
    }
    if (!best) break;
    insert_task(model, s, best_task, *best, history);
    ++inserted;
  }
  return inserted;
}

int random_insert(const RideModel& model, PoolState& s, Rng& rng, HistoryStore* history) {
  auto order = s.pool;
  std::shuffle(order.begin(), order.end(), rng);
  int inserted = 0;
  for (int task : order) {
    std::vector<Insertion> options;
    model.for_each_insertion(s.routes, task, [&](const Insertion& i) { options.push_back(i); });
    if (options.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    insert_task(model, s, task, options[pick(rng)], history);
    ++inserted;
  }
  return inserted;
}

int most_constrained_insert(const RideModel& model, PoolState& s, HistoryStore* history) {
  if (s.pool.empty() || s.routes.empty()) return 0;
  const Vehicle& v0 = model.vehicle(s.routes.front().vehicle);
  int max_cap = 1;
  for (const auto& r : s.routes) max_cap = std::max(max_cap, model.vehicle(r.vehicle).capacity);
  double max_slack = 0.0, max_km = 0.0;
  std::vector<std::pair<double, double>> raw;  // (slack, km)
  for (int task : s.pool) {
    const auto& t = model.task(task);
    const double slack = static_cast<double>(
        std::max<Seconds>(0, t.deadline - t.ready - model.travel(v0, t.pickup, t.dropoff)));
    raw.emplace_back(slack, t.direct_km);
    max_slack = std::max(max_slack, slack);
    max_km = std::max(max_km, t.direct_km);
  }
  std::vector<std::pair<double, int>> order;
  for (std::size_t k = 0; k < s.pool.size(); ++k) {
    const auto& t = model.task(s.pool[k]);
    const double tight = max_slack > 0 ? 1.0 - raw[k].first / max_slack : 1.0;
    const double load = static_cast<double>(t.load) / max_cap;
    const double dist = max_km > 0 ? raw[k].second / max_km : 0.0;
    order.emplace_back(0.5 * tight + 0.25 * load + 0.25 * dist, s.pool[k]);
  }
  std::ranges::stable_sort(order, [](const auto& a, const auto& b) { return a.first > b.first; });
  int inserted = 0;
  for (const auto& [score, task] : order) {
    if (auto ins = model.best_insertion(s.routes, task)) {
      insert_task(model, s, task, *ins, history);
      ++inserted;
    }
  }
  return inserted;
}

int regret_insert(const RideModel& model, PoolState& s, HistoryStore* history) {
  int inserted = 0;
  while (!s.pool.empty()) {
    int pick = -1;
    Insertion pick_ins;
    double pick_regret = -std::numeric_limits<double>::infinity();
    for (int task : s.pool) {
      // Best insertion per route, then regret between the two best routes.
      std::vector<std::optional<Insertion>> per_route(s.routes.size());
      model.for_each_insertion(s.routes, task, [&](const Insertion& i) {
        auto& slot = per_route[i.route];
        if (!slot || i.delta > slot->delta + kEps) slot = i;
      });
      std::optional<Insertion> first, second;
      for (const auto& r : per_route) {
        if (!r) continue;
        if (!first || r->delta > first->delta + kEps) {
          second = first;
          first = r;
        } else if (!second || r->delta > second->delta + kEps) {
          second = r;
        }
      }
      if (!first) continue;
      const double regret = second ? first->delta - second->delta
                                   : std::numeric_limits<double>::infinity();
      // Larger regret first (a single feasible route counts as infinite), then larger delta.
      const bool better = [&] {
        if (pick < 0) return true;
        if (std::isinf(regret) != std::isinf(pick_regret)) return std::isinf(regret);
        if (!std::isinf(regret) && std::abs(regret - pick_regret) > kEps) {
          return regret > pick_regret;
        }
        return first->delta > pick_ins.delta + kEps;
      }();
      if (better) {
        pick = task;
        pick_ins = *first;
        pick_regret = regret;
      }
    }
    if (pick < 0) break;
    insert_task(model, s, pick, pick_ins, history);
    ++inserted;
  }
  return inserted;
}

void take_out(const RideModel& model, PoolState& s, int task) {
  if (model.remove(s.routes, task)) s.pool.push_back(task);
}

}  // namespace

std::string_view to_string(InsertionOp op) {
  switch (op) {
    case InsertionOp::greedy: return "greedy";
    case InsertionOp::random: return "random";
    case InsertionOp::most_constrained: return "most_constrained";
    case InsertionOp::regret: return "regret";
  }
  return "?";
}

std::string_view to_string(RemovalOp op) {
  switch (op) {
    case RemovalOp::worst: return "worst";
    case RemovalOp::random: return "random";
    case RemovalOp::related: return "related";
    case RemovalOp::history: return "history";
  }
  return "?";
}

AlnsParams AlnsParams::from(const AlnsConfig& c, std::uint64_t seed) {
  AlnsParams p;
  p.iterations = c.iterations;
  p.segment = c.segment;
  p.initial_worsening = c.initial_worsening;
  p.cooling = c.cooling;
  p.reaction = c.reaction;
  p.reward_best = c.reward_best;
  p.reward_accept = c.reward_accept;
  p.reward_reject = c.reward_reject;
  p.max_idle = c.max_idle;
  p.seed = seed;
  return p;
}

std::size_t select_operator(std::span<const double> weights, Rng& rng) {
  if (weights.size() == 1) return 0;
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::uniform_real_distribution<double> u(0.0, total);
  double x = u(rng);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (x < weights[i]) return i;
    x -= weights[i];
  }
  return weights.size() - 1;
}

std::vector<double> update_weights(std::span<const double> weights, const OperatorStats& stats,
                                   double reaction) {
  std::vector<double> out(weights.begin(), weights.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (stats.uses[i] == 0) continue;
    out[i] = (1.0 - reaction) * out[i] + reaction * stats.score[i] / stats.uses[i];
    // Keep every operator selectable.
    out[i] = std::max(out[i], 1e-3);
  }
  return out;
}

bool accept(double candidate, double incumbent, double temperature, Rng& rng) {
  if (candidate >= incumbent) return true;
  if (!(temperature > 0.0)) return false;
  const double p = std::exp(-(incumbent - candidate) / temperature);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < p;
}

double relatedness(const RideTask& a, const RideTask& b, double max_km) {
  const double od = euclidean_km(a.pickup, b.pickup) + euclidean_km(a.dropoff, b.dropoff);
  const double norm = max_km > 0 ? od / (2.0 * max_km) : 0.0;
  const Seconds lo = std::max(a.ready, b.ready);
  const Seconds hi = std::min(a.deadline, b.deadline);
  const Seconds span = std::max(a.deadline, b.deadline) - std::min(a.ready, b.ready);
  const double overlap = span > 0 ? static_cast<double>(std::max<Seconds>(0, hi - lo)) / span : 1.0;
  return norm + (1.0 - overlap);
}

int apply_insertion(InsertionOp op, const RideModel& model, PoolState& s, Rng& rng,
                    HistoryStore* history) {
  switch (op) {
    case InsertionOp::greedy: return greedy_insert(model, s, history);
    case InsertionOp::random: return random_insert(model, s, rng, history);
    case InsertionOp::most_constrained: return most_constrained_insert(model, s, history);
    case InsertionOp::regret: return regret_insert(model, s, history);
  }
  return 0;
}

int apply_removal(RemovalOp op, const RideModel& model, PoolState& s, Rng& rng, int q,
                  const HistoryStore& history, double related_threshold) {
  auto candidates = served_removable(s);
  if (candidates.empty() || q <= 0) return 0;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(q), candidates.size());
  std::vector<int> chosen;
  switch (op) {
    case RemovalOp::random: {
      std::shuffle(candidates.begin(), candidates.end(), rng);
      chosen.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n));
      break;
    }
    case RemovalOp::worst:
    case RemovalOp::history: {
      std::vector<std::pair<double, int>> scored;
      for (int t : candidates) {
        const double cost = removal_gain(model, s, t);
        double key = cost;
        if (op == RemovalOp::history) {
          auto it = history.find(t);
          key = it == history.end() ? 0.0 : cost - it->second;
        }
        scored.emplace_back(key, t);
      }
      std::ranges::stable_sort(scored, [](const auto& a, const auto& b) {
        return a.first > b.first + kEps;
      });
      for (std::size_t k = 0; k < n; ++k) chosen.push_back(scored[k].second);
      break;
    }
    case RemovalOp::related: {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      const int seed = candidates[pick(rng)];
      const auto& a = model.task(seed);
      double max_km = 0.0;
      for (int t : candidates) {
        const auto& b = model.task(t);
        max_km = std::max({max_km, euclidean_km(a.pickup, b.pickup),
                           euclidean_km(a.dropoff, b.dropoff)});
      }
      std::vector<std::pair<double, int>> scored;
      for (int t : candidates) {
        if (t == seed) continue;
        const double rel = relatedness(a, model.task(t), max_km);
        if (rel <= related_threshold) scored.emplace_back(rel, t);
      }
      std::ranges::stable_sort(scored, [](const auto& x, const auto& y) { return x.first < y.first; });
      chosen.push_back(seed);
      for (std::size_t k = 0; k < scored.size() && chosen.size() < n; ++k) {
        chosen.push_back(scored[k].second);
      }
      break;
    }
  }
  for (int t : chosen) take_out(model, s, t);
  return static_cast<int>(chosen.size());
}

RideSolution AlnsSolver::solve(const RideModel& model, std::vector<RidepoolRoute> incumbent,
                               std::span<const int> pool) {
  Rng rng(params_.seed);
  PoolState init;
  init.routes = std::move(incumbent);
  init.pool.assign(pool.begin(), pool.end());
  init.removable = init.pool;
  HistoryStore history;

  // Z_init: greedy construction.
  apply_insertion(InsertionOp::greedy, model, init, rng, &history);
  auto result = [&](const PoolState& s, long iterations) {
    RideSolution out;
    out.routes = s.routes;
    out.unserved = s.pool;
    std::ranges::sort(out.unserved);
    out.objective = model.objective(out.routes, out.unserved.size());
    out.iterations = iterations;
    return out;
  };
  // With one task and the planned order fixed, every removal/reinsertion
  // cycle revisits single insertions, of which greedy already took the best.
  // The same holds when nothing could be inserted at all.
  if (pool.size() <= 1 || served_removable(init).empty()) return result(init, 0);

  PoolState best = init, last = init;
  double best_obj = model.objective(best.routes, best.pool.size());
  double last_obj = best_obj;
  double temperature = params_.initial_temperature.value_or(
      params_.initial_worsening * std::max(std::abs(best_obj), 1e-6) / std::log(2.0));
  OperatorStats ins_stats(kInsertionOps), rem_stats(kRemovalOps);
  const int pass_limit = static_cast<int>(pool.size()) + 1;
  int idle = 0;
  long it = 0;
  for (it = 1; it <= params_.iterations; ++it) {
    const auto r_op = select_operator(w_rem_, rng);
    const auto i_op = select_operator(w_ins_, rng);
    PoolState cur = last;
    const auto served = served_removable(cur).size();
    std::uniform_int_distribution<int> qd(
        1, std::max(1, static_cast<int>(std::ceil(0.4 * static_cast<double>(served)))));
    const int q = qd(rng);
    apply_removal(static_cast<RemovalOp>(r_op), model, cur, rng, q, history,
                  params_.related_threshold);
    bool flag = false;
    for (int pass = 0; !cur.pool.empty() && pass < pass_limit; ++pass) {
      if (flag) {
        apply_removal(static_cast<RemovalOp>(r_op), model, cur, rng, q, history,
                      params_.related_threshold);
      } else {
        flag = true;
      }
      if (apply_insertion(static_cast<InsertionOp>(i_op), model, cur, rng, &history) == 0) break;
    }
    const double obj = model.objective(cur.routes, cur.pool.size());
    double reward = params_.reward_reject;
    if (obj > best_obj + kEps) {
      best = cur;
      best_obj = obj;
      last = std::move(cur);
      last_obj = obj;
      reward = params_.reward_best;
      idle = 0;
    } else {
      if (accept(obj, last_obj, temperature, rng)) {
        last = std::move(cur);
        last_obj = obj;
        reward = params_.reward_accept;
      }
      ++idle;
    }
    ins_stats.score[i_op] += reward;
    ++ins_stats.uses[i_op];
    rem_stats.score[r_op] += reward;
    ++rem_stats.uses[r_op];
    if (trace_) {
      trace_->push_back({static_cast<int>(it), static_cast<RemovalOp>(r_op),
                         static_cast<InsertionOp>(i_op), obj, best_obj, temperature});
    }
    temperature *= params_.cooling;
    if (it % params_.segment == 0) {
      auto wi = update_weights(w_ins_, ins_stats, params_.reaction);
      auto wr = update_weights(w_rem_, rem_stats, params_.reaction);
      std::ranges::copy(wi, w_ins_.begin());
      std::ranges::copy(wr, w_rem_.begin());
      ins_stats = OperatorStats(kInsertionOps);
      rem_stats = OperatorStats(kRemovalOps);
    }
    if (params_.max_idle > 0 && idle >= params_.max_idle) break;
  }
  return result(best, std::min<long>(it, params_.iterations));
}

std::string format_trace(const std::vector<AlnsTraceRow>& trace) {
  std::ostringstream out;
  out << "iteration,removal,insertion,objective,best,temperature\n";
  for (const auto& r : trace) {
    out << r.iteration << ',' << to_string(r.removal) << ',' << to_string(r.insertion) << ','
        << format_double(r.objective) << ',' << format_double(r.best) << ','
        << format_double(r.temperature) << '\n';
  }
  return out.str();
}

}  // namespace multiplan
