#include "multiplan/sweep.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "multiplan/csv.hpp"
#include "multiplan/world.hpp"

namespace multiplan {

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> keys;
  std::string cur;
  for (char c : path) {
    if (c == '.') {
      keys.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  keys.push_back(cur);
  for (const auto& k : keys) {
    if (k.empty()) throw ConfigError("override path '" + path + "' has an empty key");
  }
  return keys;
}

void set_path(YAML::Node node, std::span<const std::string> keys, const YAML::Node& value) {
  if (keys.size() == 1) {
    node[keys[0]] = value;
    return;
  }
  if (!node[keys[0]] || !node[keys[0]].IsMap()) node[keys[0]] = YAML::Node(YAML::NodeType::Map);
  set_path(node[keys[0]], keys.subspan(1), value);
}

std::string dump(const YAML::Node& n) {
  YAML::Emitter out;
  out << YAML::Flow << n;
  return out.c_str();
}

}  // namespace

Scenario with_overrides(const Scenario& base, std::span<const Override> overrides) {
  YAML::Node root = YAML::Load(scenario_to_yaml(base));
  for (const auto& o : overrides) {
    YAML::Node value;
    try {
      value = YAML::Load(o.value);
    } catch (const YAML::Exception& e) {
      throw ConfigError(o.path + ": cannot parse value '" + o.value + "'");
    }
    const auto keys = split_path(o.path);
    set_path(root, keys, value);
  }
  YAML::Emitter out;
  out << root;
  return parse_scenario(out.c_str(), base.base_dir);
}

SweepGrid parse_sweep_grid(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("sweep grid: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("sweep grid: expected a mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (key != "seeds" && key != "vary" && key != "variants") {
      throw ConfigError("sweep grid: unknown key '" + key + "'");
    }
  }
  SweepGrid g;
  const auto seeds = root["seeds"];
  if (!seeds) throw ConfigError("sweep grid.seeds: required");
  try {
    if (seeds.IsSequence()) {
      for (const auto& s : seeds) g.seeds.push_back(s.as<std::uint64_t>());
    } else if (seeds.IsMap()) {
      const auto from = seeds["from"].as<std::uint64_t>(1);
      const auto count = seeds["count"].as<std::uint64_t>();
      for (std::uint64_t i = 0; i < count; ++i) g.seeds.push_back(from + i);
    } else {
      throw ConfigError("sweep grid.seeds: expected a list or {from, count}");
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("sweep grid.seeds: ") + e.what());
  }
  if (g.seeds.empty()) throw ConfigError("sweep grid.seeds: empty");

  if (const auto vary = root["vary"]) {
    if (!vary.IsMap()) throw ConfigError("sweep grid.vary: expected a mapping key -> list");
    g.variants.push_back({});
    for (const auto& kv : vary) {
      const auto key = kv.first.as<std::string>();
      if (!kv.second.IsSequence() || kv.second.size() == 0) {
        throw ConfigError("sweep grid.vary." + key + ": expected a non-empty list");
      }
      std::vector<SweepVariant> next;
      for (const auto& v : g.variants) {
        for (const auto& value : kv.second) {
          SweepVariant nv = v;
          const std::string text = dump(value);
          nv.label += (nv.label.empty() ? "" : ",") + key + "=" + text;
          nv.overrides.push_back({key, text});
          next.push_back(std::move(nv));
        }
      }
      g.variants = std::move(next);
    }
  }
  if (const auto vars = root["variants"]) {
    if (!vars.IsSequence()) throw ConfigError("sweep grid.variants: expected a list");
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const auto path = "sweep grid.variants[" + std::to_string(i) + "]";
      SweepVariant v;
      v.label = vars[i]["label"] ? vars[i]["label"].as<std::string>() : "variant" + std::to_string(i);
      if (const auto set = vars[i]["set"]) {
        if (!set.IsMap()) throw ConfigError(path + ".set: expected a mapping");
        for (const auto& kv : set) v.overrides.push_back({kv.first.as<std::string>(), dump(kv.second)});
      }
      g.variants.push_back(std::move(v));
    }
  }
  if (g.variants.empty()) g.variants.push_back({"base", {}});
  return g;
}

SweepGrid load_sweep_grid(const std::filesystem::path& file) {
  try {
    return parse_sweep_grid(read_text_file(file));
  } catch (const LoadError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<SweepRow> run_sweep(const Scenario& base, const SweepGrid& grid, int jobs,
                                SolverKind solver) {
  const std::size_t n = grid.variants.size() * grid.seeds.size();
  std::vector<SweepRow> rows(n);
  std::vector<std::optional<Scenario>> scenarios(grid.variants.size());
  std::vector<std::string> scenario_errors(grid.variants.size());
  for (std::size_t vi = 0; vi < grid.variants.size(); ++vi) {
    try {
      scenarios[vi] = with_overrides(base, grid.variants[vi].overrides);
    } catch (const std::exception& e) {
      scenario_errors[vi] = e.what();
    }
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const std::size_t vi = i / grid.seeds.size();
      SweepRow& row = rows[i];
      row.variant = grid.variants[vi].label;
      row.overrides = grid.variants[vi].overrides;
      row.seed = grid.seeds[i % grid.seeds.size()];
      if (!scenarios[vi]) {
        row.error = scenario_errors[vi];
        continue;
      }
      try {
        const World world = build_world(*scenarios[vi], row.seed);
        const auto requests = scenario_requests(world);
        RunOptions o;
        o.solver = solver;
        const RunResult r = run_planner(world, requests, o);
        row.summary = r.summary;
        row.violations = r.violations.size();
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string format_sweep(std::span<const SweepRow> rows) {
  // Parameter columns and share metrics are the unions over all cells, so
  // every cell reports the same metric list.
  std::vector<std::string> params;
  std::set<std::string> signatures;
  std::set<std::string> profiles;
  for (const auto& r : rows) {
    for (const auto& o : r.overrides) {
      if (std::ranges::find(params, o.path) == params.end()) params.push_back(o.path);
    }
    for (const auto& [sig, n] : r.summary.all.signatures) signatures.insert(sig);
    for (const auto& [p, g] : r.summary.by_profile) {
      profiles.insert(p);
      for (const auto& [sig, n] : g.signatures) signatures.insert(sig);
    }
  }

  std::ostringstream out;
  out << "variant,seed";
  for (const auto& p : params) out << ',' << csv_escape(p);
  out << ",metric,value\n";
  for (const auto& r : rows) {
    std::string prefix = csv_escape(r.variant) + ',' + std::to_string(r.seed);
    for (const auto& p : params) {
      auto it = std::ranges::find(r.overrides, p, &Override::path);
      prefix += ',' + (it == r.overrides.end() ? std::string() : csv_escape(it->value));
    }
    auto emit = [&](std::string_view metric, const std::string& value) {
      out << prefix << ',' << metric << ',' << value << '\n';
    };
    if (!r.error.empty()) {
      emit("error", csv_escape(r.error));
      continue;
    }
    const auto& s = r.summary;
    emit("requests", std::to_string(s.requests));
    emit("served", std::to_string(s.served));
    emit("unservable", std::to_string(s.unservable));
    emit("violations", std::to_string(r.violations));
    emit("welfare", format_double(s.welfare));
    emit("mean_travel_min", format_double(s.mean_travel_min));
    emit("mean_wait_min", format_double(s.mean_wait_min));
    emit("mean_ride_wait_min", format_double(s.mean_ride_wait_min));
    emit("mean_walk_min", format_double(s.mean_walk_min));
    emit("mean_money", format_double(s.mean_money));
    for (std::size_t k = 0; k < kAlternativeKindCount; ++k) {
      const auto kind = static_cast<AlternativeKind>(k);
      emit("kind_share." + std::string(to_string(kind)), format_double(s.all.kind_share(kind)));
    }
    for (const auto& sig : signatures) {
      emit("mode_share." + sig, format_double(s.all.signature_share(sig)));
    }
    for (const auto& p : profiles) {
      auto it = s.by_profile.find(p);
      const GroupStats empty;
      const GroupStats& g = it == s.by_profile.end() ? empty : it->second;
      emit("profile." + p + ".served", std::to_string(g.served));
      for (const auto& sig : signatures) {
        emit("profile." + p + ".mode_share." + sig, format_double(g.signature_share(sig)));
      }
    }
  }
  return out.str();
}

}  // namespace multiplan
