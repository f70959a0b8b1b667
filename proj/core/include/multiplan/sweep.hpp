#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "multiplan/run.hpp"

namespace multiplan {

// Dotted scenario key ("fleet.scooters.count") and a YAML value ("50").
struct Override {
  std::string path;
  std::string value;
};

// Applies overrides on the canonical YAML form and re-validates; throws ConfigError.
Scenario with_overrides(const Scenario& base, std::span<const Override> overrides);

struct SweepVariant {
  std::string label;
  std::vector<Override> overrides;
};

struct SweepGrid {
  std::vector<std::uint64_t> seeds;
  std::vector<SweepVariant> variants;
};

// seeds: [1, 2] or {from: 1, count: 20}
// vary: {key: [v1, v2], ...}         (cartesian product)
// variants: [{label: x, set: {key: value}}, ...]
SweepGrid parse_sweep_grid(std::string_view yaml_text);
SweepGrid load_sweep_grid(const std::filesystem::path& file);

struct SweepRow {
  std::string variant;
  std::vector<Override> overrides;
  std::uint64_t seed = 0;
  RunSummary summary;
  std::size_t violations = 0;
  std::string error;  // non-empty when the cell could not run
};

// Runs every (variant, seed) pair on up to `jobs` threads; the row order is
// fixed by the grid, not by completion. A failing cell is recorded, not thrown.
std::vector<SweepRow> run_sweep(const Scenario& base, const SweepGrid& grid, int jobs,
                                SolverKind solver = SolverKind::alns);

// Long format: variant, seed, one column per overridden key, metric, value.
std::string format_sweep(std::span<const SweepRow> rows);

}  // namespace multiplan
