#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "multiplan/run.hpp"

namespace multiplan {

std::string format_events(std::span<const EventRecord> events);
std::vector<EventRecord> parse_events(std::string_view text);

// One row per leg, with the request and plan repeated on every row.
std::string format_plans(const SolutionState& state);
std::map<RequestId, TripPlan> parse_plans(std::string_view text);

std::string format_summary(const World& world, const RunResult& result);
// key = value lines back into a map.
std::map<std::string, std::string> parse_summary(std::string_view text);

// events.csv, plans.csv, requests.csv, summary.txt, feasibility.txt
void write_run_outputs(const std::filesystem::path& dir, const World& world,
                       const RunResult& result);

// Re-reads a run directory and cross-checks its files; returns problems found.
// With a world, utilities are recomputed from the preference table too.
std::vector<std::string> validate_outputs(const std::filesystem::path& dir,
                                          const World* world = nullptr);

}  // namespace multiplan
