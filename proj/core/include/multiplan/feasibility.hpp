#pragma once

#include <span>
#include <string>
#include <vector>

#include "multiplan/state.hpp"

namespace multiplan {

struct Violation {
  std::string family;   // e.g. "ride_capacity", "micro_exclusive"
  std::string subject;  // request, vehicle or trip the violation is about
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Every constraint family on a (possibly partial) solution.
std::vector<Violation> check_state(const World& world, const SolutionState& state,
                                   std::span<const Request> requests);

// What may change between two consecutive states: one new decision for
// `request`, earlier plans untouched except ride-pool pickups moving without
// delaying any dropoff, and append-only vehicle histories.
std::vector<Violation> check_transition(const SolutionState& before, const SolutionState& after,
                                        RequestId request);

// Plans that end after the horizon (allowed, but worth reporting).
std::vector<std::string> horizon_warnings(const World& world, const SolutionState& state);

// One "family<TAB>subject<TAB>message" line per violation.
std::string format_violations(std::span<const Violation> violations);
std::vector<Violation> parse_violations(std::string_view text);

}  // namespace multiplan
