#include "multiplan/types.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace multiplan {

namespace {

constexpr std::array<std::string_view, kModeCount> kModeNames = {
    "walk",         "pt",           "ridepool",        "shared_bike",
    "shared_scooter", "private_car", "private_bike", "private_scooter"};

constexpr std::array<std::string_view, kAlternativeKindCount> kKindNames = {
    "pt_walk", "pt_micromobility", "pt_ridepool", "micromobility_only", "private_or_walk"};

constexpr std::array<std::string_view, 5> kLocationKindNames = {
    "grid_cell", "pt_stop", "bike_station", "depot", "free_point"};

int parse_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw std::invalid_argument("bad clock field '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Seconds parse_clock(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  auto c1 = text.find(':');
  if (c1 == std::string_view::npos) {
    throw std::invalid_argument("clock '" + std::string(text) + "' is not HH:MM[:SS]");
  }
  auto c2 = text.find(':', c1 + 1);
  int h = parse_int(text.substr(0, c1));
  int m = parse_int(text.substr(c1 + 1, c2 == std::string_view::npos ? std::string_view::npos
                                                                      : c2 - c1 - 1));
  int s = c2 == std::string_view::npos ? 0 : parse_int(text.substr(c2 + 1));
  if (h < 0 || m < 0 || m > 59 || s < 0 || s > 59) {
    throw std::invalid_argument("clock '" + std::string(text) + "' out of range");
  }
  return static_cast<Seconds>(h) * 3600 + m * 60 + s;
}

std::string format_clock(Seconds s) {
  const bool neg = s < 0;
  if (neg) s = -s;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02lld:%02lld:%02lld", neg ? "-" : "",
                static_cast<long long>(s / 3600), static_cast<long long>((s / 60) % 60),
                static_cast<long long>(s % 60));
  return buf;
}

std::string_view to_string(LocationKind kind) {
  return kLocationKindNames[static_cast<std::size_t>(kind)];
}

std::optional<LocationKind> parse_location_kind(std::string_view text) {
  for (std::size_t i = 0; i < kLocationKindNames.size(); ++i) {
    if (kLocationKindNames[i] == text) return static_cast<LocationKind>(i);
  }
  return std::nullopt;
}

double euclidean_km(const Location& a, const Location& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

bool same_place(const Location& a, const Location& b) {
  return a.id == b.id && std::abs(a.x_km - b.x_km) < 1e-9 && std::abs(a.y_km - b.y_km) < 1e-9;
}

std::string_view to_string(Mode mode) { return kModeNames[static_cast<std::size_t>(mode)]; }

std::optional<Mode> parse_mode(std::string_view text) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == text) return static_cast<Mode>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Docking docking) {
  switch (docking) {
    case Docking::dock_based: return "dock_based";
    case Docking::free_floating: return "free_floating";
    case Docking::not_applicable: return "not_applicable";
  }
  return "not_applicable";
}

std::optional<Docking> parse_docking(std::string_view text) {
  if (text == "dock_based") return Docking::dock_based;
  if (text == "free_floating") return Docking::free_floating;
  if (text == "not_applicable") return Docking::not_applicable;
  return std::nullopt;
}

std::string_view to_string(PtClass cls) {
  switch (cls) {
    case PtClass::none: return "none";
    case PtClass::metro: return "metro";
    case PtClass::bus_tram: return "bus_tram";
  }
  return "none";
}

std::optional<PtClass> parse_pt_class(std::string_view text) {
  if (text == "none") return PtClass::none;
  if (text == "metro") return PtClass::metro;
  if (text == "bus_tram") return PtClass::bus_tram;
  return std::nullopt;
}

std::string_view to_string(AlternativeKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<AlternativeKind> parse_alternative_kind(std::string_view text) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == text) return static_cast<AlternativeKind>(i);
  }
  return std::nullopt;
}

int tie_rank(AlternativeKind kind) { return static_cast<int>(kind); }

bool compute_transferred(const std::vector<TripLeg>& legs) {
  int non_walk = 0;
  bool has_pt = false;
  for (const auto& leg : legs) {
    if (leg.mode != Mode::walk) ++non_walk;
    if (leg.mode == Mode::pt) has_pt = true;
  }
  return non_walk >= 2 || (has_pt && legs.size() >= 2);
}

std::vector<std::string> validate_plan_chaining(const TripPlan& plan) {
  std::vector<std::string> out;
  const auto& legs = plan.legs;
  if (legs.empty()) {
    out.emplace_back("plan has no legs");
    return out;
  }
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const auto& leg = legs[i];
    if (leg.depart > leg.arrive) {
      out.push_back("leg " + std::to_string(i) + " arrives before it departs");
    }
    if (leg.money_cost < 0.0) {
      out.push_back("leg " + std::to_string(i) + " has negative cost");
    }
    if (i + 1 < legs.size()) {
      const auto& next = legs[i + 1];
      if (!same_place(leg.to, next.from)) {
        out.push_back("gap in space between leg " + std::to_string(i) + " and leg " +
                      std::to_string(i + 1));
      }
      if (next.depart < leg.arrive) {
        out.emplace_back("overlap at transfer");
      }
    }
  }
  if (!same_place(legs.front().from, plan.request.origin)) {
    out.emplace_back("first leg does not start at the request origin");
  }
  if (!same_place(legs.back().to, plan.request.destination)) {
    out.emplace_back("last leg does not end at the request destination");
  }
  if (legs.front().depart < plan.request.earliest) {
    out.emplace_back("departs before the earliest start");
  }
  if (legs.back().arrive > plan.request.latest) {
    out.emplace_back("arrives after the latest end");
  }
  return out;
}

}  // namespace multiplan
