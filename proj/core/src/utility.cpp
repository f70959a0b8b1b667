#include "multiplan/utility.hpp"

#include <array>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "multiplan/csv.hpp"

namespace multiplan {

namespace {

constexpr std::array<std::string_view, 15> kColumns = {
    "profile",        "asc_metro",     "asc_bus_tram",   "asc_shared_bike", "asc_sub_mode",
    "asc_walk",       "asc_shared_scooter", "asc_private_bike", "asc_car_ride",
    "beta_main_cost", "beta_sub_cost", "beta_main_time", "beta_sub_time",   "beta_pt_wait",
    "beta_walk"};

std::array<double*, 14> fields(ProfileParams& p) {
  return {&p.asc_metro,      &p.asc_bus_tram,   &p.asc_shared_bike, &p.asc_sub_mode,
          &p.asc_walk,       &p.asc_shared_scooter, &p.asc_private_bike, &p.asc_car_ride,
          &p.beta_main_cost, &p.beta_sub_cost,  &p.beta_main_time,  &p.beta_sub_time,
          &p.beta_pt_wait,   &p.beta_walk};
}

ProfileParams row(std::string name, std::array<double, 7> asc, std::array<double, 6> beta) {
  ProfileParams p;
  p.name = std::move(name);
  p.asc_metro = asc[0];
  p.asc_bus_tram = asc[1];
  p.asc_shared_bike = asc[2];
  p.asc_sub_mode = asc[3];
  p.asc_walk = asc[4];
  p.asc_shared_scooter = asc[5];
  p.asc_private_bike = asc[6];
  p.asc_car_ride = 0.0;
  p.beta_main_cost = beta[0];
  p.beta_sub_cost = beta[1];
  p.beta_main_time = beta[2];
  p.beta_sub_time = beta[3];
  p.beta_pt_wait = beta[4];
  p.beta_walk = beta[5];
  return p;
}

double pt_class_asc(const ProfileParams& p, PtClass cls) {
  switch (cls) {
    case PtClass::metro: return p.asc_metro;
    case PtClass::bus_tram: return p.asc_bus_tram;
    case PtClass::none: break;
  }
  throw std::invalid_argument("PT leg without a PT class");
}

}  // namespace

ProfileTable::ProfileTable(std::vector<ProfileParams> rows) {
  for (auto& r : rows) {
    auto name = r.name;
    rows_.insert_or_assign(std::move(name), std::move(r));
  }
}

const ProfileTable& ProfileTable::builtin() {
  // clang-format off
  static const ProfileTable table({
    row("aggregated",      {-0.865,  0.683, -0.856, -0.934,  0.007, -1.380, -0.275}, {-0.093, -0.425, -0.034, -0.039, -0.014, -0.064}),
    row("commute",         {-0.120,  0.300,  0.437,  0.173,  0.173,  0.036,  0.048}, { 0.001,  0.104, -0.006,  0.000,  0.035, -0.023}),
    row("not_commute",     {-0.796,  0.524, -1.090, -1.030,  0.173, -1.400, -0.297}, {-0.094, -0.481, -0.031, -0.039, -0.031, -0.053}),
    row("familiar_sm",     {-0.851,  0.687,  0.187,  0.439,  0.007,  0.856, -0.274}, {-0.035, -0.246, -0.034, -0.039, -0.014, -0.064}),
    row("not_familiar_sm", {-0.851,  0.687, -0.986, -1.300,  0.007, -2.110, -0.274}, {-0.066, -0.259, -0.034, -0.039, -0.014, -0.064}),
    row("pt_low_freq",     {-1.420,  0.697, -0.894, -1.130,  0.007, -1.740, -0.479}, {-0.081, -0.668, -0.019, -0.048, -0.074, -0.064}),
    row("pt_high_freq",    { 1.270, -0.186, -0.263,  0.188,  0.007,  0.839,  0.498}, {-0.043,  0.268, -0.027, -0.002,  0.111,  0.003}),
    row("low_income",      {-0.687,  0.664, -0.773, -0.815,  0.007, -1.310, -0.357}, {-0.114, -0.279, -0.035, -0.024, -0.003, -0.064}),
    row("high_income",     { 0.163, -0.683, -0.536, -0.525,  0.007,  0.341,  0.238}, { 0.004, -0.348, -0.004, -0.063,  0.011, -0.064}),
    row("male",            {-0.496,  0.157, -0.341,  0.603, -0.210, -0.210, -0.265}, { 0.032, -0.037,  0.011, -0.001, -0.005, -0.006}),
    row("female",          {-0.642,  0.621, -0.743, -1.210, -0.210, -1.290, -0.153}, {-0.108, -0.411, -0.038, -0.039, -0.013, -0.061}),
    row("low_education",   {-0.836,  1.140, -0.773, -1.090,  0.007, -2.030, -0.555}, {-0.068, -0.189, -0.032,  0.016, -0.070, -0.030}),
    row("high_education",  { 0.342, -0.907, -0.223,  0.016,  0.007,  0.016,  0.638}, {-0.061, -0.451, -0.011, -0.114,  0.102, -0.046}),
    row("not_used_sm",     {-0.866,  0.684, -0.993, -1.200,  0.007, -1.690, -0.275}, {-0.066, -0.411, -0.034, -0.039, -0.014, -0.064}),
    row("used_sm",         {-0.866,  0.684,  0.659,  1.080,  0.007,  1.150, -0.275}, {-0.035, -0.246, -0.034, -0.039, -0.014, -0.064}),
    row("age_65_plus",     {-0.606,  1.130, -1.970, -1.490,  0.007, -2.320, -0.710}, {-0.065, -0.131, -0.020,  0.043, -0.056, -0.009}),
    row("age_35_minus",    {-0.275, -0.836,  1.470,  0.836,  0.007,  1.290,  0.661}, {-0.046, -0.502, -0.028, -0.146,  0.064, -0.093}),
    row("age_35_65",       {-0.323, -0.541,  1.240,  0.655,  0.007,  0.957,  0.424}, {-0.031, -0.381, -0.014, -0.102,  0.044, -0.064}),
  });
  // clang-format on
  return table;
}

const ProfileParams& ProfileTable::get(const std::string& name) const {
  if (auto it = rows_.find(name); it != rows_.end()) return it->second;
  if (auto it = rows_.find("aggregated"); it != rows_.end()) return it->second;
  throw std::out_of_range("profile table has no '" + name + "' and no aggregated row");
}

std::vector<std::string> ProfileTable::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : rows_) out.push_back(name);
  return out;
}

ProfileTable parse_preferences(std::string_view text) {
  auto table = CsvTable::parse(text, "preferences");
  std::array<std::size_t, kColumns.size()> idx{};
  for (std::size_t c = 0; c < kColumns.size(); ++c) idx[c] = table.column(kColumns[c]);
  std::vector<ProfileParams> rows;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    ProfileParams p;
    p.name = table.at(r, idx[0]);
    if (p.name.empty()) {
      throw LoadError("preferences:" + std::to_string(table.line_of(r)) + ": empty profile name");
    }
    auto f = fields(p);
    for (std::size_t c = 0; c < f.size(); ++c) {
      *f[c] = table.number(r, idx[c + 1]);
      if (!std::isfinite(*f[c])) {
        throw LoadError("preferences:" + std::to_string(table.line_of(r)) + ": non-finite value");
      }
    }
    rows.push_back(std::move(p));
  }
  return ProfileTable(std::move(rows));
}

ProfileTable load_preferences(const std::filesystem::path& file) {
  try {
    return parse_preferences(read_text_file(file));
  } catch (const LoadError& e) {
    std::string msg = e.what();
    if (msg.starts_with("preferences")) msg = file.string() + msg.substr(11);
    throw LoadError(msg);
  }
}

std::string format_preferences(const ProfileTable& table) {
  std::ostringstream out;
  for (std::size_t c = 0; c < kColumns.size(); ++c) out << (c ? "," : "") << kColumns[c];
  out << '\n';
  for (const auto& name : table.names()) {
    ProfileParams p = table.get(name);
    out << name;
    for (double* v : fields(p)) out << ',' << format_double(*v);
    out << '\n';
  }
  return out.str();
}

double leg_cost(double fixed, double per_min, double per_km, double tau_minutes,
                double distance_km) {
  return fixed + tau_minutes * per_min + distance_km * per_km;
}

double leg_cost(const Vehicle& v, double tau_minutes, double distance_km) {
  return leg_cost(v.cost_fixed, v.cost_per_min, v.cost_per_km, tau_minutes, distance_km);
}

double main_mode_asc(const ProfileParams& p, Mode mode, PtClass cls) {
  switch (mode) {
    case Mode::walk: return p.asc_walk;
    case Mode::pt: return pt_class_asc(p, cls);
    case Mode::shared_bike: return p.asc_shared_bike;
    case Mode::shared_scooter: return p.asc_shared_scooter;
    case Mode::private_bike:
    case Mode::private_scooter: return p.asc_private_bike;
    case Mode::private_car:
    case Mode::ridepool: return p.asc_car_ride;
  }
  throw std::invalid_argument("unknown mode");
}

double plan_utility(const ProfileParams& p, const TripPlan& plan) {
  const auto& legs = plan.legs;
  if (legs.empty()) throw std::invalid_argument("plan_utility on a plan without legs");
  double u = 0.0;
  if (plan.transferred) {
    std::set<PtClass> pt_classes;
    std::set<Mode> shared_subs;
    for (std::size_t i = 0; i < legs.size(); ++i) {
      const auto& leg = legs[i];
      Seconds wait = 0;
      if (i > 0) wait = leg.depart - legs[i - 1].arrive;
      else if (leg.mode == Mode::ridepool) wait = leg.depart - plan.request.earliest;
      const double tau = to_minutes(leg.duration());
      if (leg.mode == Mode::pt) {
        u += p.beta_pt_wait * to_minutes(wait) + p.beta_main_time * tau +
             p.beta_main_cost * leg.money_cost;
        pt_classes.insert(leg.pt_class);
      } else {
        u += p.beta_sub_time * (to_minutes(wait) + tau) + p.beta_sub_cost * leg.money_cost;
        if (is_shared(leg.mode)) shared_subs.insert(leg.mode);
      }
    }
    for (PtClass c : pt_classes) u += pt_class_asc(p, c);
    u += p.asc_sub_mode * static_cast<double>(shared_subs.size());
    return u;
  }
  const TripLeg* main = nullptr;
  for (const auto& leg : legs) {
    if (leg.mode != Mode::walk) {
      main = &leg;
      break;
    }
  }
  for (const auto& leg : legs) {
    const double tau = to_minutes(leg.duration());
    if (leg.mode == Mode::walk) u += p.beta_walk * tau;
    else u += p.beta_main_time * tau + p.beta_main_cost * leg.money_cost;
  }
  u += main ? main_mode_asc(p, main->mode, main->pt_class) : p.asc_walk;
  return u;
}

}  // namespace multiplan
