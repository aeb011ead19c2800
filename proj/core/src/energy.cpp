#include "xlp/energy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "xlp/error.hpp"
#include "xlp/solver.hpp"

namespace xlp {

namespace {

constexpr int kHoursPerYear = 8760;
constexpr int kDaysInMonth[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
constexpr int kRowsPerHour = 4;
constexpr int kVarsPerHour = 5;

int month_of_hour(int hour) {
  int day = (hour / 24) % 365;
  for (int m = 0; m < 12; ++m) {
    if (day < kDaysInMonth[m]) return m;
    day -= kDaysInMonth[m];
  }
  return 11;
}

double parse_double(std::string_view field, int row, const char* what) {
  double v = 0.0;
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\r' || field.back() == '\t')) {
    field.remove_suffix(1);
  }
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kCsvParse, "row " + std::to_string(row) + ": invalid " + what + " '" +
                                          std::string(field) + "'");
  }
  return v;
}

// Uniform double in [lo, hi) from the top 53 bits; independent of the
// standard library's distribution implementation.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

template <class F>
std::pair<double, double> golden_min(F f, double lo, double hi, int iterations) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

}  // namespace

const std::vector<std::string>& month_names() {
  static const std::vector<std::string> names = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                 "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  return names;
}

void validate(const EnergyInstance& e) {
  if (e.horizon_hours <= 0 || e.horizon_hours > kHoursPerYear) {
    throw Error(ErrorCode::kInvalidArgument, "horizon must be between 1 and 8760 hours");
  }
  if (static_cast<int>(e.demand.size()) != e.horizon_hours ||
      static_cast<int>(e.pv_availability.size()) != e.horizon_hours) {
    throw Error(ErrorCode::kDimensionMismatch, "demand and availability series must span the horizon");
  }
  for (int i = 0; i < e.horizon_hours; ++i) {
    if (e.demand[i] < 0.0) {
      throw Error(ErrorCode::kNegativeDemand, "negative demand at hour " + std::to_string(i));
    }
    if (e.pv_availability[i] < 0.0 || e.pv_availability[i] > 1.0) {
      throw Error(ErrorCode::kInvalidArgument, "availability outside [0, 1] at hour " + std::to_string(i));
    }
  }
  if (e.costs.co_pv <= 0.0 || e.costs.co_bat <= 0.0 || e.costs.co_buy <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "energy costs must be positive");
  }
}

EnergyCosts default_energy_costs(int horizon_hours) {
  const double scale = static_cast<double>(horizon_hours) / kHoursPerYear;
  return {60.0 * scale, 40.0 * scale, 0.3};
}

int energy_demand_row(int hour) { return kRowsPerHour * hour + 3; }
int energy_var(int hour, int k) { return 2 + kVarsPerHour * hour + k; }

int energy_horizon(const Problem& p) {
  if (p.family != Family::kEnergy || (p.cols() - 2) % kVarsPerHour != 0) {
    throw Error(ErrorCode::kInvalidArgument, "problem is not an energy LP");
  }
  return (p.cols() - 2) / kVarsPerHour;
}

std::vector<Structure> month_structures(const Problem& p) {
  const int T = energy_horizon(p);
  std::vector<Structure> out;
  for (int m = 0; m < 12; ++m) {
    Structure s{month_names()[m], {}, {}, {}, RemovalMode::kZeroBEntries};
    for (int h = 0; h < T; ++h) {
      if (month_of_hour(h) == m) s.rows.push_back(energy_demand_row(h));
    }
    if (!s.rows.empty()) out.push_back(std::move(s));
  }
  return out;
}

Problem build_energy_lp(const EnergyInstance& e, const std::string& name) {
  validate(e);
  const int T = e.horizon_hours;
  const int n = 2 + kVarsPerHour * T;
  const int m = kRowsPerHour * T;
  ProblemData d;
  d.name = name;
  d.family = Family::kEnergy;
  d.sense = Sense::kMinimize;
  d.A = Matrix::Zero(m, n);
  d.b = Vector::Zero(m);
  d.w = Vector::Zero(n);
  d.w(kCapPv) = e.costs.co_pv;
  d.w(kCapBat) = e.costs.co_bat;
  for (int h = 0; h < T; ++h) {
    const int r = kRowsPerHour * h;
    const int prev = h == 0 ? T - 1 : h - 1;
    d.w(energy_var(h, 0)) = e.costs.co_buy;
    d.A(r, energy_var(h, 1)) = 1.0;
    d.A(r, kCapPv) = -e.pv_availability[h];
    d.A(r + 1, energy_var(h, 2)) = 1.0;
    d.A(r + 1, kCapBat) = -1.0;
    d.A(r + 2, energy_var(h, 2)) += 1.0;
    d.A(r + 2, energy_var(prev, 2)) -= 1.0;
    d.A(r + 2, energy_var(h, 4)) = 1.0;
    d.A(r + 2, energy_var(h, 3)) = -1.0;
    d.A(r + 3, energy_var(h, 0)) = 1.0;
    d.A(r + 3, energy_var(h, 4)) = 1.0;
    d.A(r + 3, energy_var(h, 3)) = -1.0;
    d.A(r + 3, energy_var(h, 1)) = 1.0;
    d.b(r + 3) = e.demand[h];
    d.senses.insert(d.senses.end(),
                    {RowSense::kLessEqual, RowSense::kLessEqual, RowSense::kEqual, RowSense::kEqual});
  }
  Problem p = build_problem(std::move(d));
  p.structures = month_structures(p);
  validate(p);
  return p;
}

EnergyInstance parse_energy_csv(const std::string& text, std::optional<EnergyCosts> costs) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kCsvParse, "row 0: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != "hour,demand_kwh,pv_availability") {
    throw Error(ErrorCode::kCsvParse, "row 0: expected header 'hour,demand_kwh,pv_availability'");
  }
  EnergyInstance e;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      fields.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    fields.push_back(rest);
    if (fields.size() != 3) {
      throw Error(ErrorCode::kCsvParse, "row " + std::to_string(row) + ": expected 3 fields, got " +
                                            std::to_string(fields.size()));
    }
    const double hour = parse_double(fields[0], row, "hour");
    if (hour != static_cast<double>(e.demand.size())) {
      throw Error(ErrorCode::kCsvParse, "row " + std::to_string(row) + ": hours must run 0, 1, 2, ...");
    }
    const double demand = parse_double(fields[1], row, "demand_kwh");
    const double avail = parse_double(fields[2], row, "pv_availability");
    if (demand < 0.0) {
      throw Error(ErrorCode::kNegativeDemand, "row " + std::to_string(row) + ": negative demand");
    }
    if (avail < 0.0 || avail > 1.0) {
      throw Error(ErrorCode::kCsvParse, "row " + std::to_string(row) + ": availability outside [0, 1]");
    }
    e.demand.push_back(demand);
    e.pv_availability.push_back(avail);
  }
  e.horizon_hours = static_cast<int>(e.demand.size());
  if (e.horizon_hours == 0) throw Error(ErrorCode::kCsvParse, "row 1: no data rows");
  e.costs = costs ? *costs : default_energy_costs(e.horizon_hours);
  validate(e);
  return e;
}

EnergyInstance load_energy_csv(const std::string& path, std::optional<EnergyCosts> costs) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_energy_csv(ss.str(), costs);
}

EnergyInstance synth_energy(std::uint64_t seed, int horizon_hours) {
  if (horizon_hours <= 0 || horizon_hours > kHoursPerYear) {
    throw Error(ErrorCode::kInvalidArgument, "horizon must be between 1 and 8760 hours");
  }
  constexpr double kPeakDay = 197.0;
  constexpr double kDayLengthSwing = 4.0;
  std::mt19937_64 rng(seed);
  const int days = horizon_hours / 24 + 1;
  std::vector<double> cloud(days);
  for (double& c : cloud) c = uniform(rng, 0.5, 1.0);

  EnergyInstance e;
  e.horizon_hours = horizon_hours;
  e.demand.resize(horizon_hours);
  e.pv_availability.resize(horizon_hours);
  for (int i = 0; i < horizon_hours; ++i) {
    const int day = i / 24;
    const int hour = i % 24;
    const double season = std::cos(2.0 * std::numbers::pi * (day - kPeakDay) / 365.0);
    const double length = 12.0 + kDayLengthSwing * season;
    const double rise = 12.5 - length / 2.0;
    const double t = hour + 0.5;
    double a = 0.0;
    if (t > rise && t < rise + length) {
      a = std::min(1.0, (0.6 + 0.35 * season) * cloud[day] *
                            std::sin(std::numbers::pi * (t - rise) / length));
    }
    e.pv_availability[i] = a;
    const double evening = (hour >= 17 && hour < 21) ? 0.8 : 0.0;
    e.demand[i] = 0.25 + evening + uniform(rng, 0.0, 0.1);
  }
  e.costs = default_energy_costs(horizon_hours);
  return e;
}

double minimum_purchase(const EnergyInstance& e, double cap_pv, double cap_bat) {
  const int T = e.horizon_hours;
  double start = 0.0;
  double bought = 0.0;
  // The cyclic constraint is met once the end level reproduces the start level.
  for (int pass = 0; pass < 8; ++pass) {
    double level = start;
    bought = 0.0;
    for (int i = 0; i < T; ++i) {
      const double surplus = cap_pv * e.pv_availability[i] - e.demand[i];
      if (surplus >= 0.0) {
        level = std::min(cap_bat, level + surplus);
      } else {
        const double take = std::min(-surplus, level);
        level -= take;
        bought += -surplus - take;
      }
    }
    if (std::abs(level - start) <= 1e-12 * (1.0 + cap_bat)) break;
    start = level;
  }
  return bought;
}

EnergyDesign solve_energy_design(const EnergyInstance& e) {
  validate(e);
  const auto& c = e.costs;
  double total = 0.0;
  for (double d : e.demand) total += d;
  EnergyDesign best;
  if (total <= 0.0) return best;
  const double pv_max = c.co_buy * total / c.co_pv + 1.0;
  const double bat_max = c.co_buy * total / c.co_bat + 1.0;
  constexpr int kIterations = 60;
  auto inner = [&](double cap_bat) {
    return golden_min(
        [&](double cap_pv) {
          return c.co_pv * cap_pv + c.co_bat * cap_bat + c.co_buy * minimum_purchase(e, cap_pv, cap_bat);
        },
        0.0, pv_max, kIterations);
  };
  auto outer = golden_min([&](double cap_bat) { return inner(cap_bat).second; }, 0.0, bat_max, kIterations);
  best.cap_bat = outer.first;
  best.cap_pv = inner(best.cap_bat).first;
  best.bought = minimum_purchase(e, best.cap_pv, best.cap_bat);
  best.objective = c.co_pv * best.cap_pv + c.co_bat * best.cap_bat + c.co_buy * best.bought;
  return best;
}

EnergyDesign solve_energy_design_lp(const EnergyInstance& e) {
  Problem p = build_energy_lp(e);
  LpSolution s = solve_lp(p, default_pivot_rule());
  if (s.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kSolveFailed, "energy LP is " + to_string(s.status));
  }
  EnergyDesign d;
  d.cap_pv = s.x(kCapPv);
  d.cap_bat = s.x(kCapBat);
  d.objective = s.objective;
  for (int h = 0; h < e.horizon_hours; ++h) d.bought += s.x(energy_var(h, 0));
  return d;
}

std::vector<MonthScore> month_occlusion(const EnergyInstance& e, bool use_lp) {
  auto design = [&](const EnergyInstance& inst) {
    return use_lp ? solve_energy_design_lp(inst) : solve_energy_design(inst);
  };
  const EnergyDesign base = design(e);
  std::vector<MonthScore> out;
  for (int m = 0; m < 12; ++m) {
    MonthScore s;
    s.month = month_names()[m];
    EnergyInstance masked = e;
    for (int h = 0; h < e.horizon_hours; ++h) {
      if (month_of_hour(h) == m) {
        masked.demand[h] = 0.0;
        s.present = true;
      }
    }
    if (s.present) {
      const EnergyDesign d = design(masked);
      s.cap_bat = base.cap_bat - d.cap_bat;
      s.cap_pv = base.cap_pv - d.cap_pv;
      s.objective = base.objective - d.objective;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace xlp
