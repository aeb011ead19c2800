#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xlp/model.hpp"

namespace xlp {

struct EnergyCosts {
  double co_pv = 0.0;
  double co_bat = 0.0;
  double co_buy = 0.0;
};

struct EnergyInstance {
  int horizon_hours = 0;
  std::vector<double> demand;
  std::vector<double> pv_availability;
  EnergyCosts costs;
};

void validate(const EnergyInstance& e);

// Annualised capacity costs scaled to the horizon; grid energy per kWh.
EnergyCosts default_energy_costs(int horizon_hours);

// Variables: cap_PV, cap_bat, then per hour (buy, pv, bat, in, out).
// Rows per hour: pv <= cap_PV * avail, bat <= cap_bat, cyclic battery balance,
// demand balance. Month structures are attached.
Problem build_energy_lp(const EnergyInstance& e, const std::string& name = "energy");
int energy_horizon(const Problem& p);
int energy_demand_row(int hour);
int energy_var(int hour, int k);  // k: 0 buy, 1 pv, 2 bat, 3 in, 4 out
inline constexpr int kCapPv = 0;
inline constexpr int kCapBat = 1;

// One structure per calendar month touched by the horizon; hour 0 is 1 January 00:00.
std::vector<Structure> month_structures(const Problem& p);

EnergyInstance load_energy_csv(const std::string& path, std::optional<EnergyCosts> costs = {});
EnergyInstance parse_energy_csv(const std::string& text, std::optional<EnergyCosts> costs = {});

// Seeded synthetic year: PV availability follows day length and a cloud factor,
// demand has a base load plus an evening peak.
EnergyInstance synth_energy(std::uint64_t seed, int horizon_hours = 8760);

struct EnergyDesign {
  double cap_pv = 0.0;
  double cap_bat = 0.0;
  double objective = 0.0;
  double bought = 0.0;
};

// Grid purchases for fixed capacities under greedy lossless storage use.
double minimum_purchase(const EnergyInstance& e, double cap_pv, double cap_bat);

// Nested golden-section search over the convex cost in (cap_PV, cap_bat).
EnergyDesign solve_energy_design(const EnergyInstance& e);

// Same design read off the dense LP; practical for short horizons only.
EnergyDesign solve_energy_design_lp(const EnergyInstance& e);

struct MonthScore {
  std::string month;
  bool present = false;
  double cap_bat = 0.0;
  double cap_pv = 0.0;
  double objective = 0.0;
};

// Occlusion of each month's demand: original minus masked design values.
std::vector<MonthScore> month_occlusion(const EnergyInstance& e, bool use_lp = false);

const std::vector<std::string>& month_names();

}  // namespace xlp
