#include <gtest/gtest.h>

#include "xlp/energy.hpp"
#include "xlp/error.hpp"
#include "xlp/solver.hpp"

using namespace xlp;

namespace {

ErrorCode csv_error(const std::string& text) {
  try {
    parse_energy_csv(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorCode::kIo;
}

EnergyInstance flat(int hours, double demand, double avail) {
  EnergyInstance e;
  e.horizon_hours = hours;
  e.demand.assign(hours, demand);
  e.pv_availability.assign(hours, avail);
  e.costs = default_energy_costs(hours);
  return e;
}

}  // namespace

TEST(Energy, SynthIsSeededAndValid) {
  const EnergyInstance a = synth_energy(42, 200);
  const EnergyInstance b = synth_energy(42, 200);
  const EnergyInstance c = synth_energy(43, 200);
  EXPECT_EQ(a.demand, b.demand);
  EXPECT_EQ(a.pv_availability, b.pv_availability);
  EXPECT_NE(a.demand, c.demand);
  EXPECT_NO_THROW(validate(a));
  for (double v : a.pv_availability) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Energy, LpSolutionBalancesEveryHour) {
  const EnergyInstance e = synth_energy(42, 48);
  const Problem p = build_energy_lp(e);
  EXPECT_EQ(energy_horizon(p), 48);
  const LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_LE(p.max_violation(s.x), 1e-7);
  for (int h = 0; h < 48; ++h) {
    const double supplied = s.x(energy_var(h, 0)) + s.x(energy_var(h, 1)) + s.x(energy_var(h, 4)) -
                            s.x(energy_var(h, 3));
    EXPECT_NEAR(supplied, e.demand[h], 1e-7) << "hour " << h;
    EXPECT_LE(s.x(energy_var(h, 1)), s.x(kCapPv) * e.pv_availability[h] + 1e-7);
    EXPECT_LE(s.x(energy_var(h, 2)), s.x(kCapBat) + 1e-7);
  }
}

TEST(Energy, StructuredSearchMatchesLp) {
  for (std::uint64_t seed : {1u, 42u}) {
    const EnergyInstance e = synth_energy(seed, 72);
    const EnergyDesign lp = solve_energy_design_lp(e);
    const EnergyDesign fast = solve_energy_design(e);
    EXPECT_NEAR(fast.objective, lp.objective, 1e-4 * std::max(1.0, lp.objective)) << "seed " << seed;
  }
}

TEST(Energy, ZeroDemandNeedsNothing) {
  const EnergyDesign d = solve_energy_design(flat(48, 0.0, 0.5));
  EXPECT_NEAR(d.cap_pv, 0.0, 1e-6);
  EXPECT_NEAR(d.cap_bat, 0.0, 1e-6);
  EXPECT_NEAR(d.objective, 0.0, 1e-9);
}

TEST(Energy, ExpensiveGridMeansNoPurchases) {
  EnergyInstance e = synth_energy(42, 48);
  e.costs.co_buy = 1e4;
  const EnergyDesign lp = solve_energy_design_lp(e);
  EXPECT_NEAR(lp.bought, 0.0, 1e-6);
}

TEST(Energy, MinimumPurchaseWithoutCapacity) {
  const EnergyInstance e = synth_energy(5, 100);
  double total = 0.0;
  for (double d : e.demand) total += d;
  EXPECT_NEAR(minimum_purchase(e, 0.0, 0.0), total, 1e-9);
  EXPECT_LE(minimum_purchase(e, 2.0, 1.0), minimum_purchase(e, 2.0, 0.0) + 1e-12);
}

TEST(Energy, MonthStructures) {
  const Problem one_day = build_energy_lp(flat(24, 1.0, 0.5));
  const auto ms = month_structures(one_day);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].name, "Jan");
  EXPECT_EQ(ms[0].mode, RemovalMode::kZeroBEntries);
  EXPECT_EQ(ms[0].rows.size(), 24u);
  EXPECT_EQ(month_structures(build_energy_lp(flat(24 * 40, 1.0, 0.5))).size(), 2u);
}

TEST(Energy, SeasonalOrderingOnSyntheticYear) {
  const auto months = month_occlusion(synth_energy(42));
  ASSERT_EQ(months.size(), 12u);
  double shoulder = -INFINITY, summer = -INFINITY;
  for (const auto& m : months) {
    ASSERT_TRUE(m.present);
    if (m.month == "Mar" || m.month == "Apr" || m.month == "May" || m.month == "Sep" || m.month == "Oct") {
      shoulder = std::max(shoulder, m.cap_bat);
    }
    if (m.month == "Jun" || m.month == "Jul" || m.month == "Aug") summer = std::max(summer, m.cap_bat);
  }
  EXPECT_GT(shoulder, summer);
}

TEST(Energy, CsvParsing) {
  const auto e = parse_energy_csv("\xEF\xBB\xBFhour,demand_kwh,pv_availability\n0,1.5,0\n1,2,0.25\n");
  EXPECT_EQ(e.horizon_hours, 2);
  EXPECT_EQ(e.demand, (std::vector<double>{1.5, 2.0}));
  EXPECT_EQ(e.pv_availability[1], 0.25);
  EXPECT_EQ(csv_error("hour,demand\n0,1\n"), ErrorCode::kCsvParse);
  EXPECT_EQ(csv_error("hour,demand_kwh,pv_availability\n0,1,0\n2,1,0\n"), ErrorCode::kCsvParse);
  EXPECT_EQ(csv_error("hour,demand_kwh,pv_availability\n0,abc,0\n"), ErrorCode::kCsvParse);
  EXPECT_EQ(csv_error("hour,demand_kwh,pv_availability\n0,1\n"), ErrorCode::kCsvParse);
  EXPECT_EQ(csv_error("hour,demand_kwh,pv_availability\n0,-1,0\n"), ErrorCode::kNegativeDemand);
  EXPECT_EQ(csv_error("hour,demand_kwh,pv_availability\n0,1,1.5\n"), ErrorCode::kCsvParse);
  EXPECT_EQ(csv_error("hour,demand_kwh,pv_availability\n"), ErrorCode::kCsvParse);
}

TEST(Energy, MissingCsvFile) {
  try {
    load_energy_csv("/nonexistent/demand.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}
