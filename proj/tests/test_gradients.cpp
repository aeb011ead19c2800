#include <gtest/gtest.h>

#include "xlp/error.hpp"
#include "xlp/gradients.hpp"
#include "xlp/problems.hpp"

using namespace xlp;

namespace {

struct Tally {
  int compared = 0;
  int kinks = 0;
};

Tally compare_with_fd(const Problem& p, MapKind map) {
  Tally t;
  const LpSolution s = solve_lp(p);
  const GradientBundle g = map == MapKind::kObjective ? objective_gradients(p, s) : solution_jacobians(p, s);
  for (Parameter param : {Parameter::kA, Parameter::kB, Parameter::kW}) {
    FdOptions fd_options;
    fd_options.throw_on_infeasible = false;
    const FdResult fd = finite_difference_oracle(p, map, param, fd_options);
    const Matrix an = flatten(g, map, param, p.rows(), p.cols());
    EXPECT_EQ(an.rows(), fd.values.rows());
    EXPECT_EQ(an.cols(), fd.values.cols());
    for (long r = 0; r < fd.values.rows(); ++r) {
      for (long c = 0; c < fd.values.cols(); ++c) {
        if (fd.flags[r][c] != FdFlag::kOk) {
          ++t.kinks;
          continue;
        }
        ++t.compared;
        const double f = fd.values(r, c);
        EXPECT_LE(std::abs(an(r, c) - f), std::max(1e-5 * std::abs(f), 1e-7))
            << p.name << " " << to_string(map) << " d/d" << to_string(param) << " [" << r << "," << c << "] analytic "
            << an(r, c) << " fd " << f;
      }
    }
  }
  return t;
}

}  // namespace

TEST(Gradients, MatchFiniteDifferencesAwayFromKinks) {
  for (CaseId id : {CaseId::RO1, CaseId::RO2, CaseId::RO3, CaseId::MF1, CaseId::SP1}) {
    const Problem p = relaxation(case_problem(id));
    for (MapKind map : {MapKind::kObjective, MapKind::kSolution}) {
      const Tally t = compare_with_fd(p, map);
      EXPECT_GT(t.compared, 0) << to_string(id);
    }
  }
}

TEST(Gradients, RO1ObjectiveGradients) {
  const Problem p = case_problem(CaseId::RO1);
  const GradientBundle g = objective_gradients(p, solve_lp(p));
  EXPECT_NEAR(g.dO_db(0), 2.0, 1e-12);
  EXPECT_NEAR(g.dO_db(1), 0.0, 1e-12);
  EXPECT_NEAR(g.dO_dw(1), 8.0, 1e-12);
  EXPECT_NEAR(g.dO_dA(0, 1), -16.0, 1e-12);
  EXPECT_FALSE(g.degenerate);
}

TEST(Gradients, DegenerateVertexFlagsKinks) {
  // MF1 has a degenerate optimum; the oracle must mark the one-sided entries.
  const Problem p = case_problem(CaseId::MF1);
  const FdResult fd = finite_difference_oracle(p, MapKind::kObjective, Parameter::kB);
  int kinks = 0;
  for (const auto& row : fd.flags) {
    for (FdFlag f : row) kinks += f == FdFlag::kKink;
  }
  EXPECT_GT(kinks, 0);
  EXPECT_TRUE(objective_gradients(p, solve_lp(p)).degenerate);
}

TEST(Gradients, LeastNormDualsAreSmallestValidDuals) {
  // RO5's optimum is degenerate: both rows and x1 >= 0 are tight.
  const Problem p = case_problem(CaseId::RO5);
  const LpSolution s = solve_lp(p);
  const Vector ln = least_norm_duals(p, s.x);
  const Vector basis = objective_gradients(p, s, DualSelection::kBasis).dO_db;
  EXPECT_LE(ln.norm(), basis.norm() + 1e-12);
  EXPECT_NEAR(ln.dot(p.b), s.objective, 1e-9);
  EXPECT_TRUE((ln.array() >= -1e-12).all());
}

TEST(Gradients, SolutionJacobianShapes) {
  const Problem p = case_problem(CaseId::RO2);
  const GradientBundle g = solution_jacobians(p, solve_lp(p));
  EXPECT_EQ(g.dS_db.rows(), p.cols());
  EXPECT_EQ(g.dS_db.cols(), p.rows());
  EXPECT_EQ(g.dS_dw.rows(), p.cols());
  ASSERT_EQ(static_cast<int>(g.dS_dA.size()), p.cols());
  EXPECT_EQ(g.dS_dA[0].rows(), p.rows());
}

TEST(Gradients, IlpGradientsUseSurrogate) {
  const Problem p = case_problem(CaseId::KS3);
  const ModelSolution s = solve(p);
  const GradientBundle g = model_gradients(p, s, MapKind::kObjective);
  EXPECT_TRUE(g.surrogate);
  EXPECT_NEAR(g.objective, 15.0, 1e-9);
}

TEST(Gradients, OutputGradientSelectsTarget) {
  const Problem p = case_problem(CaseId::RO1);
  const LpSolution s = solve_lp(p);
  const GradientBundle g = solution_jacobians(p, s);
  const OutputGradient o = output_gradient(g, MapKind::kSolution, 1);
  EXPECT_NEAR(o.value, 8.0, 1e-12);
  EXPECT_NEAR(o.db(0), g.dS_db(1, 0), 0.0);
  EXPECT_THROW(output_gradient(g, MapKind::kSolution, 5), Error);
  EXPECT_THROW(output_gradient(g, MapKind::kObjective, {}), Error);
}

TEST(Gradients, NotOptimalIsRejected) {
  ProblemData d;
  d.name = "unb";
  d.A = Matrix{{1.0, -1.0}};
  d.b = Vector{{1.0}};
  d.w = Vector{{1.0, 1.0}};
  const Problem p = build_problem(d);
  try {
    objective_gradients(p, solve_lp(p));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotOptimal);
  }
}
