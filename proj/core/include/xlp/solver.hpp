#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xlp/model.hpp"

namespace xlp {

enum class PivotRule { kDantzig, kBland };
enum class SolveStatus { kOptimal, kInfeasible, kUnbounded };

struct Tolerances {
  double feasibility = 1e-8;
  double reduced_cost = 1e-9;
  double integrality = 1e-6;
};

// A constraint that is active in the final basis, in original-problem terms.
struct ActiveConstraint {
  enum class Kind { kRow, kLowerBound, kUpperBound } kind;
  int index;

  bool operator==(const ActiveConstraint&) const = default;
};

struct LpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  Vector x;
  // d(objective)/d(b) in the problem's own sense, from the final basis.
  Vector duals;
  std::vector<ActiveConstraint> basis;
  double objective = 0.0;
  bool multiple_optima = false;
  PivotRule pivot_rule = PivotRule::kDantzig;
  int iterations = 0;
  // Standard-form basis, kept for vertex probing.
  std::vector<int> standard_basis;
};

struct IlpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  Vector x;
  double objective = 0.0;
  int node_count = 0;
  PivotRule pivot_rule = PivotRule::kDantzig;
  // Relaxation whose optimum is the incumbent; see ilp_surrogate.
  Problem surrogate;
  LpSolution surrogate_solution;
  // True when the plain relaxation already attains the integer optimum.
  bool relaxation_tight = false;
};

// Continuous solve. Integrality flags are ignored.
LpSolution solve_lp(const Problem& p, PivotRule rule = PivotRule::kDantzig,
                    const Tolerances& tol = {});

IlpSolution solve_ilp(const Problem& p, PivotRule rule = PivotRule::kDantzig,
                      const Tolerances& tol = {});

// Other optimal vertices reachable by zero-reduced-cost pivots from sol's basis.
std::vector<Vector> multiplicity_probe(const Problem& p, const LpSolution& sol, int k = 4);

// Result of solving with or without integrality, whichever p requires.
struct ModelSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  Vector x;
  double objective = 0.0;
  bool integer = false;
  LpSolution lp;
  std::optional<IlpSolution> ilp;
};

ModelSolution solve(const Problem& p, PivotRule rule = PivotRule::kDantzig);

// Default rule, honouring the XLP_PIVOT environment variable.
PivotRule default_pivot_rule();

std::string to_string(PivotRule rule);
std::string to_string(SolveStatus status);
PivotRule parse_pivot_rule(const std::string& text);

}  // namespace xlp
