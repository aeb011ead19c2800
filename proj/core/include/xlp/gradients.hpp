#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xlp/model.hpp"
#include "xlp/solver.hpp"

namespace xlp {

enum class MapKind { kSolution, kObjective };
enum class DualSelection { kLeastNorm, kBasis };
enum class Parameter { kA, kB, kW };

struct GradientBundle {
  MapKind map_kind = MapKind::kObjective;
  Vector x;
  double objective = 0.0;
  Vector duals;
  DualSelection dual_selection = DualSelection::kLeastNorm;

  // Objective map O(A, b, w).
  Vector dO_dw;
  Vector dO_db;
  Matrix dO_dA;

  // Solution map S(A, b, w): dS_db is n x m, dS_dw is n x n and
  // dS_dA[k](i, j) = d x_k / d A_ij.
  Matrix dS_db;
  std::vector<Matrix> dS_dA;
  Matrix dS_dw;

  bool degenerate = false;
  bool surrogate = false;
  std::vector<std::string> notes;
};

// Constraints tight at x: rows (any sense) and variable bounds.
struct TightSet {
  std::vector<int> rows;
  std::vector<int> lower;
  std::vector<int> upper;
  int size() const { return static_cast<int>(rows.size() + lower.size() + upper.size()); }
};

TightSet tight_set(const Problem& p, const Vector& x, double tol = 1e-9);

// Minimum-norm optimal multipliers at the optimal point x, mapped to
// d(objective)/d(b). Throws SolveFailed when the KKT system is inconsistent.
Vector least_norm_duals(const Problem& p, const Vector& x);

GradientBundle objective_gradients(const Problem& p, const LpSolution& sol,
                                   DualSelection selection = DualSelection::kLeastNorm);
GradientBundle solution_jacobians(const Problem& p, const LpSolution& sol);

// Gradients of the surrogate relaxation attached to an ILP solution.
GradientBundle ilp_relaxation_gradients(const Problem& p, const IlpSolution& sol, MapKind map,
                                        DualSelection selection = DualSelection::kLeastNorm);

// Dispatches to the LP or ILP form depending on how sol was obtained.
GradientBundle model_gradients(const Problem& p, const ModelSolution& sol, MapKind map,
                               DualSelection selection = DualSelection::kLeastNorm);

// Gradient of one scalar output: the objective, or solution component target.
struct OutputGradient {
  double value = 0.0;
  Matrix dA;
  Vector db;
  Vector dw;
};

OutputGradient output_gradient(const GradientBundle& g, MapKind map, std::optional<int> target);

// Analytic derivatives laid out like FdResult::values.
Matrix flatten(const GradientBundle& g, MapKind map, Parameter param, int rows, int cols);

struct FdOptions {
  double h = 1e-5;
  PivotRule rule = PivotRule::kDantzig;
  bool throw_on_infeasible = true;
};

enum class FdFlag { kOk, kKink, kInfeasible };

// Central differences of the continuous relaxation. values is outputs x entries;
// A entries are enumerated row-major. An entry is a kink for every output when
// any output has disagreeing one-sided slopes or changes slope at h/2.
struct FdResult {
  MapKind map;
  Parameter param;
  Matrix values;
  std::vector<std::vector<FdFlag>> flags;
};

FdResult finite_difference_oracle(const Problem& p, MapKind map, Parameter param,
                                  const FdOptions& options = {});

std::string to_string(MapKind map);
std::string to_string(Parameter param);
std::string to_string(DualSelection selection);
MapKind parse_map_kind(const std::string& text);
DualSelection parse_dual_selection(const std::string& text);

}  // namespace xlp
