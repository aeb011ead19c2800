#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xlp/gradients.hpp"
#include "xlp/model.hpp"
#include "xlp/solver.hpp"

namespace xlp {

enum class Method { kSaliency, kGradientTimesInput, kIntegratedGradients, kOcclusion };

enum class BaselineKind {
  kNearZero,
  kEqualEdges,
  kItemAverageTenth,
  kConstraint1Active,
  kConstraint2Active,
  kBothActive,
  kCustom,
};

struct Baseline {
  BaselineKind kind = BaselineKind::kNearZero;
  Matrix A;
  Vector b;
  Vector w;
};

// near_zero: every parameter / 100.
// equal_edges: capacities (max flow) or weights (shortest path) all 0.01.
// item_average_tenth: every item gets mean value / 10 and mean weight / 10.
// constraintK_active / both_active: two-row resource problems scaled by 1/100
// with the right-hand sides adjusted so that only row K (or both rows) bind
// at the baseline optimum; checked by solving.
Baseline make_baseline(const Problem& p, BaselineKind kind, PivotRule rule = PivotRule::kDantzig);
Baseline custom_baseline(const Problem& p, Matrix A, Vector b, Vector w);

// baseline + alpha * (p - baseline), all other fields of p kept.
Problem interpolate(const Problem& p, const Baseline& baseline, double alpha);

struct StructureScore {
  std::string name;
  // False when the masked problem has no optimal solution.
  bool solved = false;
  // Objective map, or the target component of the solution map.
  std::optional<double> value;
  // Solution map without a target: one entry per original variable,
  // empty for variables removed by the mask.
  std::vector<std::optional<double>> components;
};

struct Attribution {
  Method method = Method::kSaliency;
  MapKind map_kind = MapKind::kObjective;
  std::optional<int> target;
  PivotRule rule = PivotRule::kDantzig;
  Matrix scores_A;
  Vector scores_b;
  Vector scores_w;
  std::vector<StructureScore> scores_structures;
  std::optional<Baseline> baseline;
  int steps = 0;
  std::vector<std::string> caveats;
};

struct AttributionOptions {
  MapKind map = MapKind::kObjective;
  std::optional<int> target;
  PivotRule rule = PivotRule::kDantzig;
  DualSelection duals = DualSelection::kLeastNorm;
  int steps = 100;
};

Attribution saliency(const Problem& p, const GradientBundle& g, MapKind map,
                     std::optional<int> target = {});
Attribution gradient_times_input(const Problem& p, const GradientBundle& g, MapKind map,
                                 std::optional<int> target = {});

// Midpoint rule over options.steps points, A, b and w interpolated jointly.
// Throws PathInfeasible naming the first alpha without an optimal solution.
Attribution integrated_gradients(const Problem& p, const Baseline& baseline,
                                 const AttributionOptions& options = {});

// score(s) = M(p) - M(p without s), both solved with options.rule.
// An empty list means every structure of p.
Attribution occlusion(const Problem& p, const std::vector<std::string>& structures = {},
                      const AttributionOptions& options = {});

// Granger-causal attribution of a masked structure; identical to occlusion.
inline Attribution granger_causality(const Problem& p, const std::vector<std::string>& structures = {},
                                     const AttributionOptions& options = {}) {
  return occlusion(p, structures, options);
}

// Solves p and runs the requested method. baseline is used by IG only and
// defaults to near_zero.
Attribution attribute(const Problem& p, Method method, const AttributionOptions& options = {},
                      const std::optional<Baseline>& baseline = {});

// Total relevance assigned to the parameter entries touched by a structure,
// as the largest absolute score. Used to compare gradient methods with occlusion.
double structure_relevance(const Problem& p, const Attribution& a, const Structure& s);

std::string to_string(Method method);
std::string to_string(BaselineKind kind);
Method parse_method(const std::string& text);
BaselineKind parse_baseline_kind(const std::string& text);

}  // namespace xlp
