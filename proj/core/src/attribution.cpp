#include "xlp/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "xlp/error.hpp"

namespace xlp {

namespace {

constexpr double kNearZeroDivisor = 100.0;
constexpr double kEqualEdgeValue = 0.01;
constexpr double kItemAverageDivisor = 10.0;

void add_caveat(std::vector<std::string>& caveats, const std::string& text) {
  if (std::find(caveats.begin(), caveats.end(), text) == caveats.end()) caveats.push_back(text);
}

void add_gradient_caveats(std::vector<std::string>& caveats, const GradientBundle& g) {
  for (const auto& note : g.notes) add_caveat(caveats, note);
  if (g.dual_selection == DualSelection::kBasis && g.map_kind == MapKind::kObjective) {
    add_caveat(caveats, "duals taken from the final simplex basis");
  }
}

ModelSolution require_solution(const Problem& p, PivotRule rule) {
  ModelSolution s = solve(p, rule);
  if (s.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kNotOptimal, "problem '" + p.name + "' is " + to_string(s.status));
  }
  return s;
}

Baseline scaled(const Problem& p, BaselineKind kind) {
  return {kind, p.A / kNearZeroDivisor, p.b / kNearZeroDivisor, p.w / kNearZeroDivisor};
}

bool row_tight(const Problem& p, const Vector& x, int i) {
  const double scale = 1.0 + std::abs(p.b(i)) + p.A.row(i).cwiseAbs().dot(x.cwiseAbs());
  return std::abs(p.A.row(i).dot(x) - p.b(i)) <= 1e-9 * scale;
}

Baseline constraint_baseline(const Problem& p, BaselineKind kind, PivotRule rule) {
  if (p.family != Family::kResource || p.rows() != 2 || p.has_integers()) {
    throw Error(ErrorCode::kBaselineInapplicable,
                to_string(kind) + " needs a two-constraint resource problem");
  }
  Baseline base = scaled(p, kind);
  const int keep = kind == BaselineKind::kConstraint2Active ? 1 : 0;
  const int other = 1 - keep;

  // Optimum with the other row dropped; the baseline then either passes the
  // other row through this point or moves it out of the way.
  Problem single = interpolate(p, base, 0.0);
  single.A = base.A.row(keep);
  single.b = base.b.segment(keep, 1);
  single.senses = {p.senses[keep]};
  single.structures.clear();
  LpSolution s = solve_lp(single, rule);
  if (s.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kBaselineInapplicable,
                "row " + std::to_string(keep + 1) + " alone does not bound the scaled problem");
  }
  const double at = base.A.row(other).dot(s.x);
  if (kind == BaselineKind::kBothActive) {
    base.b(other) = at;
  } else {
    base.b(other) = std::max(base.b(other), 2.0 * std::abs(at) + std::abs(base.b(other)) + 1e-3);
  }

  Problem check = interpolate(p, base, 0.0);
  LpSolution c = solve_lp(check, rule);
  const bool ok = c.status == SolveStatus::kOptimal && row_tight(check, c.x, keep) &&
                  (kind == BaselineKind::kBothActive) == row_tight(check, c.x, other);
  if (!ok) {
    throw Error(ErrorCode::kBaselineInapplicable,
                "could not construct a baseline where " + to_string(kind) + " holds");
  }
  return base;
}

}  // namespace

Baseline make_baseline(const Problem& p, BaselineKind kind, PivotRule rule) {
  switch (kind) {
    case BaselineKind::kNearZero: return scaled(p, kind);
    case BaselineKind::kEqualEdges: {
      Baseline base{kind, p.A, p.b, p.w};
      if (p.family == Family::kMaxFlow) {
        for (int i = 0; i < p.rows(); ++i) {
          if (p.senses[i] == RowSense::kLessEqual) base.b(i) = kEqualEdgeValue;
        }
      } else if (p.family == Family::kShortestPath) {
        base.w.setConstant(kEqualEdgeValue);
      } else {
        throw Error(ErrorCode::kBaselineInapplicable, "equal_edges needs a max-flow or shortest-path problem");
      }
      return base;
    }
    case BaselineKind::kItemAverageTenth: {
      if (p.family != Family::kKnapsack) {
        throw Error(ErrorCode::kBaselineInapplicable, "item_average_tenth needs a knapsack problem");
      }
      Baseline base{kind, p.A, p.b, p.w};
      base.A.setConstant(p.A.mean() / kItemAverageDivisor);
      base.w.setConstant(p.w.mean() / kItemAverageDivisor);
      return base;
    }
    case BaselineKind::kConstraint1Active:
    case BaselineKind::kConstraint2Active:
    case BaselineKind::kBothActive: return constraint_baseline(p, kind, rule);
    case BaselineKind::kCustom:
      throw Error(ErrorCode::kInvalidArgument, "custom baselines are built with custom_baseline");
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown baseline kind");
}

Baseline custom_baseline(const Problem& p, Matrix A, Vector b, Vector w) {
  if (A.rows() != p.rows() || A.cols() != p.cols() || b.size() != p.rows() || w.size() != p.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "baseline shapes do not match problem '" + p.name + "'");
  }
  if (!A.allFinite() || !b.allFinite() || !w.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "baseline has non-finite entries");
  }
  return {BaselineKind::kCustom, std::move(A), std::move(b), std::move(w)};
}

Problem interpolate(const Problem& p, const Baseline& baseline, double alpha) {
  Problem q = p;
  q.A = baseline.A + alpha * (p.A - baseline.A);
  q.b = baseline.b + alpha * (p.b - baseline.b);
  q.w = baseline.w + alpha * (p.w - baseline.w);
  return q;
}

Attribution saliency(const Problem& p, const GradientBundle& g, MapKind map, std::optional<int> target) {
  OutputGradient og = output_gradient(g, map, target);
  if (og.dA.rows() != p.rows() || og.dA.cols() != p.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "gradients do not match problem '" + p.name + "'");
  }
  Attribution a;
  a.method = Method::kSaliency;
  a.map_kind = map;
  a.target = map == MapKind::kSolution ? target : std::nullopt;
  a.scores_A = og.dA;
  a.scores_b = og.db;
  a.scores_w = og.dw;
  add_gradient_caveats(a.caveats, g);
  return a;
}

Attribution gradient_times_input(const Problem& p, const GradientBundle& g, MapKind map,
                                 std::optional<int> target) {
  Attribution a = saliency(p, g, map, target);
  a.method = Method::kGradientTimesInput;
  a.scores_A = a.scores_A.cwiseProduct(p.A);
  a.scores_b = a.scores_b.cwiseProduct(p.b);
  a.scores_w = a.scores_w.cwiseProduct(p.w);
  return a;
}

Attribution integrated_gradients(const Problem& p, const Baseline& baseline,
                                 const AttributionOptions& options) {
  if (options.steps < 1) throw Error(ErrorCode::kInvalidArgument, "steps must be positive");
  if (baseline.A.rows() != p.rows() || baseline.A.cols() != p.cols() ||
      baseline.b.size() != p.rows() || baseline.w.size() != p.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "baseline shapes do not match problem '" + p.name + "'");
  }
  Matrix sum_A = Matrix::Zero(p.rows(), p.cols());
  Vector sum_b = Vector::Zero(p.rows());
  Vector sum_w = Vector::Zero(p.cols());
  Attribution a;
  a.method = Method::kIntegratedGradients;
  a.map_kind = options.map;
  a.target = options.map == MapKind::kSolution ? options.target : std::nullopt;
  a.rule = options.rule;
  a.baseline = baseline;
  a.steps = options.steps;
  int degenerate = 0;
  for (int k = 0; k < options.steps; ++k) {
    const double alpha = (k + 0.5) / options.steps;
    Problem q = interpolate(p, baseline, alpha);
    ModelSolution s = solve(q, options.rule);
    if (s.status != SolveStatus::kOptimal) {
      std::ostringstream msg;
      msg << "interpolated problem is " << to_string(s.status) << " at alpha=" << alpha;
      throw Error(ErrorCode::kPathInfeasible, msg.str());
    }
    GradientBundle g = model_gradients(q, s, options.map, options.duals);
    OutputGradient og = output_gradient(g, options.map, a.target);
    sum_A += og.dA;
    sum_b += og.db;
    sum_w += og.dw;
    if (g.degenerate) ++degenerate;
    if (g.surrogate) add_caveat(a.caveats, "integer program: gradients of a relaxation surrogate");
    if (g.dual_selection == DualSelection::kBasis && options.map == MapKind::kObjective) {
      add_caveat(a.caveats, "duals taken from the final simplex basis");
    }
  }
  const double inv = 1.0 / options.steps;
  a.scores_A = (p.A - baseline.A).cwiseProduct(sum_A) * inv;
  a.scores_b = (p.b - baseline.b).cwiseProduct(sum_b) * inv;
  a.scores_w = (p.w - baseline.w).cwiseProduct(sum_w) * inv;
  if (degenerate > 0) {
    add_caveat(a.caveats, "degenerate or non-unique optimum at " + std::to_string(degenerate) + " of " +
                              std::to_string(options.steps) + " path points");
  }
  return a;
}

Attribution occlusion(const Problem& p, const std::vector<std::string>& structures,
                      const AttributionOptions& options) {
  std::vector<std::string> names = structures;
  if (names.empty()) {
    for (const auto& s : p.structures) names.push_back(s.name);
  }
  for (const auto& name : names) p.structure(name);
  if (options.map == MapKind::kSolution && options.target &&
      (*options.target < 0 || *options.target >= p.cols())) {
    throw Error(ErrorCode::kInvalidArgument, "target component out of range");
  }

  const ModelSolution base = require_solution(p, options.rule);
  Attribution a;
  a.method = Method::kOcclusion;
  a.map_kind = options.map;
  a.target = options.map == MapKind::kSolution ? options.target : std::nullopt;
  a.rule = options.rule;
  if (base.lp.multiple_optima) {
    add_caveat(a.caveats, "original problem has multiple optima; scores depend on the solver");
  }
  for (const auto& name : names) {
    MaskResult masked = mask_with_index_map(p, name);
    ModelSolution s = solve(masked.problem, options.rule);
    StructureScore score;
    score.name = name;
    score.solved = s.status == SolveStatus::kOptimal;
    if (!score.solved) {
      a.scores_structures.push_back(std::move(score));
      continue;
    }
    if (s.lp.multiple_optima) {
      add_caveat(a.caveats, "masked problem without '" + name + "' has multiple optima");
    }
    if (options.map == MapKind::kObjective) {
      score.value = base.objective - s.objective;
    } else {
      std::vector<std::optional<double>> comp(p.cols());
      for (std::size_t k = 0; k < masked.col_origin.size(); ++k) {
        const int j = masked.col_origin[k];
        comp[j] = base.x(j) - s.x(static_cast<long>(k));
      }
      if (options.target) {
        score.value = comp[*options.target];
      } else {
        score.components = std::move(comp);
      }
    }
    a.scores_structures.push_back(std::move(score));
  }
  return a;
}

Attribution attribute(const Problem& p, Method method, const AttributionOptions& options,
                      const std::optional<Baseline>& baseline) {
  switch (method) {
    case Method::kSaliency:
    case Method::kGradientTimesInput: {
      const ModelSolution s = require_solution(p, options.rule);
      const GradientBundle g = model_gradients(p, s, options.map, options.duals);
      Attribution a = method == Method::kSaliency ? saliency(p, g, options.map, options.target)
                                                  : gradient_times_input(p, g, options.map, options.target);
      a.rule = options.rule;
      return a;
    }
    case Method::kIntegratedGradients:
      return integrated_gradients(p, baseline ? *baseline : make_baseline(p, BaselineKind::kNearZero),
                                  options);
    case Method::kOcclusion: return occlusion(p, {}, options);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method");
}

double structure_relevance(const Problem& p, const Attribution& a, const Structure& s) {
  if (a.method == Method::kOcclusion) {
    for (const auto& score : a.scores_structures) {
      if (score.name != s.name) continue;
      double v = score.value ? std::abs(*score.value) : 0.0;
      for (const auto& c : score.components) {
        if (c) v = std::max(v, std::abs(*c));
      }
      return v;
    }
    throw Error(ErrorCode::kUnknownStructure, "no occlusion score for '" + s.name + "'");
  }
  std::set<std::pair<int, int>> cells(s.entries.begin(), s.entries.end());
  double v = 0.0;
  for (int r : s.rows) {
    v = std::max(v, std::abs(a.scores_b(r)));
    for (int j = 0; j < p.cols(); ++j) cells.insert({r, j});
  }
  for (int c : s.cols) {
    v = std::max(v, std::abs(a.scores_w(c)));
    for (int i = 0; i < p.rows(); ++i) cells.insert({i, c});
  }
  for (auto [r, c] : cells) v = std::max(v, std::abs(a.scores_A(r, c)));
  return v;
}

std::string to_string(Method method) {
  switch (method) {
    case Method::kSaliency: return "saliency";
    case Method::kGradientTimesInput: return "gxi";
    case Method::kIntegratedGradients: return "ig";
    case Method::kOcclusion: return "occlusion";
  }
  return "unknown";
}

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kNearZero: return "near_zero";
    case BaselineKind::kEqualEdges: return "equal_edges";
    case BaselineKind::kItemAverageTenth: return "item_average_tenth";
    case BaselineKind::kConstraint1Active: return "constraint1_active";
    case BaselineKind::kConstraint2Active: return "constraint2_active";
    case BaselineKind::kBothActive: return "both_active";
    case BaselineKind::kCustom: return "custom";
  }
  return "unknown";
}

Method parse_method(const std::string& text) {
  if (text == "saliency" || text == "sal") return Method::kSaliency;
  if (text == "gxi" || text == "gradient_times_input") return Method::kGradientTimesInput;
  if (text == "ig" || text == "integrated_gradients") return Method::kIntegratedGradients;
  if (text == "occlusion" || text == "occ" || text == "granger") return Method::kOcclusion;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + text + "'");
}

BaselineKind parse_baseline_kind(const std::string& text) {
  for (BaselineKind k : {BaselineKind::kNearZero, BaselineKind::kEqualEdges, BaselineKind::kItemAverageTenth,
                         BaselineKind::kConstraint1Active, BaselineKind::kConstraint2Active,
                         BaselineKind::kBothActive, BaselineKind::kCustom}) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown baseline '" + text + "'");
}

}  // namespace xlp
