#include "xlp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <queue>
#include <set>

#include "simplex.hpp"
#include "xlp/error.hpp"

namespace xlp {

namespace {

void snap_to_bounds(const Problem& p, Vector& x) {
  for (int j = 0; j < p.cols(); ++j) {
    if (std::isfinite(p.lower(j)) && std::abs(x(j) - p.lower(j)) <= 1e-11 * (1.0 + std::abs(p.lower(j)))) {
      x(j) = p.lower(j);
    }
    if (std::isfinite(p.upper(j)) && std::abs(x(j) - p.upper(j)) <= 1e-11 * (1.0 + std::abs(p.upper(j)))) {
      x(j) = p.upper(j);
    }
  }
}

std::vector<ActiveConstraint> active_set(const StandardForm& sf, const std::vector<int>& basis) {
  const int N = static_cast<int>(sf.col_origin.size());
  const int M = static_cast<int>(sf.row_origin.size());
  std::vector<bool> basic(N + M, false);
  for (int k : basis) {
    if (k < N + M) basic[k] = true;
  }
  std::vector<ActiveConstraint> out;
  auto add = [&](ActiveConstraint a) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  };
  for (int r = 0; r < M; ++r) {
    if (basic[N + r]) continue;
    const auto& o = sf.row_origin[r];
    if (o.kind == StandardForm::RowOrigin::Kind::kConstraint) {
      add({ActiveConstraint::Kind::kRow, o.index});
    } else {
      add({ActiveConstraint::Kind::kUpperBound, o.index});
    }
  }
  for (int k = 0; k < N; ++k) {
    if (basic[k]) continue;
    const auto& o = sf.col_origin[k];
    if (o.kind == StandardForm::ColKind::kShiftLower) {
      add({ActiveConstraint::Kind::kLowerBound, o.var});
    } else if (o.kind == StandardForm::ColKind::kFlipUpper) {
      add({ActiveConstraint::Kind::kUpperBound, o.var});
    }
  }
  return out;
}

bool same_point(const Vector& a, const Vector& b) {
  const double scale = 1.0 + std::max(a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>());
  return (a - b).lpNorm<Eigen::Infinity>() <= 1e-7 * scale;
}

}  // namespace

namespace {

LpSolution solve_lp_impl(const Problem& p, PivotRule rule, const Tolerances& tol, bool probe) {
  StandardForm sf = to_standard_form(p);
  detail::Simplex simplex(sf.M, sf.r, sf.c, rule, tol);
  LpSolution sol;
  sol.pivot_rule = rule;
  sol.status = simplex.solve();
  sol.iterations = simplex.iterations();
  if (sol.status != SolveStatus::kOptimal) return sol;

  sol.x = sf.to_original(simplex.structural_values());
  snap_to_bounds(p, sol.x);
  sol.objective = p.objective_value(sol.x);
  sol.duals = sf.original_duals(simplex.row_duals());
  for (int i = 0; i < sol.duals.size(); ++i) {
    if (std::abs(sol.duals(i)) < 1e-12) sol.duals(i) = 0.0;
  }
  sol.standard_basis = simplex.basis();
  sol.basis = active_set(sf, sol.standard_basis);
  if (probe) sol.multiple_optima = !multiplicity_probe(p, sol, 1).empty();
  return sol;
}

}  // namespace

LpSolution solve_lp(const Problem& p, PivotRule rule, const Tolerances& tol) {
  return solve_lp_impl(p, rule, tol, true);
}

std::vector<Vector> multiplicity_probe(const Problem& p, const LpSolution& sol, int k) {
  std::vector<Vector> found;
  if (sol.status != SolveStatus::kOptimal || k <= 0) return found;
  StandardForm sf = to_standard_form(p);
  detail::Simplex simplex(sf.M, sf.r, sf.c, sol.pivot_rule, Tolerances{});
  constexpr std::size_t kMaxBases = 200;

  std::set<std::vector<int>> visited;
  std::deque<std::vector<int>> queue;
  auto key = [](std::vector<int> b) {
    std::sort(b.begin(), b.end());
    return b;
  };
  visited.insert(key(sol.standard_basis));
  queue.push_back(sol.standard_basis);
  while (!queue.empty() && visited.size() <= kMaxBases) {
    std::vector<int> basis = queue.front();
    queue.pop_front();
    simplex.load_basis(basis);
    for (int q : simplex.zero_cost_columns()) {
      auto move = simplex.preview(q);
      Vector x = sf.to_original(move.point);
      if (p.max_violation(x) > 1e-7 * (1.0 + x.lpNorm<Eigen::Infinity>())) continue;
      bool fresh = !same_point(x, sol.x);
      for (const auto& f : found) fresh = fresh && !same_point(x, f);
      if (fresh) {
        found.push_back(x);
        if (static_cast<int>(found.size()) >= k) return found;
      }
      if (move.ray) continue;
      std::vector<int> next = basis;
      next[move.leaving_row] = q;
      if (visited.insert(key(next)).second) queue.push_back(next);
    }
  }
  return found;
}

IlpSolution solve_ilp(const Problem& p, PivotRule rule, const Tolerances& tol) {
  IlpSolution out;
  out.pivot_rule = rule;
  const Problem relaxed = relaxation(p);
  const double sign = p.sense_sign();

  struct Node {
    double bound;
    int id;
    Vector lower, upper;
    LpSolution lp;
  };
  auto worse = [](const Node& a, const Node& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);

  Problem work = relaxed;
  int next_id = 0;
  auto evaluate = [&](const Vector& lower, const Vector& upper) -> std::optional<Node> {
    work.lower = lower;
    work.upper = upper;
    ++out.node_count;
    LpSolution lp = solve_lp_impl(work, rule, tol, false);
    if (lp.status == SolveStatus::kUnbounded) {
      throw Error(ErrorCode::kSolveFailed, "unbounded relaxation inside branch-and-bound");
    }
    if (lp.status != SolveStatus::kOptimal) return std::nullopt;
    return Node{sign * lp.objective, next_id++, lower, upper, std::move(lp)};
  };

  LpSolution root_lp = solve_lp_impl(relaxed, rule, tol, false);
  ++out.node_count;
  if (root_lp.status != SolveStatus::kOptimal) {
    out.status = root_lp.status;
    return out;
  }
  const double root_value = sign * root_lp.objective;
  open.push(Node{root_value, next_id++, p.lower, p.upper, root_lp});

  double best = -kInf;
  Vector incumbent;
  auto gap = [](double v) { return 1e-9 * (1.0 + std::abs(v)); };
  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (std::isfinite(best) && node.bound <= best + gap(best)) continue;

    int branch = -1;
    double most = tol.integrality;
    for (int j = 0; j < p.cols(); ++j) {
      if (!p.integer[j]) continue;
      const double v = node.lp.x(j);
      const double frac = std::abs(v - std::floor(v + 0.5));
      if (frac > most + 1e-12) {
        most = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      Vector x = node.lp.x;
      for (int j = 0; j < p.cols(); ++j) {
        if (p.integer[j]) x(j) = std::round(x(j));
      }
      const double value = sign * p.objective_value(x);
      if (value > best + gap(best) || !std::isfinite(best)) {
        best = value;
        incumbent = x;
      }
      continue;
    }
    const double v = node.lp.x(branch);
    Vector down_upper = node.upper;
    down_upper(branch) = std::floor(v);
    Vector up_lower = node.lower;
    up_lower(branch) = std::ceil(v);
    for (int side = 0; side < 2; ++side) {
      const Vector& lo = side == 0 ? node.lower : up_lower;
      const Vector& hi = side == 0 ? down_upper : node.upper;
      if (lo(branch) > hi(branch)) continue;
      auto child = evaluate(lo, hi);
      if (child && (!std::isfinite(best) || child->bound > best + gap(best))) {
        open.push(std::move(*child));
      }
    }
  }

  if (incumbent.size() == 0) {
    out.status = SolveStatus::kInfeasible;
    return out;
  }
  out.status = SolveStatus::kOptimal;
  out.x = incumbent;
  out.objective = p.objective_value(incumbent);

  // Surrogate relaxation whose optimum contains the incumbent.
  out.relaxation_tight = std::abs(root_value - best) <= gap(best);
  Problem surrogate = relaxed;
  if (!out.relaxation_tight) {
    for (int j = 0; j < p.cols(); ++j) {
      if (!p.integer[j]) continue;
      if (incumbent(j) <= p.lower(j)) {
        surrogate.upper(j) = p.lower(j);
      } else {
        surrogate.upper(j) = incumbent(j);
      }
    }
    LpSolution check = solve_lp_impl(surrogate, rule, tol, false);
    if (check.status != SolveStatus::kOptimal ||
        std::abs(sign * check.objective - best) > gap(best)) {
      for (int j = 0; j < p.cols(); ++j) {
        if (!p.integer[j]) continue;
        surrogate.lower(j) = incumbent(j);
        surrogate.upper(j) = incumbent(j);
      }
    }
  }
  out.surrogate = surrogate;
  out.surrogate_solution = solve_lp(surrogate, rule, tol);
  out.surrogate_solution.x = incumbent;
  out.surrogate_solution.objective = out.objective;
  return out;
}

ModelSolution solve(const Problem& p, PivotRule rule) {
  ModelSolution s;
  if (p.has_integers()) {
    IlpSolution ilp = solve_ilp(p, rule);
    s.status = ilp.status;
    s.integer = true;
    if (ilp.status == SolveStatus::kOptimal) {
      s.x = ilp.x;
      s.objective = ilp.objective;
      s.lp = ilp.surrogate_solution;
    }
    s.ilp = std::move(ilp);
    return s;
  }
  s.lp = solve_lp(p, rule);
  s.status = s.lp.status;
  s.x = s.lp.x;
  s.objective = s.lp.objective;
  return s;
}

PivotRule default_pivot_rule() {
  const char* env = std::getenv("XLP_PIVOT");
  if (env == nullptr || *env == '\0') return PivotRule::kDantzig;
  return parse_pivot_rule(env);
}

std::string to_string(PivotRule rule) {
  return rule == PivotRule::kDantzig ? "dantzig" : "bland";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

PivotRule parse_pivot_rule(const std::string& text) {
  if (text == "dantzig") return PivotRule::kDantzig;
  if (text == "bland") return PivotRule::kBland;
  throw Error(ErrorCode::kInvalidArgument, "unknown pivot rule '" + text + "'");
}

}  // namespace xlp
