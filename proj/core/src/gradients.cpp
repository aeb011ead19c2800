#include "xlp/gradients.hpp"

#include <cmath>
#include <optional>

#include "nnls.hpp"
#include "xlp/error.hpp"

namespace xlp {

namespace {

void require_optimal(SolveStatus status) {
  if (status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kNotOptimal, "gradients need an optimal solution, got " +
                                            to_string(status));
  }
}

Vector solve_objective(const Problem& p, PivotRule rule, bool& ok) {
  LpSolution s = solve_lp(p, rule);
  ok = s.status == SolveStatus::kOptimal;
  Vector out(1);
  out(0) = ok ? s.objective : 0.0;
  return out;
}

Vector solve_solution(const Problem& p, PivotRule rule, bool& ok) {
  LpSolution s = solve_lp(p, rule);
  ok = s.status == SolveStatus::kOptimal;
  return ok ? s.x : Vector::Zero(p.cols());
}

double& entry(Problem& p, Parameter param, int idx) {
  switch (param) {
    case Parameter::kA: return p.A(idx / p.cols(), idx % p.cols());
    case Parameter::kB: return p.b(idx);
    case Parameter::kW: return p.w(idx);
  }
  return p.b(idx);
}

int entry_count(const Problem& p, Parameter param) {
  switch (param) {
    case Parameter::kA: return p.rows() * p.cols();
    case Parameter::kB: return p.rows();
    case Parameter::kW: return p.cols();
  }
  return 0;
}

}  // namespace

TightSet tight_set(const Problem& p, const Vector& x, double tol) {
  TightSet t;
  Vector ax = p.A * x;
  for (int i = 0; i < p.rows(); ++i) {
    const double scale = 1.0 + std::abs(p.b(i)) + p.A.row(i).cwiseAbs().dot(x.cwiseAbs());
    if (p.senses[i] == RowSense::kEqual || std::abs(ax(i) - p.b(i)) <= tol * scale) {
      t.rows.push_back(i);
    }
  }
  for (int j = 0; j < p.cols(); ++j) {
    if (std::isfinite(p.lower(j)) && std::abs(x(j) - p.lower(j)) <= tol * (1.0 + std::abs(p.lower(j)))) {
      t.lower.push_back(j);
    }
    if (std::isfinite(p.upper(j)) && std::abs(x(j) - p.upper(j)) <= tol * (1.0 + std::abs(p.upper(j)))) {
      t.upper.push_back(j);
    }
  }
  return t;
}

Vector least_norm_duals(const Problem& p, const Vector& x) {
  const int n = p.cols();
  TightSet t = tight_set(p, x);
  const int k = t.size();
  Matrix M = Matrix::Zero(n, k);
  std::vector<bool> nonneg(k, true);
  int c = 0;
  for (int i : t.rows) {
    switch (p.senses[i]) {
      case RowSense::kLessEqual: M.col(c) = p.A.row(i).transpose(); break;
      case RowSense::kGreaterEqual: M.col(c) = -p.A.row(i).transpose(); break;
      case RowSense::kEqual:
        M.col(c) = p.A.row(i).transpose();
        nonneg[c] = false;
        break;
    }
    ++c;
  }
  for (int j : t.lower) M(j, c++) = -1.0;
  for (int j : t.upper) M(j, c++) = 1.0;

  // Inequality and bound multipliers carry the norm; equality-row multipliers
  // are free and take the minimum-norm completion afterwards.
  const Vector wmax = p.sense_sign() * p.w;
  std::vector<int> eq, ineq;
  for (int i = 0; i < k; ++i) (nonneg[i] ? ineq : eq).push_back(i);
  Matrix ME = M(Eigen::all, eq);
  Matrix MI = M(Eigen::all, ineq);
  Matrix proj = Matrix::Identity(n, n);
  Matrix me_pinv;
  if (!eq.empty()) {
    me_pinv = Eigen::CompleteOrthogonalDecomposition<Matrix>(ME).pseudoInverse();
    proj -= ME * me_pinv;
  }
  auto ui = detail::least_norm_feasible(proj * MI, proj * wmax,
                                        std::vector<bool>(ineq.size(), true));
  if (!ui) {
    throw Error(ErrorCode::kSolveFailed, "no consistent optimal multipliers at the given point");
  }
  Vector u = Vector::Zero(k);
  for (std::size_t i = 0; i < ineq.size(); ++i) u(ineq[i]) = (*ui)(static_cast<long>(i));
  if (!eq.empty()) {
    Vector ue = me_pinv * (wmax - MI * *ui);
    for (std::size_t i = 0; i < eq.size(); ++i) u(eq[i]) = ue(static_cast<long>(i));
  }
  if ((M * u - wmax).lpNorm<Eigen::Infinity>() > 1e-8 * std::max(1.0, wmax.lpNorm<Eigen::Infinity>())) {
    throw Error(ErrorCode::kSolveFailed, "optimal multipliers do not satisfy stationarity");
  }
  Vector y = Vector::Zero(p.rows());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int i = t.rows[r];
    const double v = u(static_cast<long>(r));
    y(i) = p.sense_sign() * (p.senses[i] == RowSense::kGreaterEqual ? -v : v);
    if (std::abs(y(i)) < 1e-14) y(i) = 0.0;
  }
  return y;
}

GradientBundle objective_gradients(const Problem& p, const LpSolution& sol,
                                   DualSelection selection) {
  require_optimal(sol.status);
  GradientBundle g;
  g.map_kind = MapKind::kObjective;
  g.x = sol.x;
  g.objective = sol.objective;
  g.dual_selection = selection;
  if (selection == DualSelection::kLeastNorm) {
    try {
      g.duals = least_norm_duals(p, sol.x);
    } catch (const Error&) {
      g.duals = sol.duals;
      g.dual_selection = DualSelection::kBasis;
      g.notes.push_back("least-norm multipliers unavailable; basis duals used");
    }
  } else {
    g.duals = sol.duals;
  }
  g.dO_dw = sol.x;
  g.dO_db = g.duals;
  g.dO_dA = -g.duals * sol.x.transpose();

  TightSet t = tight_set(p, sol.x);
  if (t.size() > p.cols()) {
    g.degenerate = true;
    g.notes.push_back("degenerate vertex: " + std::to_string(t.size()) +
                      " tight constraints for " + std::to_string(p.cols()) + " variables");
  }
  if (sol.multiple_optima) {
    g.degenerate = true;
    g.notes.push_back("multiple optimal solutions: gradient in w is one subgradient");
  }
  return g;
}

GradientBundle solution_jacobians(const Problem& p, const LpSolution& sol) {
  require_optimal(sol.status);
  const int n = p.cols();
  const int m = p.rows();
  GradientBundle g;
  g.map_kind = MapKind::kSolution;
  g.x = sol.x;
  g.objective = sol.objective;
  g.duals = sol.duals;
  g.dual_selection = DualSelection::kBasis;

  TightSet t = tight_set(p, sol.x);
  const int k = t.size();
  Matrix act = Matrix::Zero(k, n);
  int r = 0;
  for (int i : t.rows) act.row(r++) = p.A.row(i);
  for (int j : t.lower) act(r++, j) = 1.0;
  for (int j : t.upper) act(r++, j) = 1.0;

  // Rows and bounds of a square active system, with the matrix inverse.
  auto square_inverse = [n](const Matrix& sys) -> std::optional<Matrix> {
    if (sys.rows() != n) return std::nullopt;
    Eigen::FullPivLU<Matrix> lu(sys);
    if (!lu.isInvertible()) return std::nullopt;
    return Matrix(lu.inverse());
  };

  g.dS_db = Matrix::Zero(n, m);
  g.dS_dA.assign(n, Matrix::Zero(m, n));
  auto fill = [&](const std::vector<int>& rows, const Matrix& K) {
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const int i = rows[a];
      g.dS_db.col(i) = K.col(static_cast<long>(a));
      for (int comp = 0; comp < n; ++comp) {
        g.dS_dA[comp].row(i) = -K(comp, static_cast<long>(a)) * sol.x.transpose();
      }
    }
  };

  if (auto K = square_inverse(act)) {
    fill(t.rows, *K);
  } else {
    // Degenerate vertex: differentiate the final simplex basis, which the
    // solver keeps under perturbations that preserve its feasibility.
    g.degenerate = true;
    std::vector<int> rows;
    std::vector<ActiveConstraint> bounds;
    for (const auto& c : sol.basis) {
      if (c.kind == ActiveConstraint::Kind::kRow) {
        rows.push_back(c.index);
      } else {
        bounds.push_back(c);
      }
    }
    Matrix sys = Matrix::Zero(static_cast<long>(rows.size() + bounds.size()), n);
    for (std::size_t a = 0; a < rows.size(); ++a) sys.row(static_cast<long>(a)) = p.A.row(rows[a]);
    for (std::size_t a = 0; a < bounds.size(); ++a) {
      sys(static_cast<long>(rows.size() + a), bounds[a].index) = 1.0;
    }
    if (auto Kb = square_inverse(sys)) {
      fill(rows, *Kb);
      g.notes.push_back("active set is " + std::to_string(k) + " x " + std::to_string(n) +
                        "; derivatives of the final basis");
    } else {
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(act);
      const Matrix pinv = k > 0 ? Matrix(cod.pseudoInverse()) : Matrix::Zero(n, 0);
      fill(t.rows, pinv);
      g.notes.push_back("active set is " + std::to_string(k) + " x " + std::to_string(n) +
                        " and the basis is singular; pseudo-inverse used");
    }
  }
  g.dS_dw = Matrix::Zero(n, n);
  if (sol.multiple_optima) {
    g.degenerate = true;
    g.notes.push_back("multiple optimal solutions: solution map is set-valued");
  }
  return g;
}

GradientBundle ilp_relaxation_gradients(const Problem& p, const IlpSolution& sol, MapKind map,
                                        DualSelection selection) {
  (void)p;
  require_optimal(sol.status);
  GradientBundle g = map == MapKind::kObjective
                         ? objective_gradients(sol.surrogate, sol.surrogate_solution, selection)
                         : solution_jacobians(sol.surrogate, sol.surrogate_solution);
  g.surrogate = true;
  g.notes.push_back(sol.relaxation_tight
                        ? "integer program: relaxation is tight, its gradients are used"
                        : "integer program: gradients of the relaxation restricted at the incumbent");
  return g;
}

GradientBundle model_gradients(const Problem& p, const ModelSolution& sol, MapKind map,
                               DualSelection selection) {
  require_optimal(sol.status);
  if (sol.ilp) return ilp_relaxation_gradients(p, *sol.ilp, map, selection);
  return map == MapKind::kObjective ? objective_gradients(p, sol.lp, selection)
                                    : solution_jacobians(p, sol.lp);
}

OutputGradient output_gradient(const GradientBundle& g, MapKind map, std::optional<int> target) {
  if (g.map_kind != map) {
    throw Error(ErrorCode::kMapMismatch, "gradients were computed for the " +
                                             to_string(g.map_kind) + " map, not the " +
                                             to_string(map) + " map");
  }
  OutputGradient out;
  if (map == MapKind::kObjective) {
    out.value = g.objective;
    out.dA = g.dO_dA;
    out.db = g.dO_db;
    out.dw = g.dO_dw;
    return out;
  }
  if (!target || *target < 0 || *target >= g.x.size()) {
    throw Error(ErrorCode::kInvalidArgument, "solution map needs a target component in [0, " +
                                                 std::to_string(g.x.size()) + ")");
  }
  const int k = *target;
  out.value = g.x(k);
  out.dA = g.dS_dA[k];
  out.db = g.dS_db.row(k).transpose();
  out.dw = g.dS_dw.row(k).transpose();
  return out;
}

Matrix flatten(const GradientBundle& g, MapKind map, Parameter param, int rows, int cols) {
  const int outputs = map == MapKind::kObjective ? 1 : cols;
  const int entries = param == Parameter::kA ? rows * cols : (param == Parameter::kB ? rows : cols);
  Matrix out(outputs, entries);
  for (int o = 0; o < outputs; ++o) {
    OutputGradient og = output_gradient(g, map, map == MapKind::kObjective ? std::nullopt
                                                                           : std::optional<int>(o));
    for (int e = 0; e < entries; ++e) {
      switch (param) {
        case Parameter::kA: out(o, e) = og.dA(e / cols, e % cols); break;
        case Parameter::kB: out(o, e) = og.db(e); break;
        case Parameter::kW: out(o, e) = og.dw(e); break;
      }
    }
  }
  return out;
}

FdResult finite_difference_oracle(const Problem& p, MapKind map, Parameter param,
                                  const FdOptions& options) {
  Problem base = relaxation(p);
  const int entries = entry_count(base, param);
  const int outputs = map == MapKind::kObjective ? 1 : base.cols();
  auto eval = [&](const Problem& q, bool& ok) {
    return map == MapKind::kObjective ? solve_objective(q, options.rule, ok)
                                      : solve_solution(q, options.rule, ok);
  };
  bool ok = false;
  const Vector f0 = eval(base, ok);
  if (!ok) throw Error(ErrorCode::kNotOptimal, "finite differences need an optimal base point");

  FdResult res{map, param, Matrix::Zero(outputs, entries),
               std::vector<std::vector<FdFlag>>(outputs, std::vector<FdFlag>(entries, FdFlag::kOk))};
  const double h = options.h;
  for (int e = 0; e < entries; ++e) {
    Problem plus = base;
    Problem minus = base;
    entry(plus, param, e) += h;
    entry(minus, param, e) -= h;
    bool ok_plus = false;
    bool ok_minus = false;
    const Vector fp = eval(plus, ok_plus);
    const Vector fm = eval(minus, ok_minus);
    if (!ok_plus || !ok_minus) {
      if (options.throw_on_infeasible) {
        throw Error(ErrorCode::kProbeInfeasible,
                    "perturbing " + to_string(param) + " entry " + std::to_string(e) +
                        " by +/-" + std::to_string(h) + " leaves no optimal solution");
      }
      for (int o = 0; o < outputs; ++o) res.flags[o][e] = FdFlag::kInfeasible;
      continue;
    }
    // The solver's selection can jump or switch pieces in outputs other than
    // the one being compared, so a kink in any output flags the whole entry.
    // A forward step of h/2 exposes jumps where both one-sided slopes agree.
    Problem half = base;
    entry(half, param, e) += 0.5 * h;
    bool ok_half = false;
    const Vector fh = eval(half, ok_half);
    const auto off = [](double a, double b) {
      return std::abs(a - b) > 10.0 * 1e-5 * std::max(1.0, std::abs(0.5 * (a + b)));
    };
    bool kink = !ok_half;
    for (int o = 0; o < outputs; ++o) {
      const double central = (fp(o) - fm(o)) / (2.0 * h);
      const double fwd = (fp(o) - f0(o)) / h;
      const double bwd = (f0(o) - fm(o)) / h;
      res.values(o, e) = central;
      if (off(fwd, bwd) || (ok_half && off(fwd, (fh(o) - f0(o)) / (0.5 * h)))) kink = true;
    }
    if (kink) {
      for (int o = 0; o < outputs; ++o) res.flags[o][e] = FdFlag::kKink;
    }
  }
  return res;
}

std::string to_string(MapKind map) {
  return map == MapKind::kObjective ? "objective" : "solution";
}

std::string to_string(Parameter param) {
  switch (param) {
    case Parameter::kA: return "A";
    case Parameter::kB: return "b";
    case Parameter::kW: return "w";
  }
  return "?";
}

std::string to_string(DualSelection selection) {
  return selection == DualSelection::kLeastNorm ? "least_norm" : "basis";
}

MapKind parse_map_kind(const std::string& text) {
  if (text == "objective" || text == "O") return MapKind::kObjective;
  if (text == "solution" || text == "S") return MapKind::kSolution;
  throw Error(ErrorCode::kInvalidArgument, "unknown map '" + text + "'");
}

DualSelection parse_dual_selection(const std::string& text) {
  if (text == "least_norm") return DualSelection::kLeastNorm;
  if (text == "basis") return DualSelection::kBasis;
  throw Error(ErrorCode::kInvalidArgument, "unknown dual selection '" + text + "'");
}

}  // namespace xlp
