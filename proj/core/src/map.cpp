#include <cmath>

#include "xlp/error.hpp"
#include "xlp/problems.hpp"

namespace xlp {

namespace {

struct Layout {
  std::vector<int> node_offset;
  std::vector<int> edge_offset;
  int cols = 0;
};

Layout layout(const Mrf& m) {
  Layout l;
  for (const auto& node : m.nodes) {
    l.node_offset.push_back(l.cols);
    l.cols += node.states;
  }
  for (const auto& e : m.edges) {
    l.edge_offset.push_back(l.cols);
    l.cols += m.nodes[e.i].states * m.nodes[e.j].states;
  }
  return l;
}

}  // namespace

void validate(const Mrf& m) {
  if (m.nodes.empty()) throw Error(ErrorCode::kInvalidArgument, "random field has no nodes");
  for (const auto& node : m.nodes) {
    if (node.states < 1 || static_cast<int>(node.phi.size()) != node.states) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "node '" + node.name + "' has " + std::to_string(node.phi.size()) +
                      " potentials for " + std::to_string(node.states) + " states");
    }
    for (double v : node.phi) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidArgument, "node '" + node.name + "' has a non-positive potential");
      }
    }
  }
  for (const auto& e : m.edges) {
    const int n = static_cast<int>(m.nodes.size());
    if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n || e.i == e.j) {
      throw Error(ErrorCode::kInvalidGraph, "edge references invalid nodes");
    }
    if (e.phi.rows() != m.nodes[e.i].states || e.phi.cols() != m.nodes[e.j].states) {
      throw Error(ErrorCode::kDimensionMismatch, "edge potential table does not match node states");
    }
    if (!(e.phi.array() > 0.0).all() || !e.phi.allFinite()) {
      throw Error(ErrorCode::kInvalidArgument, "edge potential table has a non-positive entry");
    }
  }
}

std::string edge_name(const Mrf& m, int e) {
  const auto& edge = m.edges[e];
  if (!edge.name.empty()) return edge.name;
  return "E" + std::to_string(edge.i + 1) + std::to_string(edge.j + 1);
}

Problem build_map_lp(const Mrf& m, const std::string& name) {
  validate(m);
  const Layout l = layout(m);
  const int nodes = static_cast<int>(m.nodes.size());
  int rows = nodes;
  for (const auto& e : m.edges) rows += m.nodes[e.i].states + m.nodes[e.j].states;

  ProblemData d;
  d.name = name;
  d.family = Family::kMap;
  d.sense = Sense::kMaximize;
  d.A = Matrix::Zero(rows, l.cols);
  d.b = Vector::Zero(rows);
  d.w = Vector::Zero(l.cols);
  d.senses.assign(rows, RowSense::kEqual);
  d.lower = Vector::Zero(l.cols);
  d.upper = Vector::Ones(l.cols);

  for (int i = 0; i < nodes; ++i) {
    for (int a = 0; a < m.nodes[i].states; ++a) {
      d.A(i, l.node_offset[i] + a) = 1.0;
      d.w(l.node_offset[i] + a) = std::log(m.nodes[i].phi[a]);
    }
    d.b(i) = 1.0;
  }
  int r = nodes;
  for (int e = 0; e < static_cast<int>(m.edges.size()); ++e) {
    const auto& edge = m.edges[e];
    const int si = m.nodes[edge.i].states;
    const int sj = m.nodes[edge.j].states;
    const int off = l.edge_offset[e];
    Structure s{edge_name(m, e), {}, {}, {}, RemovalMode::kDeleteRowsAndCols};
    for (int a = 0; a < si; ++a) {
      for (int c = 0; c < sj; ++c) {
        d.w(off + a * sj + c) = std::log(edge.phi(a, c));
        s.cols.push_back(off + a * sj + c);
      }
    }
    for (int a = 0; a < si; ++a) {
      d.A(r, l.node_offset[edge.i] + a) = 1.0;
      for (int c = 0; c < sj; ++c) d.A(r, off + a * sj + c) = -1.0;
      s.rows.push_back(r++);
    }
    for (int c = 0; c < sj; ++c) {
      d.A(r, l.node_offset[edge.j] + c) = 1.0;
      for (int a = 0; a < si; ++a) d.A(r, off + a * sj + c) = -1.0;
      s.rows.push_back(r++);
    }
    d.structures.push_back(std::move(s));
  }
  return build_problem(std::move(d));
}

std::vector<int> decode_map_solution(const Mrf& m, const Vector& x) {
  const Layout l = layout(m);
  std::vector<int> states;
  for (int i = 0; i < static_cast<int>(m.nodes.size()); ++i) {
    int best = 0;
    for (int a = 0; a < m.nodes[i].states; ++a) {
      const double v = x(l.node_offset[i] + a);
      if (std::abs(v - std::round(v)) > 1e-6) {
        throw Error(ErrorCode::kNonIntegralSolution,
                    "marginal of node '" + m.nodes[i].name + "' is fractional (" + std::to_string(v) + ")");
      }
      if (v > x(l.node_offset[i] + best)) best = a;
    }
    states.push_back(best);
  }
  return states;
}

std::vector<int> brute_force_map(const Mrf& m) {
  validate(m);
  const int n = static_cast<int>(m.nodes.size());
  std::vector<int> cur(n, 0), best;
  double best_score = -kInf;
  while (true) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::log(m.nodes[i].phi[cur[i]]);
    for (const auto& e : m.edges) s += std::log(e.phi(cur[e.i], cur[e.j]));
    if (s > best_score) {
      best_score = s;
      best = cur;
    }
    int k = n - 1;
    while (k >= 0 && ++cur[k] == m.nodes[k].states) cur[k--] = 0;
    if (k < 0) break;
  }
  return best;
}

Mrf showcase_mrf() {
  Mrf m;
  m.nodes = {{"X1", 2, {10.0, 2.0}}, {"X2", 2, {8.0, 8.0}}, {"X3", 2, {5.0, 10.0}}};
  Matrix agree(2, 2);
  agree << 20.0, 1.0, 1.0, 20.0;
  m.edges = {{0, 1, agree, ""}, {1, 2, agree, ""}};
  return m;
}

MapShowcase map_edge_occlusion(const Mrf& m, PivotRule rule) {
  Problem p = build_map_lp(m);
  LpSolution base = solve_lp(p, rule);
  if (base.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kSolveFailed, "MAP LP is " + to_string(base.status));
  }
  MapShowcase out;
  out.states = decode_map_solution(m, base.x);
  for (int e = 0; e < static_cast<int>(m.edges.size()); ++e) {
    EdgeOcclusion occ{edge_name(m, e), {}};
    MaskResult masked = mask_with_index_map(p, occ.edge);
    LpSolution s = solve_lp(masked.problem, rule);
    if (s.status == SolveStatus::kOptimal) {
      Vector full = Vector::Zero(p.cols());
      for (std::size_t k = 0; k < masked.col_origin.size(); ++k) {
        full(masked.col_origin[k]) = s.x(static_cast<long>(k));
      }
      std::vector<int> states = decode_map_solution(m, full);
      for (std::size_t i = 0; i < states.size(); ++i) occ.state_diff.push_back(out.states[i] - states[i]);
    }
    out.occlusion.push_back(std::move(occ));
  }
  return out;
}

}  // namespace xlp
