#pragma once

// Independent brute-force references for the solver tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

#include <Eigen/Dense>

#include "xlp/model.hpp"
#include "xlp/problems.hpp"

namespace xlp::oracle {

struct Vertex {
  Vector x;
  double objective;
};

// Best vertex of a bounded LP by enumerating every square subsystem of active
// constraints. Only for tiny problems.
inline std::optional<Vertex> best_vertex(const Problem& p, double tol = 1e-9) {
  const int n = p.cols();
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  std::vector<bool> mandatory;
  for (int i = 0; i < p.rows(); ++i) {
    rows.push_back(p.A.row(i));
    rhs.push_back(p.b(i));
    mandatory.push_back(p.senses[i] == RowSense::kEqual);
  }
  for (int j = 0; j < n; ++j) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e(j) = 1.0;
    if (std::isfinite(p.lower(j))) {
      rows.push_back(e);
      rhs.push_back(p.lower(j));
      mandatory.push_back(false);
    }
    if (std::isfinite(p.upper(j))) {
      rows.push_back(e);
      rhs.push_back(p.upper(j));
      mandatory.push_back(false);
    }
  }
  std::vector<int> fixed, free;
  for (int k = 0; k < static_cast<int>(rows.size()); ++k) (mandatory[k] ? fixed : free).push_back(k);

  std::optional<Vertex> best;
  const double sign = p.sense_sign();
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(fixed.size() + pick.size()) == n) {
      Matrix M(n, n);
      Vector r(n);
      int k = 0;
      for (int idx : fixed) M.row(k) = rows[idx], r(k++) = rhs[idx];
      for (int idx : pick) M.row(k) = rows[idx], r(k++) = rhs[idx];
      Eigen::FullPivLU<Matrix> lu(M);
      if (lu.rank() < n) return;
      const Vector x = lu.solve(r);
      if (p.max_violation(x) > tol * std::max(1.0, x.lpNorm<Eigen::Infinity>())) return;
      const double obj = p.w.dot(x);
      if (!best || sign * obj > sign * best->objective + 1e-12) best = Vertex{x, obj};
      return;
    }
    for (int i = start; i < static_cast<int>(free.size()); ++i) {
      pick.push_back(free[i]);
      rec(i + 1);
      pick.pop_back();
    }
  };
  if (static_cast<int>(fixed.size()) <= n) rec(0);
  return best;
}

// Exhaustive 0/1 knapsack.
inline double knapsack_best(const std::vector<double>& values, const std::vector<double>& weights, double cap) {
  const int n = static_cast<int>(values.size());
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double v = 0.0, wt = 0.0;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) v += values[j], wt += weights[j];
    }
    if (wt <= cap + 1e-9) best = std::max(best, v);
  }
  return best;
}

// Cheapest simple source-target path by depth-first enumeration.
inline double shortest_path_enum(const Graph& g, const std::vector<double>& weights) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> on(g.nodes, false);
  std::function<void(int, double)> dfs = [&](int u, double cost) {
    if (u == g.target) {
      best = std::min(best, cost);
      return;
    }
    on[u] = true;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      auto [a, b] = g.edges[e];
      if (a == u && !on[b]) dfs(b, cost + weights[e]);
    }
    on[u] = false;
  };
  dfs(g.source, 0.0);
  return best;
}

// Edmonds-Karp on a residual matrix.
inline double max_flow_value(const Graph& g, const std::vector<double>& caps) {
  Matrix r = Matrix::Zero(g.nodes, g.nodes);
  for (std::size_t e = 0; e < g.edges.size(); ++e) r(g.edges[e].first, g.edges[e].second) += caps[e];
  double flow = 0.0;
  while (true) {
    std::vector<int> parent(g.nodes, -1);
    parent[g.source] = g.source;
    std::queue<int> q;
    q.push(g.source);
    while (!q.empty() && parent[g.target] < 0) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < g.nodes; ++v) {
        if (parent[v] < 0 && r(u, v) > 1e-12) parent[v] = u, q.push(v);
      }
    }
    if (parent[g.target] < 0) return flow;
    double push = std::numeric_limits<double>::infinity();
    for (int v = g.target; v != g.source; v = parent[v]) push = std::min(push, r(parent[v], v));
    for (int v = g.target; v != g.source; v = parent[v]) r(parent[v], v) -= push, r(v, parent[v]) += push;
    flow += push;
  }
}

}  // namespace xlp::oracle
