#include "xlp/problems.hpp"

#include <cmath>
#include <queue>
#include <set>

#include "xlp/error.hpp"

namespace xlp {

namespace {

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<long>(v.size()));
}

void check_graph(const Graph& g) {
  if (g.nodes <= 0) throw Error(ErrorCode::kInvalidGraph, "graph has no nodes");
  if (g.source < 0 || g.source >= g.nodes || g.target < 0 || g.target >= g.nodes) {
    throw Error(ErrorCode::kInvalidGraph, "source or target outside the node range");
  }
  if (g.source == g.target) throw Error(ErrorCode::kInvalidGraph, "source equals target");
  std::set<Edge> seen;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [u, v] = g.edges[e];
    if (u < 0 || u >= g.nodes || v < 0 || v >= g.nodes) {
      throw Error(ErrorCode::kInvalidGraph, "edge " + std::to_string(e + 1) + " has an unknown node");
    }
    if (u == v) throw Error(ErrorCode::kInvalidGraph, "edge " + std::to_string(e + 1) + " is a self-loop");
    if (!seen.insert({u, v}).second) {
      throw Error(ErrorCode::kInvalidGraph, "edge " + std::to_string(e + 1) + " is a duplicate");
    }
  }
  if (g.edges.empty()) throw Error(ErrorCode::kInvalidGraph, "graph has no edges");
}

Matrix incidence(const Graph& g) {
  Matrix inc = Matrix::Zero(g.nodes, static_cast<long>(g.edges.size()));
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    inc(g.edges[e].first, static_cast<long>(e)) = 1.0;
    inc(g.edges[e].second, static_cast<long>(e)) = -1.0;
  }
  return inc;
}

}  // namespace

const std::vector<CaseId>& all_cases() {
  static const std::vector<CaseId> ids = {CaseId::RO1, CaseId::RO2, CaseId::RO3, CaseId::RO4,
                                          CaseId::RO5, CaseId::MF1, CaseId::MF2, CaseId::KS1,
                                          CaseId::KS2, CaseId::KS3, CaseId::SP1, CaseId::SP2};
  return ids;
}

std::string to_string(CaseId id) {
  static const char* names[] = {"RO1", "RO2", "RO3", "RO4", "RO5", "MF1",
                                "MF2", "KS1", "KS2", "KS3", "SP1", "SP2"};
  return names[static_cast<int>(id)];
}

CaseId parse_case_id(const std::string& text) {
  for (CaseId id : all_cases()) {
    if (to_string(id) == text) return id;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown case '" + text + "'");
}

int case_type(CaseId id) {
  switch (id) {
    case CaseId::RO1:
    case CaseId::RO2:
    case CaseId::RO3:
    case CaseId::MF1:
    case CaseId::KS1:
    case CaseId::SP1: return 1;
    case CaseId::RO4:
    case CaseId::MF2:
    case CaseId::KS2:
    case CaseId::SP2: return 2;
    case CaseId::RO5:
    case CaseId::KS3: return 3;
  }
  return 0;
}

Graph max_flow_graph() {
  return Graph{5, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}}, 0, 4};
}

Graph shortest_path_graph() {
  return Graph{5, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 3}, {3, 4}}, 0, 4};
}

Problem build_resource(const Matrix& A, const Vector& b, const Vector& w, const std::string& name) {
  ProblemData d;
  d.name = name;
  d.family = Family::kResource;
  d.sense = Sense::kMaximize;
  d.A = A;
  d.b = b;
  d.w = w;
  for (int i = 0; i < A.rows(); ++i) {
    d.structures.push_back({"resource" + std::to_string(i + 1), {i}, {}, {}, RemovalMode::kDeleteRowsAndCols});
  }
  return build_problem(std::move(d));
}

Problem build_max_flow(const Graph& g, const std::vector<double>& capacities, const std::string& name) {
  check_graph(g);
  const int n = static_cast<int>(g.edges.size());
  if (static_cast<int>(capacities.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "capacities has length " +
                                                   std::to_string(capacities.size()) + ", expected " +
                                                   std::to_string(n));
  }
  for (double c : capacities) {
    if (!(c >= 0.0)) throw Error(ErrorCode::kInvalidGraph, "negative edge capacity");
  }
  Matrix inc = incidence(g);
  std::vector<int> interior;
  for (int v = 0; v < g.nodes; ++v) {
    if (v != g.source && v != g.target) interior.push_back(v);
  }
  const int k = static_cast<int>(interior.size());
  ProblemData d;
  d.name = name;
  d.family = Family::kMaxFlow;
  d.sense = Sense::kMaximize;
  d.A = Matrix::Zero(k + n, n);
  d.b = Vector::Zero(k + n);
  for (int r = 0; r < k; ++r) {
    d.A.row(r) = inc.row(interior[r]);
    d.senses.push_back(RowSense::kEqual);
  }
  for (int e = 0; e < n; ++e) {
    d.A(k + e, e) = 1.0;
    d.b(k + e) = capacities[e];
    d.senses.push_back(RowSense::kLessEqual);
    d.structures.push_back({"edge" + std::to_string(e + 1), {k + e}, {e}, {}, RemovalMode::kDeleteRowsAndCols});
  }
  d.w = -inc.row(g.target).transpose();
  return build_problem(std::move(d));
}

Problem build_shortest_path(const Graph& g, const std::vector<double>& weights, const std::string& name) {
  check_graph(g);
  const int n = static_cast<int>(g.edges.size());
  if (static_cast<int>(weights.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "weights has length " + std::to_string(weights.size()) +
                                                   ", expected " + std::to_string(n));
  }
  std::vector<std::vector<int>> out(g.nodes);
  for (auto [u, v] : g.edges) out[u].push_back(v);
  std::vector<bool> seen(g.nodes, false);
  std::queue<int> q;
  q.push(g.source);
  seen[g.source] = true;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : out[u]) {
      if (!seen[v]) {
        seen[v] = true;
        q.push(v);
      }
    }
  }
  if (!seen[g.target]) throw Error(ErrorCode::kUnreachable, "target is not reachable from source");

  ProblemData d;
  d.name = name;
  d.family = Family::kShortestPath;
  d.sense = Sense::kMinimize;
  d.A = incidence(g);
  d.b = Vector::Zero(g.nodes);
  d.b(g.source) = 1.0;
  d.b(g.target) = -1.0;
  d.w = to_vector(weights);
  d.senses.assign(g.nodes, RowSense::kEqual);
  d.lower = Vector::Zero(n);
  d.upper = Vector::Ones(n);
  d.integer.assign(n, true);
  for (int e = 0; e < n; ++e) {
    d.structures.push_back({"edge" + std::to_string(e + 1), {}, {e}, {}, RemovalMode::kDeleteRowsAndCols});
  }
  return build_problem(std::move(d));
}

Problem build_knapsack(const std::vector<double>& values, const std::vector<double>& weights,
                       double capacity, const std::string& name) {
  const int n = static_cast<int>(values.size());
  if (static_cast<int>(weights.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "knapsack has " + std::to_string(n) + " values but " +
                                                   std::to_string(weights.size()) + " weights");
  }
  for (double wt : weights) {
    if (!(wt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "knapsack weights must be positive");
  }
  if (!(capacity > 0.0)) throw Error(ErrorCode::kInvalidArgument, "knapsack capacity must be positive");
  ProblemData d;
  d.name = name;
  d.family = Family::kKnapsack;
  d.sense = Sense::kMaximize;
  d.A = to_vector(weights).transpose();
  d.b = Vector::Constant(1, capacity);
  d.w = to_vector(values);
  d.lower = Vector::Zero(n);
  d.upper = Vector::Ones(n);
  d.integer.assign(n, true);
  for (int j = 0; j < n; ++j) {
    d.structures.push_back({"item" + std::to_string(j + 1), {}, {j}, {}, RemovalMode::kDeleteRowsAndCols});
  }
  return build_problem(std::move(d));
}

Problem case_problem(CaseId id) {
  const std::string name = to_string(id);
  auto ro = [&](double a12, double a22, double b1) {
    Matrix A(2, 2);
    A << 1.0, a12, 2.0, a22;
    return build_resource(A, Vector{{b1, 10.0}}, Vector{{1.0, 2.0}}, name);
  };
  switch (id) {
    case CaseId::RO1: return ro(1.0, 1.0, 8.0);
    case CaseId::RO2: return ro(1.0, 1.5, 10.0);
    case CaseId::RO3: return ro(2.25, 1.0, 10.0);
    // The parameter table lists these two the other way round; the text,
    // the RO5 figure and its attribution table all describe this assignment.
    case CaseId::RO4: return ro(2.0, 1.0, 10.0);
    case CaseId::RO5: return ro(1.0, 1.0, 10.0);
    case CaseId::MF1:
      return build_max_flow(max_flow_graph(), {0.8, 0.2, 0.6, 0.1, 0.4, 0.4, 0.5}, name);
    case CaseId::MF2:
      return build_max_flow(max_flow_graph(), {0.8, 0.2, 0.6, 0.3, 0.4, 0.2, 0.3}, name);
    case CaseId::KS1: return build_knapsack({3, 2, 4, 2, 2}, {5, 3, 6, 2, 4}, 10.0, name);
    case CaseId::KS2: return build_knapsack({4, 4, 1, 3}, {4, 6, 3, 3}, 10.0, name);
    case CaseId::KS3:
      return build_knapsack({50, 15, 3, 2, 4, 2, 3}, {20, 10, 5, 3, 6, 2, 4}, 10.0, name);
    case CaseId::SP1:
      return build_shortest_path(shortest_path_graph(), {0.5, 2.0, 1.8, 4.2, 1.2, 2.1}, name);
    case CaseId::SP2:
      return build_shortest_path(shortest_path_graph(), {0.5, 2.0, 1.8, 3.9, 1.2, 2.1}, name);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown case");
}

}  // namespace xlp
