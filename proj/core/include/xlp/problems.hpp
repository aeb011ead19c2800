#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xlp/model.hpp"
#include "xlp/solver.hpp"

namespace xlp {

enum class CaseId { RO1, RO2, RO3, RO4, RO5, MF1, MF2, KS1, KS2, KS3, SP1, SP2 };

const std::vector<CaseId>& all_cases();
std::string to_string(CaseId id);
CaseId parse_case_id(const std::string& text);
// Type I (unique optimum), II (multiple optima) or III (edge case).
int case_type(CaseId id);

Problem case_problem(CaseId id);

using Edge = std::pair<int, int>;

struct Graph {
  int nodes = 0;
  std::vector<Edge> edges;
  int source = 0;
  int target = 0;
};

// Edge layout shared by the MF cases; nodes and edges are 0-based.
Graph max_flow_graph();
Graph shortest_path_graph();

// Rows: conservation at every node except source and target (= 0), then one
// capacity row per edge. Structure "edgeK" holds edge K's capacity row and column.
Problem build_max_flow(const Graph& g, const std::vector<double>& capacities,
                       const std::string& name = "max_flow");

// Full incidence matrix, b = +1 at the source and -1 at the target, x in {0, 1}.
Problem build_shortest_path(const Graph& g, const std::vector<double>& weights,
                            const std::string& name = "shortest_path");

Problem build_knapsack(const std::vector<double>& values, const std::vector<double>& weights,
                       double capacity, const std::string& name = "knapsack");

// Resource problem with one structure per constraint row ("resource1", ...).
Problem build_resource(const Matrix& A, const Vector& b, const Vector& w,
                       const std::string& name = "resource");

// Pairwise Markov random field.
struct MrfNode {
  std::string name;
  int states = 2;
  std::vector<double> phi;
};

struct MrfEdge {
  int i = 0;
  int j = 0;
  Matrix phi;
  // Structure name; defaults to "E" followed by the 1-based node numbers.
  std::string name;
};

struct Mrf {
  std::vector<MrfNode> nodes;
  std::vector<MrfEdge> edges;
};

void validate(const Mrf& m);
std::string edge_name(const Mrf& m, int e);

// Variables: each node's marginal block, then each edge's joint block (row-major).
Problem build_map_lp(const Mrf& m, const std::string& name = "map");
std::vector<int> decode_map_solution(const Mrf& m, const Vector& x);
// Exhaustive argmax of the log-potential score.
std::vector<int> brute_force_map(const Mrf& m);
Mrf showcase_mrf();

struct EdgeOcclusion {
  std::string edge;
  // Decoded state differences (original minus masked); empty if infeasible.
  std::vector<int> state_diff;
};

struct MapShowcase {
  std::vector<int> states;
  std::vector<EdgeOcclusion> occlusion;
};

MapShowcase map_edge_occlusion(const Mrf& m, PivotRule rule = PivotRule::kDantzig);

}  // namespace xlp
