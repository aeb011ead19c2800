#include <random>

#include <gtest/gtest.h>

#include "xlp/error.hpp"
#include "xlp/problems.hpp"

using namespace xlp;

namespace {

// Exhaustive MAP over all joint states, computed straight from the potentials.
std::vector<int> map_by_enumeration(const Mrf& m) {
  const int n = static_cast<int>(m.nodes.size());
  std::vector<int> s(n, 0), best;
  double best_score = -INFINITY;
  while (true) {
    double score = 0.0;
    for (int i = 0; i < n; ++i) score += std::log(m.nodes[i].phi[s[i]]);
    for (const auto& e : m.edges) score += std::log(e.phi(s[e.i], s[e.j]));
    if (score > best_score) best_score = score, best = s;
    int k = 0;
    while (k < n && ++s[k] == m.nodes[k].states) s[k++] = 0;
    if (k == n) break;
  }
  return best;
}

Mrf random_tree(std::mt19937& rng) {
  std::uniform_int_distribution<int> nodes(2, 5), states(2, 3);
  std::uniform_real_distribution<double> pot(0.5, 20.0);
  Mrf m;
  const int n = nodes(rng);
  for (int i = 0; i < n; ++i) {
    MrfNode node{"X" + std::to_string(i + 1), states(rng), {}};
    for (int k = 0; k < node.states; ++k) node.phi.push_back(pot(rng));
    m.nodes.push_back(node);
  }
  for (int i = 1; i < n; ++i) {
    const int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
    Matrix phi(m.nodes[parent].states, m.nodes[i].states);
    for (long r = 0; r < phi.rows(); ++r) {
      for (long c = 0; c < phi.cols(); ++c) phi(r, c) = pot(rng);
    }
    m.edges.push_back({parent, i, phi, ""});
  }
  return m;
}

}  // namespace

TEST(Problems, CatalogIsComplete) {
  EXPECT_EQ(all_cases().size(), 12u);
  for (CaseId id : all_cases()) {
    EXPECT_EQ(parse_case_id(to_string(id)), id);
    const Problem p = case_problem(id);
    EXPECT_EQ(p.name, to_string(id));
    EXPECT_NO_THROW(validate(p));
  }
  EXPECT_EQ(case_type(CaseId::RO1), 1);
  EXPECT_EQ(case_type(CaseId::RO4), 2);
  EXPECT_EQ(case_type(CaseId::KS3), 3);
  EXPECT_THROW(parse_case_id("RO9"), Error);
}

TEST(Problems, ResourceStructuresPerRow) {
  const Problem p = case_problem(CaseId::RO2);
  EXPECT_EQ(p.structure("resource1").rows, std::vector<int>{0});
  EXPECT_EQ(p.structure("resource2").rows, std::vector<int>{1});
}

TEST(Problems, MaxFlowLayout) {
  const Problem p = case_problem(CaseId::MF1);
  const Graph g = max_flow_graph();
  EXPECT_EQ(p.cols(), static_cast<int>(g.edges.size()));
  EXPECT_EQ(p.rows(), g.nodes - 2 + static_cast<int>(g.edges.size()));
  EXPECT_EQ(p.structure("edge1").rows, std::vector<int>{3});
  EXPECT_EQ(p.b(3), 0.8);
}

TEST(Problems, GraphErrors) {
  Graph g{3, {{0, 1}, {0, 1}}, 0, 2};
  try {
    build_max_flow(g, {1.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidGraph);
  }
  Graph unreachable{3, {{0, 1}}, 0, 2};
  try {
    build_shortest_path(unreachable, {1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnreachable);
  }
  EXPECT_THROW(build_max_flow(max_flow_graph(), {1.0}), Error);
  EXPECT_THROW(build_max_flow(max_flow_graph(), {1, 1, 1, -1, 1, 1, 1}), Error);
}

TEST(Problems, KnapsackValidation) {
  EXPECT_THROW(build_knapsack({1.0, 2.0}, {1.0}, 3.0), Error);
  EXPECT_THROW(build_knapsack({1.0}, {-1.0}, 3.0), Error);
  const Problem p = build_knapsack({1.0, 2.0}, {1.0, 1.0}, 1.0);
  EXPECT_TRUE(p.has_integers());
  EXPECT_EQ(p.upper, Vector::Ones(2));
}

TEST(Map, ShowcaseDecodesAndOccludes) {
  const Mrf m = showcase_mrf();
  const MapShowcase s = map_edge_occlusion(m);
  EXPECT_EQ(s.states, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(s.states, map_by_enumeration(m));
  EXPECT_EQ(s.states, brute_force_map(m));
  ASSERT_EQ(s.occlusion.size(), 2u);
  EXPECT_EQ(s.occlusion[0].edge, "E12");
  EXPECT_EQ(s.occlusion[0].state_diff, (std::vector<int>{0, -1, -1}));
  EXPECT_EQ(s.occlusion[1].edge, "E23");
  EXPECT_EQ(s.occlusion[1].state_diff, (std::vector<int>{0, 0, -1}));
  // Cross-check occlusion against enumeration of the field without each edge.
  for (int e = 0; e < 2; ++e) {
    Mrf cut = m;
    cut.edges.erase(cut.edges.begin() + e);
    const auto masked = map_by_enumeration(cut);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(s.occlusion[e].state_diff[i], s.states[i] - masked[i]);
  }
}

TEST(Map, RandomTreesMatchEnumeration) {
  std::mt19937 rng(99);
  for (int t = 0; t < 50; ++t) {
    const Mrf m = random_tree(rng);
    const Problem p = build_map_lp(m);
    const LpSolution s = solve_lp(p);
    ASSERT_EQ(s.status, SolveStatus::kOptimal) << "trial " << t;
    EXPECT_EQ(decode_map_solution(m, s.x), map_by_enumeration(m)) << "trial " << t;
    EXPECT_EQ(brute_force_map(m), map_by_enumeration(m)) << "trial " << t;
  }
}

TEST(Map, Validation) {
  Mrf m = showcase_mrf();
  m.nodes[0].phi = {1.0};
  EXPECT_THROW(validate(m), Error);
  m = showcase_mrf();
  m.edges[0].phi(0, 0) = 0.0;
  EXPECT_THROW(validate(m), Error);
  m = showcase_mrf();
  m.edges[0].j = 0;
  EXPECT_THROW(validate(m), Error);
}
