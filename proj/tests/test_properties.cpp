#include <gtest/gtest.h>

#include "xlp/error.hpp"
#include "xlp/problems.hpp"
#include "xlp/properties.hpp"

using namespace xlp;

TEST(Properties, SensitivityPart1HoldsOnRO1) {
  const Problem p = case_problem(CaseId::RO1);
  const Subject s = Subject::entry(Parameter::kB, 0);
  const auto r = check_sensitivity_part1(p, {Method::kGradientTimesInput}, s, {s, -1.0});
  EXPECT_EQ(r.verdict, Verdict::kHolds) << r.summary;
}

TEST(Properties, SensitivityPart1ViolatedOnMF1Gradients) {
  const Problem p = case_problem(CaseId::MF1);
  const Subject cap = Subject::entry(Parameter::kB, 3);
  for (const MethodConfig& m : std::vector<MethodConfig>{{Method::kSaliency}, {Method::kGradientTimesInput},
                                                          {Method::kIntegratedGradients}}) {
    const auto r = check_sensitivity_part1(p, m, cap, {Subject::of_structure("edge1"), 0.0});
    EXPECT_EQ(r.verdict, Verdict::kViolated) << describe(m) << ": " << r.summary;
  }
}

TEST(Properties, SensitivityPart1ViolatedOnRO5Occlusion) {
  const Problem p = case_problem(CaseId::RO5);
  const auto r = check_sensitivity_part1(p, {Method::kOcclusion}, Subject::of_structure("resource1"),
                                         {Subject::entry(Parameter::kB, 0), -1.0});
  EXPECT_EQ(r.verdict, Verdict::kViolated) << r.summary;
}

TEST(Properties, IneffectiveProbeIsInconclusive) {
  const Problem p = case_problem(CaseId::RO1);
  const Subject s = Subject::entry(Parameter::kB, 1);
  // Row 2 is slack at the optimum; a small move changes nothing.
  const auto r = check_sensitivity_part1(p, {Method::kSaliency}, s, {s, 0.5});
  EXPECT_EQ(r.verdict, Verdict::kInconclusive);
}

TEST(Properties, SensitivityPart2) {
  const auto holds = check_sensitivity_part2(case_problem(CaseId::RO1), {Method::kSaliency},
                                             Subject::entry(Parameter::kA, 2));
  EXPECT_EQ(holds.verdict, Verdict::kHolds) << holds.summary;

  const auto ks3 = check_sensitivity_part2(case_problem(CaseId::KS3),
                                           {Method::kIntegratedGradients, BaselineKind::kItemAverageTenth},
                                           Subject::of_structure("item1"));
  EXPECT_EQ(ks3.verdict, Verdict::kViolated) << ks3.summary;

  AttributionOptions o;
  o.map = MapKind::kSolution;
  const auto sp2 = check_sensitivity_part2(case_problem(CaseId::SP2), {Method::kOcclusion},
                                           Subject::of_structure("edge2"), 1e-3, o);
  EXPECT_EQ(sp2.verdict, Verdict::kViolated) << sp2.summary;
  EXPECT_TRUE(sp2.evidence.contains("admissible_scores"));
}

TEST(Properties, Part2RefusesRelevantSubjects) {
  try {
    check_sensitivity_part2(case_problem(CaseId::RO1), {Method::kSaliency}, Subject::entry(Parameter::kB, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCertificationFailed);
  }
}

TEST(Properties, CompletenessOnRO1) {
  const Problem p = case_problem(CaseId::RO1);
  const auto r = completeness_residual(p, make_baseline(p, BaselineKind::kNearZero), 1000);
  EXPECT_EQ(r.verdict, Verdict::kHolds) << r.summary;
  EXPECT_LE(r.evidence["residual"].get<double>(), r.tolerance);
}

TEST(Properties, ImplementationInvariance) {
  for (CaseId id : all_cases()) {
    if (case_type(id) != 1) continue;
    const Problem p = case_problem(id);
    EXPECT_EQ(implementation_invariance_report(p, default_methods(p)).verdict, Verdict::kHolds) << to_string(id);
  }
  const Problem ro4 = case_problem(CaseId::RO4);
  const auto r = implementation_invariance_report(ro4, default_methods(ro4));
  EXPECT_EQ(r.verdict, Verdict::kViolated);
  EXPECT_NE(r.evidence["x"]["dantzig"], r.evidence["x"]["bland"]);
}

TEST(Properties, ProbeApplication) {
  const Problem p = case_problem(CaseId::RO1);
  const Problem moved = apply_probe(p, {Subject::entry(Parameter::kA, 1), 0.5});
  EXPECT_EQ(moved.A(0, 1), p.A(0, 1) + 0.5);
  const Problem removed = apply_probe(p, {Subject::of_structure("resource2"), 0.0});
  EXPECT_EQ(removed.rows(), 1);
}

TEST(Properties, NamesRoundTrip) {
  for (Property prop : {Property::kSensitivityPart1, Property::kSensitivityPart2, Property::kCompleteness,
                        Property::kImplementationInvariance}) {
    EXPECT_EQ(parse_property(to_string(prop)), prop);
  }
  EXPECT_THROW(parse_property("linearity"), Error);
}
