#include <gtest/gtest.h>

#include "xlp/error.hpp"
#include "xlp/model.hpp"
#include "xlp/problems.hpp"

using namespace xlp;

namespace {

ProblemData small() {
  ProblemData d;
  d.name = "small";
  d.A = Matrix{{1.0, 2.0}, {3.0, 1.0}};
  d.b = Vector{{4.0, 6.0}};
  d.w = Vector{{1.0, 1.0}};
  return d;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

}  // namespace

TEST(Model, DefaultsFillSensesAndBounds) {
  Problem p = build_problem(small());
  EXPECT_EQ(p.senses, std::vector<RowSense>(2, RowSense::kLessEqual));
  EXPECT_EQ(p.lower, Vector::Zero(2));
  EXPECT_TRUE(std::isinf(p.upper(0)));
  EXPECT_FALSE(p.has_integers());
}

TEST(Model, ShapeErrors) {
  auto d = small();
  d.b = Vector{{1.0}};
  EXPECT_EQ(code_of([&] { build_problem(d); }), ErrorCode::kDimensionMismatch);
  d = small();
  d.w = Vector{{1.0, 2.0, 3.0}};
  EXPECT_EQ(code_of([&] { build_problem(d); }), ErrorCode::kDimensionMismatch);
  d = small();
  d.A(0, 0) = std::nan("");
  EXPECT_EQ(code_of([&] { build_problem(d); }), ErrorCode::kInvalidArgument);
  d = small();
  d.lower = Vector{{1.0, 0.0}};
  d.upper = Vector{{0.0, 1.0}};
  EXPECT_EQ(code_of([&] { build_problem(d); }), ErrorCode::kInvalidArgument);
}

TEST(Model, StructureValidation) {
  auto d = small();
  d.structures = {{"r", {5}, {}, {}, RemovalMode::kDeleteRowsAndCols}};
  EXPECT_EQ(code_of([&] { build_problem(d); }), ErrorCode::kInvalidStructure);
  d.structures = {{"r", {0}, {}, {}, RemovalMode::kDeleteRowsAndCols},
                  {"r", {1}, {}, {}, RemovalMode::kDeleteRowsAndCols}};
  EXPECT_EQ(code_of([&] { build_problem(d); }), ErrorCode::kInvalidStructure);
  d.structures = {{"r", {0}, {}, {}, RemovalMode::kDeleteRowsAndCols}};
  Problem p = build_problem(d);
  EXPECT_EQ(code_of([&] { mask_structure(p, "nope"); }), ErrorCode::kUnknownStructure);
}

TEST(Model, MaskDeletesRowsAndColumns) {
  Problem p = case_problem(CaseId::MF1);
  MaskResult r = mask_with_index_map(p, "edge2");
  EXPECT_EQ(r.problem.cols(), p.cols() - 1);
  EXPECT_EQ(r.problem.rows(), p.rows() - 1);
  for (std::size_t k = 0; k < r.col_origin.size(); ++k) {
    EXPECT_NE(r.col_origin[k], 1);
    EXPECT_EQ(r.problem.w(static_cast<long>(k)), p.w(r.col_origin[k]));
  }
  for (std::size_t i = 0; i < r.row_origin.size(); ++i) {
    EXPECT_EQ(r.problem.b(static_cast<long>(i)), p.b(r.row_origin[i]));
  }
  EXPECT_EQ(r.problem.find_structure("edge2"), nullptr);
  // Original untouched.
  EXPECT_EQ(p, case_problem(CaseId::MF1));
}

TEST(Model, MaskZeroModes) {
  auto d = small();
  d.structures = {{"z", {}, {}, {{0, 1}}, RemovalMode::kZeroEntries},
                  {"zb", {1}, {}, {}, RemovalMode::kZeroBEntries}};
  Problem p = build_problem(d);
  Problem z = mask_structure(p, "z");
  EXPECT_EQ(z.A(0, 1), 0.0);
  EXPECT_EQ(z.A(1, 0), 3.0);
  Problem zb = mask_structure(p, "zb");
  EXPECT_EQ(zb.b(1), 0.0);
  EXPECT_EQ(zb.b(0), 4.0);
}

TEST(Model, RelaxationClearsIntegrality) {
  Problem ks = case_problem(CaseId::KS1);
  ASSERT_TRUE(ks.has_integers());
  Problem r = relaxation(ks);
  EXPECT_FALSE(r.has_integers());
  EXPECT_EQ(r.A, ks.A);
}

TEST(Model, StandardFormRoundTrip) {
  auto d = small();
  d.sense = Sense::kMinimize;
  d.senses = {RowSense::kGreaterEqual, RowSense::kEqual};
  d.lower = Vector{{-kInf, 1.0}};
  d.upper = Vector{{kInf, 5.0}};
  Problem p = build_problem(d);
  StandardForm sf = to_standard_form(p);
  const Vector x{{-2.5, 3.0}};
  const Vector z = sf.from_original(x);
  EXPECT_TRUE((z.array() >= -1e-12).all());
  EXPECT_NEAR((sf.to_original(z) - x).norm(), 0.0, 1e-12);
  // Objective agrees up to the sign convention and offset.
  EXPECT_NEAR(sf.sense_sign * (sf.c.dot(z) + sf.offset), p.w.dot(x), 1e-12);
  const Vector feasible{{1.0, 3.0}};
  ASSERT_LE(p.max_violation(feasible), 1e-12);
  EXPECT_LE((sf.M * sf.from_original(feasible) - sf.r).maxCoeff(), 1e-12);
}

TEST(Model, MaxViolation) {
  Problem p = build_problem(small());
  EXPECT_EQ(p.max_violation(Vector{{0.0, 0.0}}), 0.0);
  EXPECT_NEAR(p.max_violation(Vector{{2.0, 2.0}}), 2.0, 1e-12);
  EXPECT_NEAR(p.max_violation(Vector{{-1.0, 0.0}}), 1.0, 1e-12);
}
