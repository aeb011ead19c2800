#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace xlp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kMaximize, kMinimize };
enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class RemovalMode { kDeleteRowsAndCols, kZeroEntries, kZeroBEntries };

// Problem family tags. Used by problem-specific baselines and reporting.
enum class Family {
  kGeneric,
  kResource,
  kMaxFlow,
  kShortestPath,
  kKnapsack,
  kMap,
  kEnergy,
};

struct Structure {
  std::string name;
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<std::pair<int, int>> entries;
  RemovalMode mode = RemovalMode::kDeleteRowsAndCols;

  bool operator==(const Structure&) const = default;
};

// Input to build_problem. Empty senses/bounds/integer vectors take defaults:
// all rows <=, bounds [0, +inf), continuous.
struct ProblemData {
  std::string name;
  Family family = Family::kGeneric;
  Sense sense = Sense::kMaximize;
  Matrix A;
  Vector b;
  Vector w;
  std::vector<RowSense> senses;
  Vector lower;
  Vector upper;
  std::vector<bool> integer;
  std::vector<Structure> structures;
};

class Problem {
 public:
  std::string name;
  Family family = Family::kGeneric;
  Sense sense = Sense::kMaximize;
  Matrix A;
  Vector b;
  Vector w;
  std::vector<RowSense> senses;
  Vector lower;
  Vector upper;
  std::vector<bool> integer;
  std::vector<Structure> structures;

  int rows() const { return static_cast<int>(A.rows()); }
  int cols() const { return static_cast<int>(A.cols()); }
  bool has_integers() const;
  // +1 for maximize, -1 for minimize.
  double sense_sign() const { return sense == Sense::kMaximize ? 1.0 : -1.0; }
  const Structure* find_structure(const std::string& structure_name) const;
  const Structure& structure(const std::string& structure_name) const;
  double objective_value(const Vector& x) const { return w.dot(x); }
  // Largest violation of rows and bounds at x.
  double max_violation(const Vector& x) const;

  bool operator==(const Problem& other) const;
};

// Validates shapes, bounds and structure references.
Problem build_problem(ProblemData data);
void validate(const Problem& p);

// Copy with every integrality flag cleared.
Problem relaxation(const Problem& p);

struct MaskResult {
  Problem problem;
  // For each column/row of the masked problem, its index in the original.
  std::vector<int> col_origin;
  std::vector<int> row_origin;
};

MaskResult mask_with_index_map(const Problem& p, const std::string& structure_name);
Problem mask_structure(const Problem& p, const std::string& structure_name);

// Standard form: maximize c'z + offset s.t. M z <= r, z >= 0.
struct StandardForm {
  enum class ColKind { kShiftLower, kFlipUpper, kFreePlus, kFreeMinus };
  struct ColumnOrigin {
    int var;
    ColKind kind;
  };
  struct RowOrigin {
    enum class Kind { kConstraint, kUpperBound } kind;
    int index;
    double sign;
  };

  Matrix M;
  Vector r;
  Vector c;
  double offset = 0.0;
  double sense_sign = 1.0;
  int original_cols = 0;
  int original_rows = 0;
  std::vector<ColumnOrigin> col_origin;
  std::vector<RowOrigin> row_origin;
  // Shift applied to each original variable (lower bound, upper bound or 0).
  Vector shift;

  Vector to_original(const Vector& z) const;
  Vector from_original(const Vector& x) const;
  // Maps standard-form row multipliers to d(objective)/d(b) in the original
  // problem's own sense.
  Vector original_duals(const Vector& y) const;
};

StandardForm to_standard_form(const Problem& p);

}  // namespace xlp
