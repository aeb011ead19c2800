#include "xlp/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "xlp/error.hpp"

namespace xlp {

namespace {

std::string where(const Problem& p) {
  return p.name.empty() ? std::string("problem") : "problem '" + p.name + "'";
}

void check_structure(const Problem& p, const Structure& s) {
  if (s.name.empty()) {
    throw Error(ErrorCode::kInvalidStructure, "structure with empty name in " + where(p));
  }
  for (int r : s.rows) {
    if (r < 0 || r >= p.rows()) {
      throw Error(ErrorCode::kInvalidStructure,
                  "structure '" + s.name + "' references row " + std::to_string(r) +
                      " outside [0, " + std::to_string(p.rows()) + ")");
    }
  }
  for (int c : s.cols) {
    if (c < 0 || c >= p.cols()) {
      throw Error(ErrorCode::kInvalidStructure,
                  "structure '" + s.name + "' references column " + std::to_string(c) +
                      " outside [0, " + std::to_string(p.cols()) + ")");
    }
  }
  for (auto [r, c] : s.entries) {
    if (r < 0 || r >= p.rows() || c < 0 || c >= p.cols()) {
      throw Error(ErrorCode::kInvalidStructure,
                  "structure '" + s.name + "' references entry (" + std::to_string(r) + ", " +
                      std::to_string(c) + ") outside A");
    }
  }
  if (s.rows.empty() && s.cols.empty() && s.entries.empty()) {
    throw Error(ErrorCode::kInvalidStructure, "structure '" + s.name + "' is empty");
  }
  if (s.mode == RemovalMode::kZeroBEntries && s.rows.empty()) {
    throw Error(ErrorCode::kInvalidStructure,
                "structure '" + s.name + "' uses zero_b_entries without rows");
  }
  if (s.mode == RemovalMode::kZeroEntries && s.entries.empty()) {
    throw Error(ErrorCode::kInvalidStructure,
                "structure '" + s.name + "' uses zero_entries without entries");
  }
}

// Keeps surviving indices and renumbers them; drops removed ones.
std::vector<int> remap(const std::vector<int>& idx, const std::vector<int>& new_index) {
  std::vector<int> out;
  for (int i : idx) {
    if (new_index[i] >= 0) out.push_back(new_index[i]);
  }
  return out;
}

}  // namespace

bool Problem::has_integers() const {
  return std::any_of(integer.begin(), integer.end(), [](bool v) { return v; });
}

const Structure* Problem::find_structure(const std::string& structure_name) const {
  for (const auto& s : structures) {
    if (s.name == structure_name) return &s;
  }
  return nullptr;
}

const Structure& Problem::structure(const std::string& structure_name) const {
  const Structure* s = find_structure(structure_name);
  if (s == nullptr) {
    throw Error(ErrorCode::kUnknownStructure,
                "no structure named '" + structure_name + "' in " + where(*this));
  }
  return *s;
}

double Problem::max_violation(const Vector& x) const {
  double worst = 0.0;
  Vector ax = A * x;
  for (int i = 0; i < rows(); ++i) {
    double d = ax(i) - b(i);
    switch (senses[i]) {
      case RowSense::kLessEqual: worst = std::max(worst, d); break;
      case RowSense::kGreaterEqual: worst = std::max(worst, -d); break;
      case RowSense::kEqual: worst = std::max(worst, std::abs(d)); break;
    }
  }
  for (int j = 0; j < cols(); ++j) {
    worst = std::max(worst, lower(j) - x(j));
    worst = std::max(worst, x(j) - upper(j));
  }
  return worst;
}

bool Problem::operator==(const Problem& o) const {
  return name == o.name && family == o.family && sense == o.sense && A.rows() == o.A.rows() &&
         A.cols() == o.A.cols() && A == o.A && b == o.b && w == o.w && senses == o.senses &&
         lower == o.lower && upper == o.upper && integer == o.integer &&
         structures == o.structures;
}

void validate(const Problem& p) {
  const int m = p.rows();
  const int n = p.cols();
  if (n == 0) {
    throw Error(ErrorCode::kDimensionMismatch, where(p) + " has no variables");
  }
  auto mismatch = [&](const std::string& field, long got, long want) {
    throw Error(ErrorCode::kDimensionMismatch, where(p) + ": '" + field + "' has length " +
                                                   std::to_string(got) + ", expected " +
                                                   std::to_string(want));
  };
  if (p.b.size() != m) mismatch("b", p.b.size(), m);
  if (p.w.size() != n) mismatch("w", p.w.size(), n);
  if (static_cast<int>(p.senses.size()) != m) mismatch("senses", p.senses.size(), m);
  if (p.lower.size() != n) mismatch("lb", p.lower.size(), n);
  if (p.upper.size() != n) mismatch("ub", p.upper.size(), n);
  if (static_cast<int>(p.integer.size()) != n) mismatch("integer", p.integer.size(), n);
  if (!p.A.allFinite() || !p.b.allFinite() || !p.w.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, where(p) + " has non-finite A, b or w entries");
  }
  for (int j = 0; j < n; ++j) {
    if (std::isnan(p.lower(j)) || std::isnan(p.upper(j)) || p.lower(j) > p.upper(j) ||
        p.lower(j) == kInf || p.upper(j) == -kInf) {
      throw Error(ErrorCode::kInvalidArgument,
                  where(p) + ": invalid bounds for variable " + std::to_string(j));
    }
  }
  std::set<std::string> names;
  for (const auto& s : p.structures) {
    check_structure(p, s);
    if (!names.insert(s.name).second) {
      throw Error(ErrorCode::kInvalidStructure, "duplicate structure name '" + s.name + "'");
    }
  }
}

Problem build_problem(ProblemData data) {
  Problem p;
  p.name = std::move(data.name);
  p.family = data.family;
  p.sense = data.sense;
  p.A = std::move(data.A);
  p.b = std::move(data.b);
  p.w = std::move(data.w);
  const auto m = p.A.rows();
  const auto n = p.A.cols();
  p.senses = data.senses.empty() ? std::vector<RowSense>(m, RowSense::kLessEqual)
                                 : std::move(data.senses);
  p.lower = data.lower.size() == 0 ? Vector::Zero(n) : std::move(data.lower);
  p.upper = data.upper.size() == 0 ? Vector::Constant(n, kInf) : std::move(data.upper);
  p.integer = data.integer.empty() ? std::vector<bool>(n, false) : std::move(data.integer);
  p.structures = std::move(data.structures);
  validate(p);
  return p;
}

Problem relaxation(const Problem& p) {
  Problem r = p;
  std::fill(r.integer.begin(), r.integer.end(), false);
  return r;
}

MaskResult mask_with_index_map(const Problem& p, const std::string& structure_name) {
  const Structure& s = p.structure(structure_name);
  MaskResult out;
  Problem q = p;
  const int m = p.rows();
  const int n = p.cols();
  std::vector<int> row_new(m), col_new(n);
  for (int i = 0; i < m; ++i) row_new[i] = i;
  for (int j = 0; j < n; ++j) col_new[j] = j;

  switch (s.mode) {
    case RemovalMode::kZeroEntries:
      for (auto [r, c] : s.entries) q.A(r, c) = 0.0;
      break;
    case RemovalMode::kZeroBEntries:
      for (int r : s.rows) q.b(r) = 0.0;
      break;
    case RemovalMode::kDeleteRowsAndCols: {
      for (auto [r, c] : s.entries) q.A(r, c) = 0.0;
      std::vector<bool> drop_row(m, false), drop_col(n, false);
      for (int r : s.rows) drop_row[r] = true;
      for (int c : s.cols) drop_col[c] = true;
      std::vector<int> keep_rows, keep_cols;
      for (int i = 0; i < m; ++i) {
        row_new[i] = drop_row[i] ? -1 : static_cast<int>(keep_rows.size());
        if (!drop_row[i]) keep_rows.push_back(i);
      }
      for (int j = 0; j < n; ++j) {
        col_new[j] = drop_col[j] ? -1 : static_cast<int>(keep_cols.size());
        if (!drop_col[j]) keep_cols.push_back(j);
      }
      if (keep_cols.empty()) {
        throw Error(ErrorCode::kInvalidStructure,
                    "removing '" + s.name + "' leaves no variables");
      }
      Matrix A = q.A(keep_rows, keep_cols);
      q.A = A;
      q.b = Vector(p.b(keep_rows));
      q.w = Vector(p.w(keep_cols));
      q.lower = Vector(p.lower(keep_cols));
      q.upper = Vector(p.upper(keep_cols));
      std::vector<RowSense> senses;
      for (int i : keep_rows) senses.push_back(p.senses[i]);
      q.senses = senses;
      std::vector<bool> integer;
      for (int j : keep_cols) integer.push_back(p.integer[j]);
      q.integer = integer;
      break;
    }
  }

  std::vector<Structure> rest;
  for (const auto& other : p.structures) {
    if (other.name == s.name) continue;
    Structure t = other;
    t.rows = remap(other.rows, row_new);
    t.cols = remap(other.cols, col_new);
    t.entries.clear();
    for (auto [r, c] : other.entries) {
      if (row_new[r] >= 0 && col_new[c] >= 0) t.entries.emplace_back(row_new[r], col_new[c]);
    }
    bool usable = !(t.rows.empty() && t.cols.empty() && t.entries.empty()) &&
                  !(t.mode == RemovalMode::kZeroBEntries && t.rows.empty()) &&
                  !(t.mode == RemovalMode::kZeroEntries && t.entries.empty());
    if (usable) rest.push_back(std::move(t));
  }
  q.structures = std::move(rest);

  for (int i = 0; i < m; ++i) {
    if (row_new[i] >= 0) out.row_origin.push_back(i);
  }
  for (int j = 0; j < n; ++j) {
    if (col_new[j] >= 0) out.col_origin.push_back(j);
  }
  out.problem = std::move(q);
  return out;
}

Problem mask_structure(const Problem& p, const std::string& structure_name) {
  return mask_with_index_map(p, structure_name).problem;
}

StandardForm to_standard_form(const Problem& p) {
  validate(p);
  StandardForm sf;
  const int m = p.rows();
  const int n = p.cols();
  sf.original_cols = n;
  sf.original_rows = m;
  sf.sense_sign = p.sense_sign();
  sf.shift = Vector::Zero(n);

  // Columns of the standard form expressed as x = shift + T z.
  std::vector<std::vector<std::pair<int, double>>> var_cols(n);
  std::vector<int> ub_rows_var;
  for (int j = 0; j < n; ++j) {
    const double lb = p.lower(j);
    const double ub = p.upper(j);
    const int k = static_cast<int>(sf.col_origin.size());
    if (std::isfinite(lb)) {
      sf.shift(j) = lb;
      sf.col_origin.push_back({j, StandardForm::ColKind::kShiftLower});
      var_cols[j].push_back({k, 1.0});
      if (std::isfinite(ub)) ub_rows_var.push_back(j);
    } else if (std::isfinite(ub)) {
      sf.shift(j) = ub;
      sf.col_origin.push_back({j, StandardForm::ColKind::kFlipUpper});
      var_cols[j].push_back({k, -1.0});
    } else {
      sf.col_origin.push_back({j, StandardForm::ColKind::kFreePlus});
      sf.col_origin.push_back({j, StandardForm::ColKind::kFreeMinus});
      var_cols[j].push_back({k, 1.0});
      var_cols[j].push_back({k + 1, -1.0});
    }
  }
  const int N = static_cast<int>(sf.col_origin.size());

  Matrix T = Matrix::Zero(n, N);
  for (int j = 0; j < n; ++j) {
    for (auto [k, s] : var_cols[j]) T(j, k) = s;
  }
  Matrix AT = p.A * T;
  Vector rhs = p.b - p.A * sf.shift;

  std::vector<std::pair<int, double>> rows;  // (original row, sign)
  for (int i = 0; i < m; ++i) {
    switch (p.senses[i]) {
      case RowSense::kLessEqual: rows.push_back({i, 1.0}); break;
      case RowSense::kGreaterEqual: rows.push_back({i, -1.0}); break;
      case RowSense::kEqual:
        rows.push_back({i, 1.0});
        rows.push_back({i, -1.0});
        break;
    }
  }
  const int M = static_cast<int>(rows.size() + ub_rows_var.size());
  sf.M = Matrix::Zero(M, N);
  sf.r = Vector::Zero(M);
  int r = 0;
  for (auto [i, s] : rows) {
    sf.M.row(r) = s * AT.row(i);
    sf.r(r) = s * rhs(i);
    sf.row_origin.push_back({StandardForm::RowOrigin::Kind::kConstraint, i, s});
    ++r;
  }
  for (int j : ub_rows_var) {
    sf.M(r, var_cols[j][0].first) = 1.0;
    sf.r(r) = p.upper(j) - p.lower(j);
    sf.row_origin.push_back({StandardForm::RowOrigin::Kind::kUpperBound, j, 1.0});
    ++r;
  }
  sf.c = sf.sense_sign * (T.transpose() * p.w);
  sf.offset = sf.sense_sign * p.w.dot(sf.shift);
  return sf;
}

Vector StandardForm::to_original(const Vector& z) const {
  Vector x = shift;
  for (int k = 0; k < static_cast<int>(col_origin.size()); ++k) {
    const auto& o = col_origin[k];
    switch (o.kind) {
      case ColKind::kShiftLower:
      case ColKind::kFreePlus: x(o.var) += z(k); break;
      case ColKind::kFlipUpper:
      case ColKind::kFreeMinus: x(o.var) -= z(k); break;
    }
  }
  return x;
}

Vector StandardForm::from_original(const Vector& x) const {
  Vector z = Vector::Zero(static_cast<int>(col_origin.size()));
  for (int k = 0; k < static_cast<int>(col_origin.size()); ++k) {
    const auto& o = col_origin[k];
    switch (o.kind) {
      case ColKind::kShiftLower: z(k) = x(o.var) - shift(o.var); break;
      case ColKind::kFlipUpper: z(k) = shift(o.var) - x(o.var); break;
      case ColKind::kFreePlus: z(k) = std::max(x(o.var), 0.0); break;
      case ColKind::kFreeMinus: z(k) = std::max(-x(o.var), 0.0); break;
    }
  }
  return z;
}

Vector StandardForm::original_duals(const Vector& y) const {
  Vector d = Vector::Zero(original_rows);
  for (int r = 0; r < static_cast<int>(row_origin.size()); ++r) {
    const auto& o = row_origin[r];
    if (o.kind == RowOrigin::Kind::kConstraint) d(o.index) += sense_sign * o.sign * y(r);
  }
  return d;
}

}  // namespace xlp
