#pragma once

#include <vector>

#include "xlp/model.hpp"
#include "xlp/solver.hpp"

namespace xlp::detail {

// Two-phase revised simplex on  max c'z  s.t.  M z <= r, z >= 0.
// Columns are z (0..n-1), slacks (n..n+m-1), then phase-1 artificials.
class Simplex {
 public:
  Simplex(const Matrix& M, const Vector& r, const Vector& c, PivotRule rule,
          const Tolerances& tol);

  SolveStatus solve();

  // Phase-2 state from a known feasible basis (no artificials).
  void load_basis(const std::vector<int>& basis);

  Vector structural_values() const;
  // Row multipliers for the original M rows, >= 0 at optimality.
  Vector row_duals() const;
  double objective() const;
  const std::vector<int>& basis() const { return basis_; }
  int iterations() const { return iterations_; }
  int structural_count() const { return n_; }
  int row_count() const { return m_; }

  // Nonbasic columns with zero reduced cost.
  std::vector<int> zero_cost_columns() const;

  struct Move {
    bool ray = false;
    int leaving_row = -1;
    Vector point;  // structural values after the move
  };
  // Ratio test for entering column q; does not modify state.
  Move preview(int q) const;
  void pivot(int q, int row);

 private:
  void price(Vector& y, Vector& d) const;
  int choose_entering(const Vector& d, PivotRule rule) const;
  int choose_leaving(const Vector& u, PivotRule rule) const;
  SolveStatus run_phase(PivotRule rule);
  void drive_out_artificials();
  void refactor();
  double cost_dot_basis() const;

  int m_ = 0;
  int n_ = 0;
  int total_ = 0;
  Matrix cols_;
  Vector rhs_;
  Vector row_sign_;
  Vector c_;
  Vector cost_;
  std::vector<bool> blocked_;
  std::vector<int> basis_;
  std::vector<int> position_;
  Matrix binv_;
  Vector xb_;
  PivotRule rule_;
  Tolerances tol_;
  int iterations_ = 0;
  int since_refactor_ = 0;
};

}  // namespace xlp::detail
