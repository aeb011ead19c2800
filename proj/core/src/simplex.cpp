#include "simplex.hpp"

#include <algorithm>
#include <cmath>

#include "xlp/error.hpp"

namespace xlp::detail {

namespace {
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 64;
}  // namespace

Simplex::Simplex(const Matrix& M, const Vector& r, const Vector& c, PivotRule rule,
                 const Tolerances& tol)
    : m_(static_cast<int>(M.rows())), n_(static_cast<int>(M.cols())), rule_(rule), tol_(tol) {
  int artificials = 0;
  for (int i = 0; i < m_; ++i) {
    if (r(i) < 0.0) ++artificials;
  }
  total_ = n_ + m_ + artificials;
  cols_ = Matrix::Zero(m_, total_);
  rhs_ = r;
  row_sign_ = Vector::Ones(m_);
  c_ = Vector::Zero(total_);
  c_.head(n_) = c;
  blocked_.assign(total_, false);
  basis_.assign(m_, -1);
  position_.assign(total_, -1);

  int a = n_ + m_;
  for (int i = 0; i < m_; ++i) {
    cols_.block(i, 0, 1, n_) = M.row(i);
    cols_(i, n_ + i) = 1.0;
    if (r(i) < 0.0) {
      cols_.row(i) *= -1.0;
      rhs_(i) = -r(i);
      row_sign_(i) = -1.0;
      cols_(i, a) = 1.0;
      basis_[i] = a++;
    } else {
      basis_[i] = n_ + i;
    }
    position_[basis_[i]] = i;
  }
  binv_ = Matrix::Identity(m_, m_);
  xb_ = rhs_;
}

double Simplex::cost_dot_basis() const {
  double s = 0.0;
  for (int i = 0; i < m_; ++i) s += cost_(basis_[i]) * xb_(i);
  return s;
}

void Simplex::refactor() {
  since_refactor_ = 0;
  if (m_ == 0) return;
  Matrix B(m_, m_);
  for (int i = 0; i < m_; ++i) B.col(i) = cols_.col(basis_[i]);
  Eigen::PartialPivLU<Matrix> lu(B);
  binv_ = lu.inverse();
  xb_ = binv_ * rhs_;
  for (int i = 0; i < m_; ++i) {
    if (xb_(i) < 0.0 && xb_(i) > -tol_.feasibility) xb_(i) = 0.0;
  }
}

void Simplex::price(Vector& y, Vector& d) const {
  Vector cb(m_);
  for (int i = 0; i < m_; ++i) cb(i) = cost_(basis_[i]);
  y = binv_.transpose() * cb;
  d = cost_ - cols_.transpose() * y;
}

int Simplex::choose_entering(const Vector& d, PivotRule rule) const {
  int best = -1;
  double best_d = tol_.reduced_cost;
  for (int j = 0; j < total_; ++j) {
    if (position_[j] >= 0 || blocked_[j]) continue;
    if (d(j) > best_d) {
      best = j;
      if (rule == PivotRule::kBland) return j;
      best_d = d(j);
    }
  }
  return best;
}

int Simplex::choose_leaving(const Vector& u, PivotRule rule) const {
  double tmin = kInf;
  for (int i = 0; i < m_; ++i) {
    if (u(i) > kPivotTol) tmin = std::min(tmin, std::max(xb_(i), 0.0) / u(i));
  }
  if (!std::isfinite(tmin)) return -1;
  const double slack = 1e-12 * (1.0 + tmin);
  int best = -1;
  for (int i = 0; i < m_; ++i) {
    if (u(i) <= kPivotTol || std::max(xb_(i), 0.0) / u(i) > tmin + slack) continue;
    if (best < 0) {
      best = i;
    } else if (rule == PivotRule::kBland) {
      if (basis_[i] < basis_[best]) best = i;
    } else if (u(i) > u(best)) {
      best = i;
    }
  }
  return best;
}

void Simplex::pivot(int q, int row) {
  Vector u = binv_ * cols_.col(q);
  const double theta = std::max(xb_(row), 0.0) / u(row);
  xb_ -= theta * u;
  xb_(row) = theta;
  Eigen::RowVectorXd piv = binv_.row(row) / u(row);
  binv_.noalias() -= u * piv;
  binv_.row(row) = piv;
  for (int i = 0; i < m_; ++i) {
    if (xb_(i) < 0.0 && xb_(i) > -tol_.feasibility) xb_(i) = 0.0;
  }
  position_[basis_[row]] = -1;
  basis_[row] = q;
  position_[q] = row;
  ++since_refactor_;
}

SolveStatus Simplex::run_phase(PivotRule rule) {
  PivotRule current = rule;
  int stall = 0;
  double last = cost_dot_basis();
  const int stall_limit = 10 * (m_ + n_);
  const long max_iterations = 50L * (m_ + total_) + 1000;
  Vector y, d;
  while (true) {
    if (since_refactor_ >= kRefactorEvery) refactor();
    price(y, d);
    int q = choose_entering(d, current);
    if (q < 0 && since_refactor_ > 0) {
      refactor();
      price(y, d);
      q = choose_entering(d, current);
    }
    if (q < 0) return SolveStatus::kOptimal;
    Vector u = binv_ * cols_.col(q);
    int row = choose_leaving(u, current);
    if (row < 0) return SolveStatus::kUnbounded;
    pivot(q, row);
    if (++iterations_ > max_iterations) {
      throw Error(ErrorCode::kCycleDetected,
                  "simplex exceeded " + std::to_string(max_iterations) + " iterations");
    }
    const double obj = cost_dot_basis();
    if (obj > last + 1e-12 * (1.0 + std::abs(last))) {
      last = obj;
      stall = 0;
    } else if (++stall > stall_limit && current == PivotRule::kDantzig) {
      current = PivotRule::kBland;
    }
  }
}

void Simplex::drive_out_artificials() {
  const int first_artificial = n_ + m_;
  for (int i = 0; i < m_; ++i) {
    if (basis_[i] < first_artificial) continue;
    Eigen::RowVectorXd alpha = binv_.row(i) * cols_;
    int best = -1;
    double best_abs = kPivotTol;
    for (int j = 0; j < first_artificial; ++j) {
      if (position_[j] >= 0) continue;
      if (std::abs(alpha(j)) > best_abs) {
        best_abs = std::abs(alpha(j));
        best = j;
      }
    }
    if (best < 0) continue;  // redundant row; artificial stays basic at zero
    xb_(i) = 0.0;
    // Degenerate pivot; a negative pivot element is fine at zero level.
    Vector u = binv_ * cols_.col(best);
    Eigen::RowVectorXd piv = binv_.row(i) / u(i);
    binv_.noalias() -= u * piv;
    binv_.row(i) = piv;
    position_[basis_[i]] = -1;
    basis_[i] = best;
    position_[best] = i;
    ++since_refactor_;
  }
  for (int j = first_artificial; j < total_; ++j) blocked_[j] = true;
  refactor();
}

SolveStatus Simplex::solve() {
  if (total_ > n_ + m_) {
    cost_ = Vector::Zero(total_);
    for (int j = n_ + m_; j < total_; ++j) cost_(j) = -1.0;
    run_phase(rule_);
    const double scale = std::max(1.0, rhs_.lpNorm<Eigen::Infinity>());
    if (cost_dot_basis() < -tol_.feasibility * scale) return SolveStatus::kInfeasible;
    drive_out_artificials();
  }
  cost_ = c_;
  return run_phase(rule_);
}

void Simplex::load_basis(const std::vector<int>& basis) {
  std::fill(position_.begin(), position_.end(), -1);
  basis_ = basis;
  for (int i = 0; i < m_; ++i) position_[basis_[i]] = i;
  for (int j = n_ + m_; j < total_; ++j) blocked_[j] = true;
  cost_ = c_;
  refactor();
}

Vector Simplex::structural_values() const {
  Vector z = Vector::Zero(n_);
  for (int i = 0; i < m_; ++i) {
    if (basis_[i] < n_) z(basis_[i]) = std::max(xb_(i), 0.0);
  }
  return z;
}

Vector Simplex::row_duals() const {
  Vector cb(m_);
  for (int i = 0; i < m_; ++i) cb(i) = cost_(basis_[i]);
  Vector y = binv_.transpose() * cb;
  return y.cwiseProduct(row_sign_);
}

double Simplex::objective() const { return c_.head(n_).dot(structural_values()); }

std::vector<int> Simplex::zero_cost_columns() const {
  Vector y, d;
  price(y, d);
  std::vector<int> out;
  for (int j = 0; j < total_; ++j) {
    if (position_[j] < 0 && !blocked_[j] && std::abs(d(j)) <= tol_.reduced_cost) {
      out.push_back(j);
    }
  }
  return out;
}

Simplex::Move Simplex::preview(int q) const {
  Move move;
  Vector u = binv_ * cols_.col(q);
  move.leaving_row = choose_leaving(u, rule_);
  Vector z = structural_values();
  double theta = 1.0;
  if (move.leaving_row < 0) {
    move.ray = true;
  } else {
    theta = std::max(xb_(move.leaving_row), 0.0) / u(move.leaving_row);
  }
  for (int i = 0; i < m_; ++i) {
    if (basis_[i] < n_) z(basis_[i]) = std::max(xb_(i) - theta * u(i), 0.0);
  }
  if (q < n_) z(q) = theta;
  move.point = z;
  return move;
}

}  // namespace xlp::detail
