#include "nnls.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace xlp::detail {

namespace {

Vector solve_passive(const Matrix& E, const Vector& f, const std::vector<int>& passive) {
  Matrix Ep(E.rows(), static_cast<long>(passive.size()));
  for (std::size_t i = 0; i < passive.size(); ++i) Ep.col(static_cast<long>(i)) = E.col(passive[i]);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Ep);
  return cod.solve(f);
}

}  // namespace

Vector nnls(const Matrix& E, const Vector& f) {
  const int k = static_cast<int>(E.cols());
  Vector x = Vector::Zero(k);
  if (k == 0 || E.rows() == 0) return x;
  std::vector<bool> in_p(k, false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, E.cwiseAbs().colwise().sum().maxCoeff()) *
                     std::max<double>(E.rows(), k);
  Vector grad = E.transpose() * (f - E * x);
  for (int outer = 0; outer < 3 * k + 10; ++outer) {
    int j = -1;
    double best = tol;
    for (int i = 0; i < k; ++i) {
      if (!in_p[i] && grad(i) > best) {
        best = grad(i);
        j = i;
      }
    }
    if (j < 0) break;
    in_p[j] = true;
    for (int inner = 0; inner < 3 * k + 10; ++inner) {
      std::vector<int> passive;
      for (int i = 0; i < k; ++i) {
        if (in_p[i]) passive.push_back(i);
      }
      Vector sp = solve_passive(E, f, passive);
      Vector s = Vector::Zero(k);
      for (std::size_t i = 0; i < passive.size(); ++i) s(passive[i]) = sp(static_cast<long>(i));
      bool positive = true;
      for (int i : passive) positive = positive && s(i) > 0.0;
      if (positive) {
        x = s;
        break;
      }
      double alpha = 1.0;
      for (int i : passive) {
        if (s(i) <= 0.0) alpha = std::min(alpha, x(i) / (x(i) - s(i)));
      }
      x += alpha * (s - x);
      for (int i : passive) {
        if (x(i) <= tol) {
          x(i) = 0.0;
          in_p[i] = false;
        }
      }
    }
    grad = E.transpose() * (f - E * x);
  }
  return x;
}

std::optional<Vector> ldp(const Matrix& G, const Vector& h) {
  const int q = static_cast<int>(G.cols());
  const int r = static_cast<int>(G.rows());
  if (r == 0) return Vector::Zero(q);
  Matrix E(q + 1, r);
  E.topRows(q) = G.transpose();
  E.row(q) = h.transpose();
  Vector f = Vector::Zero(q + 1);
  f(q) = 1.0;
  Vector v = nnls(E, f);
  Vector rho = E * v - f;
  if (rho.norm() < 1e-12 || std::abs(rho(q)) < 1e-14) return std::nullopt;
  return Vector(-rho.head(q) / rho(q));
}

std::optional<Vector> least_norm_feasible(const Matrix& M, const Vector& rhs,
                                          const std::vector<bool>& nonneg) {
  const int k = static_cast<int>(M.cols());
  const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  if (k == 0) {
    if (rhs.lpNorm<Eigen::Infinity>() > 1e-9 * scale) return std::nullopt;
    return Vector::Zero(0);
  }
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-11);
  const int rank = static_cast<int>(svd.rank());
  Vector u0 = svd.solve(rhs);
  if ((M * u0 - rhs).lpNorm<Eigen::Infinity>() > 1e-8 * scale) return std::nullopt;
  Matrix Z = svd.matrixV().rightCols(k - rank);

  std::vector<int> idx;
  for (int i = 0; i < k; ++i) {
    if (nonneg[i]) idx.push_back(i);
  }
  Matrix G(static_cast<long>(idx.size()), Z.cols());
  Vector h(static_cast<long>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    G.row(static_cast<long>(i)) = Z.row(idx[i]);
    h(static_cast<long>(i)) = -u0(idx[i]);
  }
  Vector u = u0;
  if (Z.cols() > 0) {
    auto t = ldp(G, h);
    if (!t) return std::nullopt;
    u = u0 + Z * *t;
  }
  for (int i : idx) {
    if (u(i) < -1e-8 * scale) return std::nullopt;
  }

  // Polish on the support so exact values come out exact.
  std::vector<int> support;
  for (int i = 0; i < k; ++i) {
    if (!nonneg[i] || u(i) > 1e-10 * scale) support.push_back(i);
  }
  if (!support.empty()) {
    Matrix Ms(M.rows(), static_cast<long>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i) Ms.col(static_cast<long>(i)) = M.col(support[i]);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Ms);
    Vector us = cod.solve(rhs);
    bool ok = (Ms * us - rhs).lpNorm<Eigen::Infinity>() <= 1e-10 * scale;
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (nonneg[support[i]] && us(static_cast<long>(i)) < -1e-12 * scale) ok = false;
    }
    if (ok && us.norm() <= u.norm() * (1.0 + 1e-9) + 1e-12) {
      u.setZero();
      for (std::size_t i = 0; i < support.size(); ++i) u(support[i]) = us(static_cast<long>(i));
    }
  }
  for (int i : idx) u(i) = std::max(u(i), 0.0);
  return u;
}

}  // namespace xlp::detail
