#pragma once

#include <optional>

#include "xlp/model.hpp"

namespace xlp::detail {

// Lawson-Hanson: argmin ||E x - f|| subject to x >= 0.
Vector nnls(const Matrix& E, const Vector& f);

// Least-distance programming: argmin ||t|| subject to G t >= h.
// Empty when infeasible.
std::optional<Vector> ldp(const Matrix& G, const Vector& h);

// argmin ||u|| subject to M u = rhs and u_i >= 0 for nonneg[i].
std::optional<Vector> least_norm_feasible(const Matrix& M, const Vector& rhs,
                                          const std::vector<bool>& nonneg);

}  // namespace xlp::detail
