#pragma once

#include <vector>

#include "l1l2/model.hpp"

namespace l1l2 {

struct VertexEnumeration {
  std::vector<Vector> vertices;  // distinct, in discovery order
  long long bases_examined = 0;
  Eigen::Index rank = 0;
};

/// Number of candidate bases C(cols, rank) for {u >= 0 : M u = c}, saturating
/// at LLONG_MAX.
long long basis_count(const Matrix& M);

/// All vertices (basic feasible solutions) of {u >= 0 : M u = c} by brute
/// force over column subsets of size rank(M). Redundant rows are dropped.
/// Throws BudgetExceeded when C(cols, rank) > budget.
VertexEnumeration enumerate_vertices(const Matrix& M, const Vector& c, long long budget,
                                     double tol = 1e-9);

}  // namespace l1l2
