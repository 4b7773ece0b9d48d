#include "l1l2/polytope.hpp"

#include <climits>

#include <Eigen/LU>
#include <Eigen/QR>

namespace l1l2 {

namespace {

long long binomial_saturating(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long out = 1;
  for (long long i = 1; i <= k; ++i) {
    // out * (n - k + i) / i stays integral at every step
    const long long num = n - k + i;
    if (out > LLONG_MAX / num) return LLONG_MAX;
    out = out * num / i;
  }
  return out;
}

}  // namespace

long long basis_count(const Matrix& M) {
  Eigen::ColPivHouseholderQR<Matrix> qr(M);
  return binomial_saturating(M.cols(), qr.rank());
}

VertexEnumeration enumerate_vertices(const Matrix& M, const Vector& c, long long budget,
                                     double tol) {
  if (M.rows() != c.size()) throw Error(ErrorCode::DimensionMismatch, "M and c disagree");
  VertexEnumeration out;

  // independent rows: pivot columns of a QR of M^T
  Eigen::ColPivHouseholderQR<Matrix> qr(M.transpose());
  const Eigen::Index rank = qr.rank();
  out.rank = rank;
  const long long count = binomial_saturating(M.cols(), rank);
  if (count > budget) {
    throw Error(ErrorCode::BudgetExceeded,
                "vertex enumeration needs " + std::to_string(count) + " bases, budget " +
                    std::to_string(budget));
  }
  Matrix rows(rank, M.cols());
  Vector rhs(rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const Eigen::Index r = qr.colsPermutation().indices()[k];
    rows.row(k) = M.row(r);
    rhs[k] = c[r];
  }

  const Eigen::Index n = M.cols();
  std::vector<Eigen::Index> cols(static_cast<std::size_t>(rank));
  for (Eigen::Index k = 0; k < rank; ++k) cols[static_cast<std::size_t>(k)] = k;
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());

  Matrix B(rank, rank);
  while (true) {
    ++out.bases_examined;
    for (Eigen::Index k = 0; k < rank; ++k) B.col(k) = rows.col(cols[static_cast<std::size_t>(k)]);
    Eigen::FullPivLU<Matrix> lu(B);
    if (lu.isInvertible()) {
      const Vector ub = lu.solve(rhs);
      if (ub.minCoeff() >= -tol) {
        Vector u = Vector::Zero(n);
        for (Eigen::Index k = 0; k < rank; ++k) u[cols[static_cast<std::size_t>(k)]] = std::max(ub[k], 0.0);
        if ((M * u - c).cwiseAbs().maxCoeff() <= tol * scale) {
          bool seen = false;
          for (const auto& v : out.vertices) {
            if ((v - u).cwiseAbs().maxCoeff() <= tol) {
              seen = true;
              break;
            }
          }
          if (!seen) out.vertices.push_back(u);
        }
      }
    }
    // next combination in lexicographic order
    Eigen::Index i = rank - 1;
    while (i >= 0 && cols[static_cast<std::size_t>(i)] == n - rank + i) --i;
    if (i < 0) break;
    ++cols[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < rank; ++j)
      cols[static_cast<std::size_t>(j)] = cols[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace l1l2
