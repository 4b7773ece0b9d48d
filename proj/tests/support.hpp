#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "l1l2/model.hpp"

namespace testing {

using l1l2::Matrix;
using l1l2::Vector;

inline l1l2::ProblemInstance make_instance(const Matrix& A, const Vector& b,
                                           std::optional<double> gamma,
                                           l1l2::Cone cone = l1l2::Cone::Free, double p = 1.0,
                                           double q = 2.0) {
  l1l2::InstanceDescription d;
  d.m = A.rows();
  d.n = A.cols();
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) d.A.push_back(A(i, j));
  d.b.assign(b.data(), b.data() + b.size());
  d.gamma = gamma;
  d.cone = cone;
  d.model = gamma ? l1l2::ModelKind::Unconstrained : l1l2::ModelKind::Constrained;
  d.p = p;
  d.q = q;
  return l1l2::validate_instance(d);
}

// A = (1, 1), b = 1
inline l1l2::ProblemInstance two_column(double gamma = 1.0) {
  Matrix A(1, 2);
  A << 1, 1;
  return make_instance(A, Vector::Ones(1), gamma);
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng); }

  Vector gaussian(Eigen::Index n) {
    Vector v(n);
    for (auto& x : v) x = normal();
    return v;
  }
  Matrix gaussian(Eigen::Index m, Eigen::Index n) {
    Matrix M(m, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < m; ++i) M(i, j) = normal();
    return M;
  }
  // entries bounded away from zero, random signs
  Vector nonzero(Eigen::Index n, double lo = 0.2, double hi = 2.0) {
    Vector v(n);
    for (auto& x : v) x = uniform(lo, hi) * (uniform(0, 1) < 0.5 ? -1.0 : 1.0);
    return v;
  }
  // nonnegative with some exact zeros
  Vector sparse_nonneg(Eigen::Index n, double zero_prob) {
    Vector v(n);
    for (auto& x : v) x = uniform(0, 1) < zero_prob ? 0.0 : uniform(0.0, 3.0);
    return v;
  }
};

template <class F>
Vector fd_gradient(F&& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

template <class G>
Matrix fd_jacobian(G&& grad, const Vector& x, double h) {
  Matrix J(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    J.col(i) = (grad(xp) - grad(xm)) / (2 * h);
  }
  return J;
}

inline double rel_err(const Matrix& got, const Matrix& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

inline std::vector<double> sorted_real_eigenvalues(const Matrix& M) {
  Eigen::EigenSolver<Matrix> es(M, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i].real());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<double> sorted_sym_eigenvalues(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace testing
