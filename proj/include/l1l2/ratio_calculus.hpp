#pragma once

#include <vector>

#include "l1l2/model.hpp"

namespace l1l2 {

/// Values and first/second derivatives of a numerator N and a denominator D
/// at one point u; input to ratio_derivatives().
struct RatioPoint {
  Vector u;
  double num_val = 0.0;
  double den_val = 1.0;
  Vector num_grad;
  Vector den_grad;
  Matrix num_hess;
  Matrix den_hess;
};

struct Derivatives {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

/// Value, gradient and Hessian of R = N / D:
///   grad R = (grad N - R grad D) / D
///   hess R = hess N / D - (grad D grad N^T + grad N grad D^T + N hess D) / D^2
///            + 2 N / D^3 grad D grad D^T
Derivatives ratio_derivatives(const RatioPoint& pt);

/// N = ||u||_1 (linear on the sign pattern of u) and D = ||u||_2 at u.
/// Every entry of u must be nonzero.
RatioPoint l1_over_l2_point(const Vector& u);

/// Smooth objective of the support-restricted problem
///   f(y) = gamma ||y||_1 / ||y||_2 + 1/2 ||A_sub y - b||^2
/// on the fixed sign pattern of y. The Hessian is
///   A^T A - gamma/r^3 (y sign(y)^T + sign(y) y^T) + 3 gamma a / r^5 y y^T - gamma a / r^3 I.
Derivatives restricted_l1l2_derivatives(const Vector& y, const Matrix& A_sub, const Vector& b,
                                        double gamma);

/// Gradient only; cheaper than restricted_l1l2_derivatives() for the solver loop.
Vector restricted_l1l2_gradient(const Vector& y, const Matrix& A_sub, const Vector& b,
                                double gamma);

enum class CollinearPolicy { Reject, DenseFallback };

/// Nonzero spectrum of G = x z^T + e x^T with z = e + delta x.
struct RankTwoSpec {
  Vector x;
  Vector e_vec;
  double shift_delta = 0.0;
  double lambda1 = 0.0;  // lambda1 <= lambda2
  double lambda2 = 0.0;
  int zero_multiplicity = 0;
  bool dense_fallback = false;
};

/// Closed form from the 2x2 companion matrix [[z'x, z'e], [x'x, e'x]]:
///   lambda = ((z'x + e'x) -/+ sqrt((z'x - e'x)^2 + 4 (z'e)(x'x))) / 2,
/// plus a zero eigenvalue of multiplicity n - 2. When x lies in span(e)
/// (|<x,e>| >= (1 - 1e-12) ||x|| ||e||) the closed form does not apply: Reject
/// throws CollinearInput, DenseFallback eigendecomposes G directly.
RankTwoSpec rank_two_eigenvalues(const Vector& x, const Vector& e_vec, double shift_delta,
                                 CollinearPolicy policy = CollinearPolicy::Reject);

/// Spectrum of Q = gamma/r^3 [ |y| e^T + e |y|^T - 3a/r^2 |y||y|^T + a I ]
/// for a support of size s with a = ||y||_1 and r = ||y||_2.
struct QSpectrum {
  int s = 0;
  double a = 0.0;
  double r = 0.0;
  double gamma = 0.0;
  double lam1 = 0.0;  // nonzero eigenvalues of the rank-two part
  double lam2 = 0.0;
  double q_neg = 0.0;  // gamma/r^3 (lam1 + a)
  double q_pos = 0.0;  // gamma/r^3 (lam2 + a)
  double q_bulk = 0.0;  // gamma a / r^3
  int bulk_multiplicity = 0;  // max(s - 2, 0)

  /// The s eigenvalues of Q in ascending order. For s = 1 the matrix is 1x1
  /// and its only eigenvalue is q_neg.
  std::vector<double> eigenvalues() const;
};

QSpectrum q_matrix_spectrum(int s, double a, double r, double gamma);

}  // namespace l1l2
