#include "l1l2/ratio_calculus.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace l1l2 {

Derivatives ratio_derivatives(const RatioPoint& pt) {
  const double d = pt.den_val;
  if (d == 0.0 || !std::isfinite(d)) {
    throw Error(ErrorCode::ZeroDenominator, "ratio denominator vanishes");
  }
  const auto s = pt.u.size();
  if (pt.num_grad.size() != s || pt.den_grad.size() != s || pt.num_hess.rows() != s ||
      pt.num_hess.cols() != s || pt.den_hess.rows() != s || pt.den_hess.cols() != s) {
    throw Error(ErrorCode::DimensionMismatch, "ratio point blocks disagree in size");
  }
  const double n = pt.num_val;
  Derivatives out;
  out.value = n / d;
  out.gradient = (pt.num_grad - out.value * pt.den_grad) / d;

  const Matrix cross = pt.den_grad * pt.num_grad.transpose();
  out.hessian = pt.num_hess / d - (cross + cross.transpose() + n * pt.den_hess) / (d * d) +
                (2.0 * n / (d * d * d)) * (pt.den_grad * pt.den_grad.transpose());
  // exact symmetry; the formula is symmetric in exact arithmetic
  out.hessian = 0.5 * (out.hessian + out.hessian.transpose()).eval();
  return out;
}

RatioPoint l1_over_l2_point(const Vector& u) {
  if ((u.array() == 0.0).any()) {
    throw Error(ErrorCode::ZeroEntryOnSupport, "l1/l2 is not smooth at a zero entry");
  }
  const auto s = u.size();
  const double r = u.norm();
  RatioPoint pt;
  pt.u = u;
  pt.num_val = u.lpNorm<1>();
  pt.den_val = r;
  pt.num_grad = u.array().sign().matrix();
  pt.den_grad = u / r;
  pt.num_hess = Matrix::Zero(s, s);
  pt.den_hess = (Matrix::Identity(s, s) - u * u.transpose() / (r * r)) / r;
  return pt;
}

namespace {

void check_restricted_args(const Vector& y, const Matrix& A_sub, const Vector& b) {
  if (A_sub.cols() != y.size() || A_sub.rows() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "restricted matrix does not match point/observation");
  }
  if (y.size() == 0) throw Error(ErrorCode::EmptySupport, "empty support");
  if ((y.array() == 0.0).any()) {
    throw Error(ErrorCode::ZeroEntryOnSupport, "zero entry on the support");
  }
}

}  // namespace

Vector restricted_l1l2_gradient(const Vector& y, const Matrix& A_sub, const Vector& b,
                                double gamma) {
  check_restricted_args(y, A_sub, b);
  const double r = y.norm();
  const double a = y.lpNorm<1>();
  const Vector sgn = y.array().sign().matrix();
  return gamma * (sgn / r - (a / (r * r * r)) * y) + A_sub.transpose() * (A_sub * y - b);
}

Derivatives restricted_l1l2_derivatives(const Vector& y, const Matrix& A_sub, const Vector& b,
                                        double gamma) {
  check_restricted_args(y, A_sub, b);
  const auto s = y.size();
  const double r = y.norm();
  const double a = y.lpNorm<1>();
  const double r3 = r * r * r;
  const double r5 = r3 * r * r;
  const Vector sgn = y.array().sign().matrix();
  const Vector resid = A_sub * y - b;

  Derivatives out;
  out.value = gamma * a / r + 0.5 * resid.squaredNorm();
  out.gradient = gamma * (sgn / r - (a / r3) * y) + A_sub.transpose() * resid;
  const Matrix ys = y * sgn.transpose();
  out.hessian = A_sub.transpose() * A_sub - (gamma / r3) * (ys + ys.transpose()) +
                (3.0 * gamma * a / r5) * (y * y.transpose()) -
                (gamma * a / r3) * Matrix::Identity(s, s);
  out.hessian = 0.5 * (out.hessian + out.hessian.transpose()).eval();
  return out;
}

RankTwoSpec rank_two_eigenvalues(const Vector& x, const Vector& e_vec, double shift_delta,
                                 CollinearPolicy policy) {
  if (x.size() != e_vec.size()) throw Error(ErrorCode::DimensionMismatch, "x and e differ in length");
  if (x.size() < 2) throw Error(ErrorCode::DimensionMismatch, "need n >= 2");
  if (x.isZero(0.0)) throw Error(ErrorCode::ZeroPoint, "x must be nonzero");
  if (shift_delta == 0.0) throw Error(ErrorCode::BadArgument, "shift delta must be nonzero");

  RankTwoSpec spec;
  spec.x = x;
  spec.e_vec = e_vec;
  spec.shift_delta = shift_delta;
  const auto n = static_cast<int>(x.size());

  const double xe = x.dot(e_vec);
  const bool collinear = std::abs(xe) >= (1.0 - 1e-12) * x.norm() * e_vec.norm();
  if (collinear) {
    if (policy == CollinearPolicy::Reject) {
      throw Error(ErrorCode::CollinearInput, "x lies in span(e); closed form does not apply");
    }
    const Vector z = e_vec + shift_delta * x;
    const Matrix G = x * z.transpose() + e_vec * x.transpose();
    Eigen::EigenSolver<Matrix> solver(G, false);
    std::vector<double> eig;
    for (Eigen::Index i = 0; i < n; ++i) eig.push_back(solver.eigenvalues()[i].real());
    std::sort(eig.begin(), eig.end(), [](double l, double r) { return std::abs(l) > std::abs(r); });
    const double scale = std::abs(eig.front());
    int nonzero = 0;
    for (double v : eig) nonzero += std::abs(v) > 1e-10 * std::max(scale, 1.0);
    spec.lambda1 = std::min(eig[0], eig[1]);
    spec.lambda2 = std::max(eig[0], eig[1]);
    spec.zero_multiplicity = n - nonzero;
    spec.dense_fallback = true;
    return spec;
  }

  const Vector z = e_vec + shift_delta * x;
  const double zx = z.dot(x);
  const double ze = z.dot(e_vec);
  const double xx = x.squaredNorm();
  const double disc = (zx - xe) * (zx - xe) + 4.0 * ze * xx;
  // disc >= (|delta| ||x||^2 - 2 ||e|| ||x||)^2 >= 0 by Cauchy-Schwarz
  const double root = std::sqrt(std::max(disc, 0.0));
  spec.lambda1 = 0.5 * ((zx + xe) - root);
  spec.lambda2 = 0.5 * ((zx + xe) + root);
  spec.zero_multiplicity = n - 2;
  return spec;
}

std::vector<double> QSpectrum::eigenvalues() const {
  if (s == 1) return {q_neg};
  std::vector<double> eig{q_neg, q_pos};
  eig.insert(eig.end(), static_cast<std::size_t>(bulk_multiplicity), q_bulk);
  std::sort(eig.begin(), eig.end());
  return eig;
}

QSpectrum q_matrix_spectrum(int s, double a, double r, double gamma) {
  if (s < 1) throw Error(ErrorCode::EmptySupport, "support size must be at least 1");
  if (!(r > 0.0) || !std::isfinite(r) || !std::isfinite(a)) {
    throw Error(ErrorCode::BadArgument, "r must be positive and finite");
  }
  if (!(gamma > 0.0)) throw Error(ErrorCode::NonPositiveGamma, "gamma must be positive");
  const double cs_slack = 1e-12 * a;
  if (a < r - cs_slack) throw Error(ErrorCode::BadArgument, "need r <= a (l1 dominates l2)");
  if (a > std::sqrt(static_cast<double>(s)) * r + cs_slack) {
    throw Error(ErrorCode::CauchySchwarzViolated, "a exceeds sqrt(s) * r");
  }

  QSpectrum q;
  q.s = s;
  q.a = a;
  q.r = r;
  q.gamma = gamma;
  const double root = std::sqrt(std::max(4.0 * s * r * r - 3.0 * a * a, 0.0));
  q.lam1 = 0.5 * (-a - root);
  q.lam2 = 0.5 * (-a + root);
  const double scale = gamma / (r * r * r);
  q.q_neg = scale * (q.lam1 + a);
  q.q_pos = scale * (q.lam2 + a);
  q.q_bulk = scale * a;
  q.bulk_multiplicity = std::max(s - 2, 0);
  return q;
}

}  // namespace l1l2
