#pragma once

#include <optional>
#include <vector>

#include "l1l2/model.hpp"

namespace l1l2 {

enum class Verdict { LocalMinimizer, StationaryNotMinimizer, NotStationary };

std::string_view to_string(Verdict v);

struct CertificationTolerances {
  double first_order = 1e-9;
  double second_order = 1e-8;
  double support_rel = kDefaultSupportTol;
};

struct FirstOrderReport {
  std::vector<Eigen::Index> support;
  /// Norm of the support-restricted gradient
  ///   gamma (sign(x_L)/r - a/r^3 x_L) + A_L^T (A_L x_L - b).
  double residual = 0.0;
  /// Off-support one-sided derivative margin: min over i outside the support of
  /// gamma/r - |[A^T(Ax-b)]_i| (free cone) or gamma/r + [A^T(Ax-b)]_i (nonnegative
  /// cone). +inf when the support is full.
  double off_support_margin = 0.0;
};

/// Necessary-condition screening of a point of the unconstrained L1/L2 model.
/// LocalMinimizer means every stated necessary condition passes, not a proof
/// of local minimality.
struct MinimizerCertificate {
  std::vector<Eigen::Index> support;
  double first_order_residual = 0.0;
  double off_support_margin = 0.0;
  /// Smallest eigenvalue of the support-restricted Hessian; not computed for
  /// NotStationary points.
  std::optional<double> min_hessian_eig;
  Verdict verdict = Verdict::NotStationary;
  CertificationTolerances tolerances;
};

FirstOrderReport first_order_residual(const ProblemInstance& inst, const Vector& x,
                                      double support_rel = kDefaultSupportTol);

MinimizerCertificate certify_local_minimizer(const ProblemInstance& inst, const Vector& x,
                                             const CertificationTolerances& tol = {});

enum class ConstrainedVerdict { Stationary, NotStationary, Infeasible };

std::string_view to_string(ConstrainedVerdict v);

/// Feasibility plus stationarity of ||x||_1/||x||_2 on the support-restricted
/// affine set {y : A_L y = b}: the ratio gradient projected onto null(A_L).
struct ConstrainedStationarity {
  std::vector<Eigen::Index> support;
  double feasibility = 0.0;
  double projected_gradient = 0.0;
  ConstrainedVerdict verdict = ConstrainedVerdict::NotStationary;
  double tolerance = 0.0;
};

ConstrainedStationarity constrained_stationarity(const ProblemInstance& inst, const Vector& x,
                                                 double tol = 1e-9,
                                                 double support_rel = kDefaultSupportTol);

}  // namespace l1l2
