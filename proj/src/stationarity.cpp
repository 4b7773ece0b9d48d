#include "l1l2/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "l1l2/ratio_calculus.hpp"

namespace l1l2 {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::LocalMinimizer: return "LocalMinimizer";
    case Verdict::StationaryNotMinimizer: return "StationaryNotMinimizer";
    case Verdict::NotStationary: return "NotStationary";
  }
  return "Unknown";
}

std::string_view to_string(ConstrainedVerdict v) {
  switch (v) {
    case ConstrainedVerdict::Stationary: return "Stationary";
    case ConstrainedVerdict::NotStationary: return "NotStationary";
    case ConstrainedVerdict::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

namespace {

void require_unconstrained_l1l2(const ProblemInstance& inst, const Vector& x) {
  if (inst.model() != ModelKind::Unconstrained) {
    throw Error(ErrorCode::WrongModel, "certification applies to the unconstrained model");
  }
  if (!inst.is_l1_over_l2()) {
    throw Error(ErrorCode::Unsupported, "certification is implemented for p = 1, q = 2 only");
  }
  if (x.size() != inst.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "point length differs from instance n");
  }
}

}  // namespace

FirstOrderReport first_order_residual(const ProblemInstance& inst, const Vector& x,
                                      double support_rel) {
  require_unconstrained_l1l2(inst, x);
  const SupportStats st = support_and_stats(x, support_rel);
  if (st.empty()) throw Error(ErrorCode::ZeroPoint, "first-order conditions undefined at x = 0");
  if (inst.cone() == Cone::NonNegative && !in_cone(Cone::NonNegative, x, 0.0)) {
    // a support entry with the wrong sign is a genuine violation; tiny
    // off-support negatives are zeroed by the support cutoff below
    for (auto i : st.support) {
      if (x[i] < 0.0) throw Error(ErrorCode::ConeViolation, "point leaves the nonnegative cone");
    }
  }

  const double gamma = inst.penalty();
  const Vector y = restrict_to(x, st.support);
  const Matrix A_sub = restrict_columns(inst.A(), st.support);
  const Vector resid = A_sub * y - inst.b();

  FirstOrderReport rep;
  rep.support = st.support;
  rep.residual = restricted_l1l2_gradient(y, A_sub, inst.b(), gamma).norm();

  const double r = y.norm();
  const Vector data_grad = inst.A().transpose() * resid;
  rep.off_support_margin = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < inst.cols(); ++i) {
    if (k < st.support.size() && st.support[k] == i) {
      ++k;
      continue;
    }
    const double m = inst.cone() == Cone::Free ? gamma / r - std::abs(data_grad[i])
                                               : gamma / r + data_grad[i];
    rep.off_support_margin = std::min(rep.off_support_margin, m);
  }
  return rep;
}

MinimizerCertificate certify_local_minimizer(const ProblemInstance& inst, const Vector& x,
                                             const CertificationTolerances& tol) {
  const FirstOrderReport fo = first_order_residual(inst, x, tol.support_rel);

  MinimizerCertificate cert;
  cert.support = fo.support;
  cert.first_order_residual = fo.residual;
  cert.off_support_margin = fo.off_support_margin;
  cert.tolerances = tol;
  if (!(fo.residual <= tol.first_order)) {
    cert.verdict = Verdict::NotStationary;
    return cert;
  }

  const Vector y = restrict_to(x, fo.support);
  const Matrix A_sub = restrict_columns(inst.A(), fo.support);
  const Derivatives d = restricted_l1l2_derivatives(y, A_sub, inst.b(), inst.penalty());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(d.hessian, Eigen::EigenvaluesOnly);
  cert.min_hessian_eig = eig.eigenvalues().minCoeff();

  const bool second_order_ok = *cert.min_hessian_eig >= -tol.second_order;
  const bool off_support_ok = fo.off_support_margin >= -tol.first_order;
  cert.verdict = second_order_ok && off_support_ok ? Verdict::LocalMinimizer
                                                   : Verdict::StationaryNotMinimizer;
  return cert;
}

ConstrainedStationarity constrained_stationarity(const ProblemInstance& inst, const Vector& x,
                                                 double tol, double support_rel) {
  if (inst.model() != ModelKind::Constrained) {
    throw Error(ErrorCode::WrongModel, "constrained stationarity applies to the constrained model");
  }
  if (!inst.is_l1_over_l2()) {
    throw Error(ErrorCode::Unsupported, "stationarity is implemented for p = 1, q = 2 only");
  }
  if (x.size() != inst.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "point length differs from instance n");
  }
  const SupportStats st = support_and_stats(x, support_rel);
  if (st.empty()) throw Error(ErrorCode::ZeroPoint, "ratio undefined at x = 0");

  ConstrainedStationarity out;
  out.support = st.support;
  out.tolerance = tol;
  out.feasibility = feasibility_residual(inst, x);

  const Vector y = restrict_to(x, st.support);
  const Matrix A_sub = restrict_columns(inst.A(), st.support);
  const Vector g = ratio_derivatives(l1_over_l2_point(y)).gradient;
  // component of g orthogonal to range(A_sub^T) = projection onto null(A_sub)
  const Matrix At = A_sub.transpose();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(At);
  const Vector pg = g - At * cod.solve(g);
  out.projected_gradient = pg.norm();

  if (out.feasibility > tol * std::max(1.0, inst.b().norm())) {
    out.verdict = ConstrainedVerdict::Infeasible;
  } else if (out.projected_gradient > tol) {
    out.verdict = ConstrainedVerdict::NotStationary;
  } else {
    out.verdict = ConstrainedVerdict::Stationary;
  }
  return out;
}

}  // namespace l1l2
