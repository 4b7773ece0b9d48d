#include "l1l2/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace l1l2 {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroObservation: return "ZeroObservation";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::BadGamma: return "BadGamma";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ZeroPoint: return "ZeroPoint";
    case ErrorCode::ConeViolation: return "ConeViolation";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::MixedSignQCheck: return "MixedSignQCheck";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::ZeroEntryOnSupport: return "ZeroEntryOnSupport";
    case ErrorCode::CollinearInput: return "CollinearInput";
    case ErrorCode::CauchySchwarzViolated: return "CauchySchwarzViolated";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::RankDeficientSupport: return "RankDeficientSupport";
    case ErrorCode::NonPositiveGamma: return "NonPositiveGamma";
    case ErrorCode::UncertifiedPoint: return "UncertifiedPoint";
    case ErrorCode::WrongModel: return "WrongModel";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::ZeroCollapse: return "ZeroCollapse";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::TooFewWeights: return "TooFewWeights";
    case ErrorCode::ShapeViolation: return "ShapeViolation";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::BadArgument: return "BadArgument";
  }
  return "Unknown";
}

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Slack for cone membership; scale-aware so tiny roundoff on large vectors passes.
double cone_slack(const Vector& x) {
  return 1e-12 * std::max(1.0, x.size() ? x.cwiseAbs().maxCoeff() : 0.0);
}

}  // namespace

double ProblemInstance::penalty() const {
  if (!gamma_) {
    throw Error(ErrorCode::WrongModel, "instance has no penalty weight (constrained model)");
  }
  return *gamma_;
}

InstanceDescription ProblemInstance::describe() const {
  InstanceDescription d;
  d.m = A_.rows();
  d.n = A_.cols();
  d.A.reserve(static_cast<std::size_t>(A_.size()));
  for (Eigen::Index i = 0; i < A_.rows(); ++i)
    for (Eigen::Index j = 0; j < A_.cols(); ++j) d.A.push_back(A_(i, j));
  d.b.assign(b_.data(), b_.data() + b_.size());
  d.gamma = gamma_;
  d.cone = cone_;
  d.model = model_;
  d.p = p_;
  d.q = q_;
  return d;
}

ProblemInstance validate_instance(const InstanceDescription& raw) {
  if (raw.m <= 0 || raw.n <= 0) {
    throw Error(ErrorCode::DimensionMismatch, "m and n must be positive");
  }
  const auto expected = static_cast<std::size_t>(raw.m) * static_cast<std::size_t>(raw.n);
  if (raw.A.size() != expected) {
    throw Error(ErrorCode::DimensionMismatch,
                "A has " + std::to_string(raw.A.size()) + " entries, expected m*n = " +
                    std::to_string(expected));
  }
  if (raw.b.size() != static_cast<std::size_t>(raw.m)) {
    throw Error(ErrorCode::DimensionMismatch,
                "b has length " + std::to_string(raw.b.size()) + ", expected m = " +
                    std::to_string(raw.m));
  }
  if (!all_finite(raw.A) || !all_finite(raw.b)) {
    throw Error(ErrorCode::NonFinite, "A and b must be finite");
  }
  if (!std::isfinite(raw.p) || !(raw.p > 0.0 && raw.p <= 1.0)) {
    throw Error(ErrorCode::BadExponent, "p must lie in (0, 1]");
  }
  if (!std::isfinite(raw.q) || !(raw.q > 1.0)) {
    throw Error(ErrorCode::BadExponent, "q must lie in (1, inf)");
  }
  if (std::all_of(raw.b.begin(), raw.b.end(), [](double v) { return v == 0.0; })) {
    throw Error(ErrorCode::ZeroObservation, "observation b must be nonzero");
  }
  if (raw.model == ModelKind::Unconstrained) {
    if (!raw.gamma) throw Error(ErrorCode::BadGamma, "unconstrained model requires gamma");
    if (!std::isfinite(*raw.gamma)) throw Error(ErrorCode::NonFinite, "gamma must be finite");
    if (!(*raw.gamma > 0.0)) throw Error(ErrorCode::BadGamma, "gamma must be positive");
  } else if (raw.gamma) {
    throw Error(ErrorCode::BadGamma, "constrained model takes no gamma");
  }

  ProblemInstance inst;
  inst.A_.resize(raw.m, raw.n);
  for (Eigen::Index i = 0; i < raw.m; ++i)
    for (Eigen::Index j = 0; j < raw.n; ++j)
      inst.A_(i, j) = raw.A[static_cast<std::size_t>(i * raw.n + j)];
  inst.b_ = Eigen::Map<const Vector>(raw.b.data(), raw.m);
  inst.gamma_ = raw.gamma;
  inst.cone_ = raw.cone;
  inst.model_ = raw.model;
  inst.p_ = raw.p;
  inst.q_ = raw.q;
  return inst;
}

double pnorm(const Vector& x, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::BadExponent, "norm exponent must lie in (0, inf)");
  }
  if (!x.allFinite()) throw Error(ErrorCode::NonFinite, "vector has non-finite entries");
  if (t == 1.0) return x.lpNorm<1>();
  if (t == 2.0) return x.norm();
  // Factor out the largest magnitude to avoid overflow/underflow in |x_i|^t.
  const double scale = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += std::pow(std::abs(v) / scale, t);
  return scale * std::pow(acc, 1.0 / t);
}

bool in_cone(Cone cone, const Vector& x, double tol) {
  if (cone == Cone::Free) return true;
  return x.size() == 0 || x.minCoeff() >= -tol;
}

double objective_value(const ProblemInstance& inst, const Vector& x) {
  if (x.size() != inst.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "point length differs from instance n");
  }
  if (!x.allFinite()) throw Error(ErrorCode::NonFinite, "point has non-finite entries");
  if (x.isZero(0.0)) throw Error(ErrorCode::ZeroPoint, "ratio is undefined at x = 0");
  if (!in_cone(inst.cone(), x, cone_slack(x))) {
    throw Error(ErrorCode::ConeViolation, "point leaves the nonnegative cone");
  }
  const double ratio = pnorm(x, inst.p()) / pnorm(x, inst.q());
  if (inst.model() == ModelKind::Constrained) return ratio;
  return inst.penalty() * ratio + 0.5 * (inst.A() * x - inst.b()).squaredNorm();
}

double feasibility_residual(const ProblemInstance& inst, const Vector& x) {
  if (x.size() != inst.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "point length differs from instance n");
  }
  const double eq = (inst.A() * x - inst.b()).norm();
  if (inst.cone() == Cone::Free) return eq;
  return eq + x.cwiseMin(0.0).norm();
}

SupportStats support_and_stats(const Vector& x, double rel_tol) {
  if (!x.allFinite()) throw Error(ErrorCode::NonFinite, "vector has non-finite entries");
  SupportStats st;
  st.l1 = x.lpNorm<1>();
  st.l2 = x.norm();
  const double inf_norm = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  if (inf_norm == 0.0) return st;
  const double cutoff = rel_tol * inf_norm;
  double lo = inf_norm;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = std::abs(x[i]);
    if (v > cutoff) {
      st.support.push_back(i);
      lo = std::min(lo, v);
    }
  }
  st.dyn_range = inf_norm / lo;
  return st;
}

Vector restrict_to(const Vector& x, const std::vector<Eigen::Index>& support) {
  Vector y(static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) y[static_cast<Eigen::Index>(k)] = x[support[k]];
  return y;
}

Matrix restrict_columns(const Matrix& A, const std::vector<Eigen::Index>& support) {
  Matrix sub(A.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k)
    sub.col(static_cast<Eigen::Index>(k)) = A.col(support[k]);
  return sub;
}

PowerInequalityReport power_inequality_check(const Vector& a, const Vector& b, double p,
                                             double q, bool check_q) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "a and b differ in length");
  if (!a.allFinite() || !b.allFinite()) throw Error(ErrorCode::NonFinite, "non-finite input");
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::BadExponent, "p must lie in (0, 1)");
  if (check_q && !(q > 1.0 && std::isfinite(q))) {
    throw Error(ErrorCode::BadExponent, "q must lie in (1, inf)");
  }

  auto power_sum = [](const Vector& v, double t) {
    double acc = 0.0;
    for (double x : v) acc += std::pow(std::abs(x), t);
    return acc;
  };
  auto near = [](double lhs, double rhs) {
    return std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs));
  };

  PowerInequalityReport rep;
  rep.disjoint = (a.array() * b.array() == 0.0).all();
  const Vector sum = a + b;
  rep.lhs_p = power_sum(sum, p);
  rep.rhs_p = power_sum(a, p) + power_sum(b, p);
  rep.equality_p = near(rep.lhs_p, rep.rhs_p);
  rep.holds_p = rep.lhs_p <= rep.rhs_p || rep.equality_p;

  if (check_q) {
    const bool nonneg = (a.array() >= 0.0).all() && (b.array() >= 0.0).all();
    if (!nonneg) {
      throw Error(ErrorCode::MixedSignQCheck,
                  "the q-direction inequality is only valid for nonnegative inputs");
    }
    rep.lhs_q = power_sum(sum, q);
    rep.rhs_q = power_sum(a, q) + power_sum(b, q);
    rep.equality_q = near(*rep.lhs_q, *rep.rhs_q);
    rep.holds_q = *rep.lhs_q >= *rep.rhs_q || *rep.equality_q;
  }
  return rep;
}

}  // namespace l1l2
