#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "l1l2/error.hpp"

namespace l1l2 {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Cone { Free, NonNegative };
enum class ModelKind { Constrained, Unconstrained };

/// Default relative cutoff below which an entry is treated as off-support.
inline constexpr double kDefaultSupportTol = 1e-8;

/// Unvalidated instance data, laid out as in the JSON schema (A row-major).
struct InstanceDescription {
  long long m = 0;
  long long n = 0;
  std::vector<double> A;
  std::vector<double> b;
  std::optional<double> gamma;
  Cone cone = Cone::Free;
  ModelKind model = ModelKind::Constrained;
  double p = 1.0;
  double q = 2.0;
};

/// A validated L_p/L_q ratio problem:
///   Constrained:   min ||x||_p / ||x||_q          s.t. Ax = b, x in cone
///   Unconstrained: min gamma ||x||_p / ||x||_q + 1/2 ||Ax - b||^2, x in cone
/// Immutable once built by validate_instance().
class ProblemInstance {
 public:
  Eigen::Index rows() const { return A_.rows(); }
  Eigen::Index cols() const { return A_.cols(); }
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  /// Present iff model() == Unconstrained.
  std::optional<double> gamma() const { return gamma_; }
  Cone cone() const { return cone_; }
  ModelKind model() const { return model_; }
  double p() const { return p_; }
  double q() const { return q_; }

  /// gamma() for an unconstrained instance; throws WrongModel otherwise.
  double penalty() const;
  bool is_l1_over_l2() const { return p_ == 1.0 && q_ == 2.0; }

  InstanceDescription describe() const;

 private:
  friend ProblemInstance validate_instance(const InstanceDescription& raw);
  ProblemInstance() = default;

  Matrix A_;
  Vector b_;
  std::optional<double> gamma_;
  Cone cone_ = Cone::Free;
  ModelKind model_ = ModelKind::Constrained;
  double p_ = 1.0;
  double q_ = 2.0;
};

ProblemInstance validate_instance(const InstanceDescription& raw);

/// (sum_i |x_i|^t)^(1/t) for t in (0, inf).
double pnorm(const Vector& x, double t);

double objective_value(const ProblemInstance& inst, const Vector& x);

/// ||Ax - b|| plus, for the nonnegative cone, the norm of the negative part of x.
double feasibility_residual(const ProblemInstance& inst, const Vector& x);

bool in_cone(Cone cone, const Vector& x, double tol = 0.0);

struct SupportStats {
  std::vector<Eigen::Index> support;  // 0-based, sorted
  double l1 = 0.0;
  double l2 = 0.0;
  std::optional<double> dyn_range;  // empty when the support is empty

  std::size_t size() const { return support.size(); }
  bool empty() const { return support.empty(); }
};

/// Support is {i : |x_i| > rel_tol * ||x||_inf}.
SupportStats support_and_stats(const Vector& x, double rel_tol = kDefaultSupportTol);

Vector restrict_to(const Vector& x, const std::vector<Eigen::Index>& support);
Matrix restrict_columns(const Matrix& A, const std::vector<Eigen::Index>& support);

struct PowerInequalityReport {
  double lhs_p = 0.0;  // ||a+b||_p^p
  double rhs_p = 0.0;  // ||a||_p^p + ||b||_p^p
  std::optional<double> lhs_q;  // ||a+b||_q^q (nonnegative inputs only)
  std::optional<double> rhs_q;
  bool holds_p = false;
  std::optional<bool> holds_q;
  bool equality_p = false;
  std::optional<bool> equality_q;
  bool disjoint = false;  // a_i * b_i == 0 for every i
};

/// Power-form subadditivity (p in (0,1)) and superadditivity (q > 1) checks.
/// The q direction requires componentwise nonnegative inputs; when
/// `check_q` is set and the inputs have mixed signs, throws MixedSignQCheck.
PowerInequalityReport power_inequality_check(const Vector& a, const Vector& b, double p,
                                             double q, bool check_q = true);

}  // namespace l1l2
