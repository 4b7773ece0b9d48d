#pragma once

#include <optional>
#include <string>
#include <vector>

#include "l1l2/model.hpp"
#include "l1l2/stationarity.hpp"

namespace l1l2 {

inline constexpr double kDefaultRankCutoff = 1e-10;

struct SpectralSummary {
  double sigma = 0.0;  // smallest eigenvalue of A^T A above rank_cutoff * lambda_max
  std::optional<double> sigma_support;  // smallest eigenvalue of A_L^T A_L
  double rank_cutoff = kDefaultRankCutoff;
  Vector eigenvalues;  // all eigenvalues of A^T A, ascending
};

SpectralSummary sigma_min_nonzero(const Matrix& A, double rank_cutoff = kDefaultRankCutoff);

/// Smallest eigenvalue of A_L^T A_L; throws RankDeficientSupport when it does
/// not exceed rank_cutoff times the largest one.
double sigma_min_support(const Matrix& A, const std::vector<Eigen::Index>& support,
                         double rank_cutoff = kDefaultRankCutoff);

/// Balls containing local minimizers. The uniform radii use sigma of the full
/// A^T A; the support radii use sigma_min(A_L^T A_L) and do not rely on the
/// relaxation sigma_min(A_L^T A_L) >= sigma, which fails in general.
struct L2Radii {
  double sigma = 0.0;
  std::optional<double> sigma_support;
  double rank_cutoff = kDefaultRankCutoff;

  double constrained_uniform = 0.0;  // ||b|| / sqrt(sigma)
  std::optional<double> unconstrained_uniform_i;  // root with gamma sqrt(n)
  std::optional<double> unconstrained_uniform_i_sqrt_s;  // same with sqrt(s)
  std::optional<double> unconstrained_uniform_ii;  // ||b|| / sqrt(sigma)
  std::optional<double> support_radius_i;  // positive root of r^2 - c1 r - c0 = 0
  std::optional<double> support_radius_ii;  // ||b|| / sqrt(sigma_support)
};

L2Radii l2_ball_radii(const ProblemInstance& inst,
                      const std::optional<std::vector<Eigen::Index>>& support = std::nullopt,
                      double rank_cutoff = kDefaultRankCutoff);

enum class EntryCase { LowerBounded, Dichotomy, Inconclusive };

std::string_view to_string(EntryCase c);

struct EntryBound {
  Eigen::Index index = 0;  // 0-based
  double value = 0.0;  // |x_i|
  double delta = 0.0;  // ||A e_i||^2
  double delta_tilde = 0.0;  // delta / gamma
  double Delta = 0.0;  // discriminant, clamped to 0 on (-1e-12, 0)
  std::optional<double> kappa1;  // empty when Delta < 0
  std::optional<double> kappa2;
  EntryCase entry_case = EntryCase::Inconclusive;
};

struct EntryBoundReport {
  std::vector<Eigen::Index> support;
  double l1 = 0.0;
  double l2 = 0.0;
  double gamma = 0.0;
  std::vector<EntryBound> entries;
  L2Radii radii;
};

/// Magnitude bounds for the nonzero entries of a candidate local minimizer of
/// the unconstrained model. For i in the support, with a = ||x||_1, r = ||x||_2:
///   Delta_i = 4/r^6 + 12 a^2/r^8 - 12 a dt_i / r^5
///   kappa_{1,2;i} = (2/r^3 -/+ sqrt(Delta_i)) / (6a/r^5)
/// LowerBounded when a/r^3 >= dt_i, Dichotomy when
/// a/r^3 < dt_i < a/r^3 + 1/(3ar), Inconclusive otherwise.
EntryBoundReport entry_bound_report(const Vector& x, const ProblemInstance& inst,
                                    double rel_tol = kDefaultSupportTol);

/// Residual of the quadratic whose roots are kappa_{1,2}:
///   (3a/r^5) t^2 - (2/r^3) t + dt - a/r^3.
double entry_quadratic(double t, double a, double r, double delta_tilde);

struct RadiusCheck {
  std::string name;
  double radius = 0.0;
  double norm = 0.0;
  bool within = true;
  bool support_level = false;
};

struct Violation {
  std::string kind;
  std::optional<Eigen::Index> index;
  double magnitude = 0.0;  // how far past the bound
};

struct AuditRecord {
  double norm = 0.0;
  MinimizerCertificate certificate;
  EntryBoundReport entries;
  std::vector<RadiusCheck> radius_checks;
  bool support_radii_ok = true;
  bool uniform_radii_ok = true;
  bool entries_ok = true;
  /// A uniform radius is exceeded while every support-level radius holds.
  bool known_discrepancy = false;
  std::vector<Violation> violations;
  std::vector<Violation> discrepancies;

  bool passed() const { return violations.empty(); }
};

inline constexpr double kAuditTol = 1e-8;

/// Checks a certified local minimizer against every radius and entry bound.
/// Throws UncertifiedPoint unless certificate.verdict == LocalMinimizer.
AuditRecord audit_point(const Vector& x, const ProblemInstance& inst,
                        const MinimizerCertificate& certificate, double tol = kAuditTol);

}  // namespace l1l2
