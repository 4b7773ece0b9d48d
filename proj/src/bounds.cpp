#include "l1l2/bounds.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace l1l2 {

std::string_view to_string(EntryCase c) {
  switch (c) {
    case EntryCase::LowerBounded: return "LowerBounded";
    case EntryCase::Dichotomy: return "Dichotomy";
    case EntryCase::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

namespace {

Vector gram_eigenvalues(const Matrix& M) {
  const Matrix gram = M.transpose() * M;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

// Positive root of r^2 - lin * r - con = 0 (lin, con >= 0).
double positive_root(double lin, double con) {
  return 0.5 * (lin + std::sqrt(lin * lin + 4.0 * con));
}

}  // namespace

SpectralSummary sigma_min_nonzero(const Matrix& A, double rank_cutoff) {
  if (A.size() == 0 || A.isZero(0.0)) throw Error(ErrorCode::ZeroMatrix, "A must be nonzero");
  SpectralSummary out;
  out.rank_cutoff = rank_cutoff;
  out.eigenvalues = gram_eigenvalues(A);
  const double cutoff = rank_cutoff * out.eigenvalues.maxCoeff();
  out.sigma = out.eigenvalues.maxCoeff();
  for (double v : out.eigenvalues) {
    if (v > cutoff) {
      out.sigma = v;
      break;
    }
  }
  return out;
}

double sigma_min_support(const Matrix& A, const std::vector<Eigen::Index>& support,
                         double rank_cutoff) {
  if (support.empty()) throw Error(ErrorCode::EmptySupport, "empty support");
  const Vector eig = gram_eigenvalues(restrict_columns(A, support));
  const double lo = eig.minCoeff();
  if (!(lo > rank_cutoff * eig.maxCoeff())) {
    throw Error(ErrorCode::RankDeficientSupport, "A restricted to the support is rank deficient");
  }
  return lo;
}

L2Radii l2_ball_radii(const ProblemInstance& inst,
                      const std::optional<std::vector<Eigen::Index>>& support,
                      double rank_cutoff) {
  const SpectralSummary spec = sigma_min_nonzero(inst.A(), rank_cutoff);
  const double b_norm = inst.b().norm();
  const double atb = (inst.A().transpose() * inst.b()).norm();

  L2Radii out;
  out.sigma = spec.sigma;
  out.rank_cutoff = rank_cutoff;
  out.constrained_uniform = b_norm / std::sqrt(spec.sigma);

  const bool unconstrained = inst.model() == ModelKind::Unconstrained;
  const double gamma = unconstrained ? inst.penalty() : 0.0;
  if (unconstrained) {
    const double n = static_cast<double>(inst.cols());
    out.unconstrained_uniform_i = positive_root(atb / spec.sigma, gamma * std::sqrt(n) / spec.sigma);
    out.unconstrained_uniform_ii = b_norm / std::sqrt(spec.sigma);
  }

  if (support) {
    const double sig = sigma_min_support(inst.A(), *support, rank_cutoff);
    out.sigma_support = sig;
    out.support_radius_ii = b_norm / std::sqrt(sig);
    if (unconstrained) {
      const double s = static_cast<double>(support->size());
      const double atb_sub = (restrict_columns(inst.A(), *support).transpose() * inst.b()).norm();
      out.support_radius_i = positive_root(atb_sub / sig, gamma * std::sqrt(s) / sig);
      out.unconstrained_uniform_i_sqrt_s =
          positive_root(atb / spec.sigma, gamma * std::sqrt(s) / spec.sigma);
    }
  }
  return out;
}

double entry_quadratic(double t, double a, double r, double delta_tilde) {
  const double r3 = r * r * r;
  const double r5 = r3 * r * r;
  return (3.0 * a / r5) * t * t - (2.0 / r3) * t + delta_tilde - a / r3;
}

EntryBoundReport entry_bound_report(const Vector& x, const ProblemInstance& inst,
                                    double rel_tol) {
  if (inst.model() != ModelKind::Unconstrained) {
    throw Error(ErrorCode::WrongModel, "entry bounds apply to the unconstrained model");
  }
  if (x.size() != inst.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "point length differs from instance n");
  }
  const double gamma = inst.penalty();
  if (!(gamma > 0.0)) throw Error(ErrorCode::NonPositiveGamma, "gamma must be positive");
  const SupportStats st = support_and_stats(x, rel_tol);
  if (st.empty()) throw Error(ErrorCode::EmptySupport, "entry bounds need a nonzero point");

  EntryBoundReport rep;
  rep.support = st.support;
  rep.gamma = gamma;
  const Vector y = restrict_to(x, st.support);
  const double a = y.lpNorm<1>();
  const double r = y.norm();
  rep.l1 = a;
  rep.l2 = r;

  try {
    rep.radii = l2_ball_radii(inst, st.support);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankDeficientSupport) throw;
    rep.radii = l2_ball_radii(inst);
  }

  const double r3 = r * r * r;
  const double r5 = r3 * r * r;
  const double r6 = r3 * r3;
  const double r8 = r5 * r3;
  const double lower_threshold = a / r3;
  const double upper_threshold = a / r3 + 1.0 / (3.0 * a * r);

  for (auto i : st.support) {
    EntryBound eb;
    eb.index = i;
    eb.value = std::abs(x[i]);
    eb.delta = inst.A().col(i).squaredNorm();
    eb.delta_tilde = eb.delta / gamma;
    eb.Delta = 4.0 / r6 + 12.0 * a * a / r8 - 12.0 * a * eb.delta_tilde / r5;
    if (eb.Delta < 0.0 && eb.Delta > -1e-12) eb.Delta = 0.0;
    if (eb.Delta >= 0.0) {
      const double root = std::sqrt(eb.Delta);
      const double denom = 6.0 * a / r5;
      eb.kappa1 = (2.0 / r3 - root) / denom;
      eb.kappa2 = (2.0 / r3 + root) / denom;
    }
    if (lower_threshold >= eb.delta_tilde) {
      eb.entry_case = EntryCase::LowerBounded;
    } else if (eb.delta_tilde < upper_threshold) {
      eb.entry_case = EntryCase::Dichotomy;
    } else {
      eb.entry_case = EntryCase::Inconclusive;
    }
    rep.entries.push_back(eb);
  }
  return rep;
}

AuditRecord audit_point(const Vector& x, const ProblemInstance& inst,
                        const MinimizerCertificate& certificate, double tol) {
  if (certificate.verdict != Verdict::LocalMinimizer) {
    throw Error(ErrorCode::UncertifiedPoint, "audit requires a certified local minimizer");
  }
  AuditRecord rec;
  rec.certificate = certificate;
  rec.entries = entry_bound_report(x, inst, certificate.tolerances.support_rel);
  rec.norm = restrict_to(x, rec.entries.support).norm();
  const L2Radii& radii = rec.entries.radii;

  auto check = [&](const std::string& name, const std::optional<double>& radius,
                   bool support_level) {
    if (!radius) return;
    RadiusCheck rc;
    rc.name = name;
    rc.radius = *radius;
    rc.norm = rec.norm;
    rc.support_level = support_level;
    rc.within = rec.norm <= *radius + tol * std::max(1.0, *radius);
    rec.radius_checks.push_back(rc);
  };
  check("support_radius_i", radii.support_radius_i, true);
  check("support_radius_ii", radii.support_radius_ii, true);
  check("unconstrained_uniform_i", radii.unconstrained_uniform_i, false);
  check("unconstrained_uniform_i_sqrt_s", radii.unconstrained_uniform_i_sqrt_s, false);
  check("unconstrained_uniform_ii", radii.unconstrained_uniform_ii, false);

  if (!radii.sigma_support) {
    rec.support_radii_ok = false;
    rec.violations.push_back({"rank_deficient_support", std::nullopt, 0.0});
  }
  for (const auto& rc : rec.radius_checks) {
    if (rc.within) continue;
    (rc.support_level ? rec.support_radii_ok : rec.uniform_radii_ok) = false;
  }
  for (const auto& rc : rec.radius_checks) {
    if (rc.within) continue;
    Violation v{rc.name, std::nullopt, rc.norm - rc.radius};
    if (!rc.support_level && rec.support_radii_ok) {
      rec.discrepancies.push_back(v);
    } else {
      rec.violations.push_back(v);
    }
  }
  rec.known_discrepancy = !rec.uniform_radii_ok && rec.support_radii_ok;

  const double a = rec.entries.l1;
  const double r = rec.entries.l2;
  const double upper_threshold = a / (r * r * r) + 1.0 / (3.0 * a * r);
  for (const auto& eb : rec.entries.entries) {
    if (eb.delta_tilde < upper_threshold && !(eb.Delta > 0.0)) {
      rec.entries_ok = false;
      rec.violations.push_back({"discriminant_not_positive", eb.index, -eb.Delta});
    }
    if (eb.entry_case == EntryCase::LowerBounded) {
      if (eb.value < *eb.kappa2 - tol) {
        rec.entries_ok = false;
        rec.violations.push_back({"entry_below_lower_bound", eb.index, *eb.kappa2 - eb.value});
      }
    } else if (eb.entry_case == EntryCase::Dichotomy && eb.kappa1) {
      const bool low = eb.value <= *eb.kappa1 + tol;
      const bool high = eb.value >= *eb.kappa2 - tol;
      if (!low && !high) {
        rec.entries_ok = false;
        rec.violations.push_back({"entry_in_forbidden_gap", eb.index,
                                  std::min(eb.value - *eb.kappa1, *eb.kappa2 - eb.value)});
      }
    }
  }
  return rec;
}

}  // namespace l1l2
