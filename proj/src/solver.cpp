#include "l1l2/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "l1l2/bounds.hpp"
#include "l1l2/polytope.hpp"
#include "l1l2/ratio_calculus.hpp"

namespace l1l2 {

void SolverOptions::validate() const {
  if (max_iters <= 0 || !(step_init > 0.0) || !(armijo_c > 0.0) || !(backtrack > 0.0) ||
      !(backtrack < 1.0) || !(stop_residual > 0.0) || !(support_freeze_tol > 0.0)) {
    throw Error(ErrorCode::BadArgument,
                "solver options must be positive with backtrack in (0, 1)");
  }
  if (!std::isfinite(step_init) || !std::isfinite(stop_residual)) {
    throw Error(ErrorCode::NonFinite, "solver options must be finite");
  }
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "Converged";
    case StopReason::MaxIterations: return "MaxIterations";
    case StopReason::LineSearchStalled: return "LineSearchStalled";
  }
  return "Unknown";
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

constexpr double kMinStep = 1e-12;
constexpr double kMaxStep = 1e12;
constexpr int kMaxBacktracks = 80;

double restricted_value(const Vector& y, const Matrix& A_sub, const Vector& b, double gamma) {
  return gamma * y.lpNorm<1>() / y.norm() + 0.5 * (A_sub * y - b).squaredNorm();
}

// Zero every coordinate of z that left the sign pattern of y or fell below the
// freeze threshold. Returns true if anything was zeroed.
bool truncate(Vector& z, const Vector& y, double freeze, Cone cone) {
  const double cut = freeze * z.cwiseAbs().maxCoeff();
  bool any = false;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const bool crossed = (z[i] > 0.0) != (y[i] > 0.0) || z[i] == 0.0;
    const bool negative = cone == Cone::NonNegative && z[i] < 0.0;
    if (crossed || negative || std::abs(z[i]) <= cut) {
      z[i] = 0.0;
      any = true;
    }
  }
  return any;
}

}  // namespace

LocalSolution solve_local(const ProblemInstance& inst, const Vector& x0, const SolverOptions& opts,
                          const CertificationTolerances& tol) {
  opts.validate();
  if (inst.model() != ModelKind::Unconstrained) {
    throw Error(ErrorCode::WrongModel, "solve_local applies to the unconstrained model");
  }
  if (!inst.is_l1_over_l2()) {
    throw Error(ErrorCode::Unsupported, "solve_local is implemented for p = 1, q = 2 only");
  }
  if (x0.size() != inst.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "start point length differs from instance n");
  }
  if (!x0.allFinite()) throw Error(ErrorCode::NonFinite, "start point must be finite");
  if (x0.isZero(0.0)) throw Error(ErrorCode::ZeroPoint, "start point must be nonzero");
  if (!in_cone(inst.cone(), x0)) {
    throw Error(ErrorCode::ConeViolation, "start point leaves the nonnegative cone");
  }

  const double gamma = inst.penalty();
  const Vector& b = inst.b();
  const double x0_norm = x0.norm();

  std::vector<Eigen::Index> support;
  {
    const double cut = opts.support_freeze_tol * x0.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < x0.size(); ++i)
      if (std::abs(x0[i]) > cut) support.push_back(i);
  }
  Vector y = restrict_to(x0, support);
  Matrix A_sub = restrict_columns(inst.A(), support);

  SolveTrace trace;
  double f = restricted_value(y, A_sub, b, gamma);
  Vector g = restricted_l1l2_gradient(y, A_sub, b, gamma);
  Vector y_prev, g_prev;
  bool have_prev = false;

  int it = 0;
  for (;; ++it) {
    const double res = g.norm();
    trace.history.push_back({it, f, res, static_cast<int>(support.size())});
    trace.final_residual = res;
    if (res <= opts.stop_residual) {
      trace.stop = StopReason::Converged;
      break;
    }
    if (it >= opts.max_iters) {
      trace.stop = StopReason::MaxIterations;
      break;
    }

    double t = opts.step_init;
    if (have_prev) {
      const Vector s = y - y_prev;
      const Vector dg = g - g_prev;
      const double sy = s.dot(dg);
      if (sy > 0.0) t = s.squaredNorm() / sy;
    }
    t = std::clamp(t, kMinStep, kMaxStep);

    bool accepted = false;
    bool dropped = false;
    Vector z;
    double fz = 0.0;
    for (int k = 0; k < kMaxBacktracks && t >= kMinStep; ++k, t *= opts.backtrack) {
      z = y - t * g;
      dropped = truncate(z, y, opts.support_freeze_tol, inst.cone());
      if (z.isZero(0.0)) continue;
      fz = restricted_value(z, A_sub, b, gamma);
      if (!std::isfinite(fz)) continue;
      if (fz <= f + opts.armijo_c * g.dot(z - y)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      trace.stop = StopReason::LineSearchStalled;
      break;
    }
    if (fz > f + 1e-12 * std::max(1.0, std::abs(f))) {
      throw Error(ErrorCode::DivergenceDetected, "accepted step increased the objective");
    }

    if (dropped) {
      SupportChange ch;
      ch.iteration = it + 1;
      std::vector<Eigen::Index> keep_local;
      std::vector<Eigen::Index> kept;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (z[i] == 0.0) {
          ch.dropped.push_back(support[static_cast<std::size_t>(i)]);
        } else {
          keep_local.push_back(i);
          kept.push_back(support[static_cast<std::size_t>(i)]);
        }
      }
      support = std::move(kept);
      y = restrict_to(z, keep_local);
      A_sub = restrict_columns(inst.A(), support);
      trace.support_changes.push_back(std::move(ch));
      have_prev = false;
    } else {
      y_prev = y;
      g_prev = g;
      have_prev = true;
      y = z;
    }
    if (y.norm() < 1e-10 * x0_norm) {
      throw Error(ErrorCode::ZeroCollapse, "iterate collapsed to zero");
    }
    f = restricted_value(y, A_sub, b, gamma);
    g = restricted_l1l2_gradient(y, A_sub, b, gamma);
  }

  LocalSolution out;
  out.point = Vector::Zero(inst.cols());
  for (std::size_t k = 0; k < support.size(); ++k) out.point[support[k]] = y[static_cast<Eigen::Index>(k)];
  trace.iterations = it;
  trace.final_point = out.point;
  out.objective = objective_value(inst, out.point);
  out.trace = std::move(trace);
  out.certificate = certify_local_minimizer(inst, out.point, tol);
  return out;
}

namespace {

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

MultistartResult multistart_solve(const ProblemInstance& inst, int n_starts, std::uint64_t seed,
                                  const SolverOptions& opts, const CertificationTolerances& tol) {
  if (n_starts < 1) throw Error(ErrorCode::BadArgument, "n_starts must be at least 1");
  if (inst.model() != ModelKind::Unconstrained) {
    throw Error(ErrorCode::WrongModel, "multistart applies to the unconstrained model");
  }
  MultistartResult res;
  res.start_radius = *l2_ball_radii(inst).unconstrained_uniform_i;
  const Eigen::Index n = inst.cols();

  std::vector<CertifiedPoint> found;
  for (int k = 0; k < n_starts; ++k) {
    std::mt19937_64 rng(derive_stream_seed(seed, static_cast<std::uint64_t>(k)));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> frac(0.1, 1.0);
    Vector x0(n);
    do {
      for (Eigen::Index i = 0; i < n; ++i) x0[i] = normal(rng);
      if (inst.cone() == Cone::NonNegative) x0 = x0.cwiseMax(0.0);
    } while (x0.isZero(0.0));
    x0 *= res.start_radius * frac(rng) / x0.norm();

    ++res.runs;
    try {
      LocalSolution sol = solve_local(inst, x0, opts, tol);
      if (sol.certificate.verdict == Verdict::LocalMinimizer) {
        found.push_back({sol.point, sol.objective, sol.certificate});
      } else {
        ++res.uncertified;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroCollapse) throw;
      ++res.collapsed;
    }
  }

  std::sort(found.begin(), found.end(), [](const CertifiedPoint& a, const CertifiedPoint& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    return lex_less(a.point, b.point);
  });
  for (auto& c : found) {
    bool dup = false;
    for (const auto& kept : res.points) {
      if ((kept.point - c.point).norm() <= kDedupTol) {
        dup = true;
        break;
      }
    }
    if (!dup) res.points.push_back(std::move(c));
  }
  return res;
}

namespace {

GlobalOracleResult partition_vertex_scan(const ReductionBundle& bundle) {
  const IntegerWeights iw = integer_weights(bundle.spec);
  const int n = static_cast<int>(iw.weights.size());
  if (n > 20) throw Error(ErrorCode::BudgetExceeded, "partition vertex scan needs n <= 20");
  const double p = bundle.instance.p();
  const double q = bundle.instance.q();
  const double rest = static_cast<double>(n - 1);

  GlobalOracleResult out;
  out.method = "partition_vertex_scan";
  out.global_value = std::numeric_limits<double>::infinity();
  std::uint64_t best_mask = 0;
  int best_k = -1;
  double best_t = 0.0;

  const std::uint64_t patterns = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    std::int64_t total = 0;
    for (int i = 0; i < n; ++i) total += ((mask >> i) & 1U) ? iw.weights[i] : -iw.weights[i];
    for (int k = 0; k < n; ++k) {
      // the free pair carries no pattern bit; visit each (k, rest) once
      if ((mask >> k) & 1U) continue;
      const std::int64_t d = total + iw.weights[k];  // sum over i != k
      const std::int64_t ak = iw.weights[k];
      if (d > ak || d < -ak) continue;
      ++out.vertices_examined;
      const double t = static_cast<double>(ak - d) / static_cast<double>(2 * ak);
      const double num =
          std::pow(rest + std::pow(t, p) + std::pow(1.0 - t, p), 1.0 / p);
      const double den =
          std::pow(rest + std::pow(t, q) + std::pow(1.0 - t, q), 1.0 / q);
      const double v = num / den;
      if (v < out.global_value) {
        out.global_value = v;
        best_mask = mask;
        best_k = k;
        best_t = t;
      }
    }
  }
  if (best_k < 0) throw Error(ErrorCode::InvalidPartition, "feasible set is empty");

  Vector u(2 * n);
  for (int i = 0; i < n; ++i) {
    const double xi = i == best_k ? best_t : static_cast<double>((best_mask >> i) & 1U);
    u[i] = xi;
    u[n + i] = 1.0 - xi;
  }
  out.argmin = u;
  out.global_value = objective_value(bundle.instance, u);
  return out;
}

constexpr long long kBasisBudget = 2'000'000;
constexpr long long kLabelingBudget = 1'000'000;

GlobalOracleResult three_partition_scan(const ReductionBundle& bundle) {
  const ProblemInstance& inst = bundle.instance;
  GlobalOracleResult out;
  if (basis_count(inst.A()) <= kBasisBudget) {
    const VertexEnumeration ve = enumerate_vertices(inst.A(), inst.b(), kBasisBudget);
    if (ve.vertices.empty()) throw Error(ErrorCode::InvalidPartition, "feasible set is empty");
    out.method = "basis_enumeration";
    out.vertices_examined = static_cast<long long>(ve.vertices.size());
    out.global_value = std::numeric_limits<double>::infinity();
    for (const auto& v : ve.vertices) {
      const double val = objective_value(inst, v);
      if (val < out.global_value || (val == out.global_value && lex_less(v, out.argmin))) {
        out.global_value = val;
        out.argmin = v;
      }
    }
    return out;
  }

  // Too many bases: an equitable labeling attains the ratio floor, so finding
  // one settles the minimum; failing to find one settles nothing.
  const int m = bundle.spec.bins;
  const int n = static_cast<int>(bundle.spec.size());
  double count = std::pow(static_cast<double>(m), n);
  if (count > static_cast<double>(kLabelingBudget)) {
    throw Error(ErrorCode::BudgetExceeded, "3-partition oracle exceeds both enumeration budgets");
  }
  const IntegerWeights iw = integer_weights(bundle.spec);
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> load(static_cast<std::size_t>(m), 0);
  long long visited = 0;

  auto dfs = [&](auto&& self, int i, int used) -> bool {
    ++visited;
    if (i == n) return true;
    for (int j = 0; j < m && j <= used; ++j) {
      if (load[j] + iw.weights[i] > iw.kappa) continue;
      load[j] += iw.weights[i];
      label[i] = j;
      if (self(self, i + 1, std::max(used, j + 1))) return true;
      load[j] -= iw.weights[i];
    }
    return false;
  };
  if (!dfs(dfs, 0, 0)) {
    throw Error(ErrorCode::BudgetExceeded,
                "basis enumeration over budget and no equitable assignment exists");
  }
  Vector u = Vector::Zero(static_cast<Eigen::Index>(n) * m);
  for (int i = 0; i < n; ++i) u[static_cast<Eigen::Index>(label[i]) * n + i] = 1.0;
  out.method = "labeling_enumeration";
  out.vertices_examined = visited;
  out.argmin = u;
  out.global_value = objective_value(inst, u);
  return out;
}

}  // namespace

GlobalOracleResult global_oracle_partition_polytope(const ReductionBundle& bundle) {
  const ProblemInstance& inst = bundle.instance;
  if (inst.model() != ModelKind::Constrained || inst.cone() != Cone::NonNegative) {
    throw Error(ErrorCode::Unsupported,
                "the vertex oracle needs a constrained bundle over the nonnegative cone");
  }
  return bundle.spec.kind == PartitionKind::Partition ? partition_vertex_scan(bundle)
                                                      : three_partition_scan(bundle);
}

}  // namespace l1l2
