#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "l1l2/model.hpp"
#include "l1l2/reduction_types.hpp"
#include "l1l2/stationarity.hpp"

namespace l1l2 {

struct SolverOptions {
  int max_iters = 10000;
  double step_init = 1.0;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double stop_residual = 1e-9;
  double support_freeze_tol = 1e-10;
  std::uint64_t seed = 0;

  /// Throws BadArgument unless every field is positive and backtrack < 1.
  void validate() const;
};

struct TraceEntry {
  int iteration = 0;
  double objective = 0.0;
  double residual = 0.0;
  int support_size = 0;
};

struct SupportChange {
  int iteration = 0;
  std::vector<Eigen::Index> dropped;
};

enum class StopReason { Converged, MaxIterations, LineSearchStalled };

std::string_view to_string(StopReason r);

struct SolveTrace {
  int iterations = 0;
  Vector final_point;
  double final_residual = 0.0;
  StopReason stop = StopReason::MaxIterations;
  std::vector<SupportChange> support_changes;
  std::vector<TraceEntry> history;  // objective is nonincreasing
};

struct LocalSolution {
  Vector point;
  double objective = 0.0;
  SolveTrace trace;
  MinimizerCertificate certificate;
};

/// Projected gradient descent with Armijo backtracking on the smooth piece of
/// the unconstrained L1/L2 objective selected by the current sign pattern.
/// A coordinate that would cross zero is truncated to zero and leaves the
/// support for good; supports only shrink within a run. Throws ZeroCollapse
/// when the iterate degenerates to 0 and DivergenceDetected if an accepted
/// step increases the objective.
LocalSolution solve_local(const ProblemInstance& inst, const Vector& x0,
                          const SolverOptions& opts = {},
                          const CertificationTolerances& tol = {});

struct CertifiedPoint {
  Vector point;
  double objective = 0.0;
  MinimizerCertificate certificate;
};

struct MultistartResult {
  std::vector<CertifiedPoint> points;  // unique LocalMinimizer points, best first
  int runs = 0;
  int collapsed = 0;
  int uncertified = 0;
  double start_radius = 0.0;
};

inline constexpr double kDedupTol = 1e-6;

/// Runs solve_local from n_starts seeded random starts. Start k draws from its
/// own generator seeded by splitmix64(seed, k): a Gaussian direction scaled to
/// a random fraction of the uniform L2 radius that contains every local
/// minimizer, then projected onto the cone. Output is canonicalized (objective,
/// then lexicographic) and deduplicated within kDedupTol in L2.
MultistartResult multistart_solve(const ProblemInstance& inst, int n_starts, std::uint64_t seed,
                                  const SolverOptions& opts = {},
                                  const CertificationTolerances& tol = {});

/// splitmix64 mixing of (seed, stream); used for per-start substreams.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

struct GlobalOracleResult {
  double global_value = 0.0;
  Vector argmin;
  std::string method;
  long long vertices_examined = 0;
};

/// Exact global minimum of ||u||_p/||u||_q over the feasible polytope of a
/// constrained, nonnegative reduction bundle. On that polytope ||u||_1 = n is
/// constant and the ratio is quasi-concave, so the minimum sits at a vertex.
/// Partition bundles use a closed-form scan over all basic feasible
/// solutions; 3-partition bundles enumerate bases when C(cols, rank) <= 2e6
/// and otherwise fall back to labeling enumeration, which is exact only when
/// an equitable assignment exists. Throws BudgetExceeded past the limits.
GlobalOracleResult global_oracle_partition_polytope(const ReductionBundle& bundle);

}  // namespace l1l2
