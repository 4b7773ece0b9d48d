#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "l1l2/instance_io.hpp"
#include "l1l2/reduction_types.hpp"
#include "l1l2/solver.hpp"

namespace l1l2 {

/// n^(1/p - 1/q): the smallest ratio ||u||_p/||u||_q over the partition
/// polytope, attained exactly at 0/1 certificates.
double ratio_floor(std::size_t n, double p, double q);

/// Partition: variables u = (x, y) in R^{2n},
///   [ a^T  -a^T ] u = 0
///   [ I     I   ] u = 1.
/// Unconstrained bundles use gamma = 1/4. Throws TooFewWeights (and
/// BadArgument unless spec.kind is Partition).
ReductionBundle encode_partition(const PartitionSpec& spec, ModelKind model, Cone cone,
                                 double p = 1.0, double q = 2.0);

/// 3-partition: u = vec(X), X in R^{n x m} stacked by columns (u[j*n + i] = X_ij),
///   (1_m^T kron I_n) u = 1_n      every item lands in exactly one bin
///   (I_m kron a^T)   u = kappa 1_m   every bin sums to kappa.
ReductionBundle encode_three_partition(const PartitionSpec& spec, ModelKind model, Cone cone,
                                       double p = 1.0, double q = 2.0);

/// Dispatches on spec.kind.
ReductionBundle encode_reduction(const PartitionSpec& spec, ModelKind model, Cone cone,
                                 double p = 1.0, double q = 2.0);

/// 0/1 point of the encoded polytope for a valid witness. Throws
/// InvalidPartition when the bin sums differ (checked exactly).
Vector embed_certificate(const PartitionSpec& spec, const Witness& w);

/// Rounds u to 0/1 and returns the witness if every entry is within tol of
/// its rounding, the pattern has the required shape and the sums balance.
std::optional<Witness> extract_partition(const Vector& u, const PartitionSpec& spec,
                                         double tol = 1e-6);

struct PartitionOracleResult {
  bool exists = false;
  std::optional<Witness> witness;
  long long examined = 0;
};

/// Exhaustive search with exact integer sums. Partition needs n <= 20 and
/// returns the witness whose first group is smallest, then lexicographically
/// first, with item 0 in that group. 3-partition needs m^n <= 1e6.
/// Throws BudgetExceeded beyond the limits.
PartitionOracleResult partition_oracle(const PartitionSpec& spec);

enum class CheckStatus { Pass, Fail, Skip };

std::string_view to_string(CheckStatus s);

struct VerificationCheck {
  std::string name;
  CheckStatus status = CheckStatus::Skip;
  std::string detail;
  bool evidence_only = false;  // statistical, not a proof
};

struct MultistartEvidence {
  int starts = 0;
  std::uint64_t seed = 0;
  int certified_points = 0;
  int collapsed = 0;
  int uncertified = 0;
  std::optional<double> best_value;
};

struct VerificationOptions {
  int starts = 128;
  std::uint64_t seed = 20240607;
  double value_tol = 1e-12;
  double strict_margin = 1e-9;
  double multistart_slack = 1e-6;
};

struct VerificationReport {
  PartitionKind kind = PartitionKind::Partition;
  ModelKind model = ModelKind::Constrained;
  Cone cone = Cone::NonNegative;
  double p = 1.0;
  double q = 2.0;
  bool exists = false;
  std::optional<Witness> witness;
  double expected_value = 0.0;
  double half_ratio_value = 0.0;
  std::optional<double> certificate_value;
  std::optional<double> certificate_half_ratio_value;
  std::optional<double> certificate_residual;
  std::optional<GlobalOracleResult> global;
  std::optional<MultistartEvidence> multistart;
  std::vector<VerificationCheck> checks;

  bool passed() const;
};

/// Encodes the partition problem, decides it with partition_oracle and checks the
/// optimal-value equivalence: exact vertex scans for constrained nonnegative
/// bundles, seeded multistart evidence for unconstrained L1/L2 bundles.
VerificationReport verify_reduction(const PartitionSpec& spec, ModelKind model, Cone cone,
                                    double p = 1.0, double q = 2.0,
                                    const VerificationOptions& opts = {});

/// Instance JSON plus a "reduction" block
///   {kind, weights, m, kappa, expected_value, half_ratio_value}.
Json bundle_to_json(const ReductionBundle& bundle);
ReductionBundle bundle_from_json(const Json& doc);

}  // namespace l1l2
