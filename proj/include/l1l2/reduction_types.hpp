#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "l1l2/model.hpp"

namespace l1l2 {

using Rational = boost::rational<std::int64_t>;

/// Parses "25", "-3", "1/2" or a plain decimal such as "0.75".
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);
/// Comma-separated list of rationals.
std::vector<Rational> parse_weights(std::string_view csv);

enum class PartitionKind { Partition, ThreePartition };

std::string_view to_string(PartitionKind kind);
PartitionKind parse_partition_kind(std::string_view text);

/// A partition (two equal-sum halves) or 3-partition (m bins each summing to
/// kappa) problem over positive rational weights.
struct PartitionSpec {
  std::vector<Rational> weights;
  PartitionKind kind = PartitionKind::Partition;
  int bins = 2;  // m; always 2 for Partition
  Rational kappa{0};  // bin target; half the total for Partition
  std::vector<std::string> warnings;

  std::size_t size() const { return weights.size(); }
};

/// Throws TooFewWeights for n < 2, BadArgument for non-positive weights.
PartitionSpec make_partition_spec(std::vector<Rational> weights);
/// Throws ShapeViolation unless n = 3m and sum(weights) = m * kappa. Warns
/// (does not reject) when some weight lies outside (kappa/4, kappa/2).
PartitionSpec make_three_partition_spec(std::vector<Rational> weights, int bins,
                                        Rational kappa);

/// Weights and kappa scaled by a common positive integer so every sum is an
/// exact integer.
struct IntegerWeights {
  std::vector<std::int64_t> weights;
  std::int64_t kappa = 0;
  std::int64_t total = 0;
  std::int64_t scale = 1;
};

IntegerWeights integer_weights(const PartitionSpec& spec);

/// label[i] is the bin of item i. For Partition, bin 0 is S1 and bin 1 is S2.
struct Witness {
  std::vector<int> label;

  std::vector<std::vector<int>> groups(int bins) const;
  bool operator==(const Witness&) const = default;
};

/// True iff every bin sum equals kappa exactly.
bool is_valid_witness(const PartitionSpec& spec, const Witness& w);

/// An encoded reduction instance together with its provenance.
struct ReductionBundle {
  ProblemInstance instance;
  PartitionSpec spec;
  ModelKind model_kind = ModelKind::Constrained;
  /// Optimal value of the library objective iff a partition exists:
  /// n^(1/p - 1/q) (constrained) or n^(1/p - 1/q) / 4 (unconstrained, gamma = 1/4).
  double expected_value = 0.0;
  /// The same optimum in the "1/2 ratio + squared residual" scaling of the
  /// unconstrained reductions (twice the library objective); equals
  /// expected_value for the constrained model.
  double half_ratio_value = 0.0;
  std::optional<Vector> certificate;
};

}  // namespace l1l2
