#include <cmath>
#include <set>

#include "doctest.h"
#include "l1l2/reductions.hpp"
#include "l1l2/solver.hpp"
#include "support.hpp"

using namespace l1l2;
using testing::Gen;
using testing::vec;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::BadArgument;
}

bool identical(const MultistartResult& a, const MultistartResult& b) {
  if (a.points.size() != b.points.size() || a.runs != b.runs || a.collapsed != b.collapsed ||
      a.uncertified != b.uncertified) {
    return false;
  }
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].point != b.points[i].point) return false;
    if (a.points[i].objective != b.points[i].objective) return false;
  }
  return true;
}

ReductionBundle partition_bundle(const char* w, ModelKind model = ModelKind::Constrained) {
  return encode_partition(make_partition_spec(parse_weights(w)), model, Cone::NonNegative);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("local solves on the two-column example") {
  const ProblemInstance inst = testing::two_column();
  LocalSolution s = solve_local(inst, vec({0.9, 0.1}));
  CHECK((s.point - vec({1, 0})).norm() <= 1e-9);
  CHECK(s.certificate.verdict == Verdict::LocalMinimizer);
  CHECK(s.trace.stop == StopReason::Converged);
  REQUIRE_FALSE(s.trace.support_changes.empty());
  CHECK(s.trace.support_changes[0].dropped == std::vector<Eigen::Index>{1});

  s = solve_local(inst, vec({0.1, 0.9}));
  CHECK((s.point - vec({0, 1})).norm() <= 1e-9);
  CHECK(s.certificate.verdict == Verdict::LocalMinimizer);

  s = solve_local(inst, vec({0.5, 0.5}));
  CHECK(s.point == vec({0.5, 0.5}));
  CHECK(s.trace.iterations == 0);
  CHECK(s.certificate.verdict == Verdict::StationaryNotMinimizer);
}

TEST_CASE("multistart finds exactly the two sparse minimizers") {
  const MultistartResult ms = multistart_solve(testing::two_column(), 32, 7);
  REQUIRE(ms.points.size() == 2);
  CHECK(ms.points[0].objective == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ms.runs == 32);
  std::set<int> where;
  for (const auto& p : ms.points) {
    CHECK(p.certificate.verdict == Verdict::LocalMinimizer);
    if ((p.point - vec({1, 0})).norm() <= 1e-6) where.insert(0);
    if ((p.point - vec({0, 1})).norm() <= 1e-6) where.insert(1);
  }
  CHECK(where.size() == 2);
}

TEST_CASE("a dominant penalty yields 1-sparse minimizers") {
  const ProblemInstance inst = testing::make_instance(Matrix::Identity(2, 2), vec({1, 1}), 10.0);
  const MultistartResult ms = multistart_solve(inst, 32, 5);
  REQUIRE_FALSE(ms.points.empty());
  for (const auto& p : ms.points) CHECK(p.certificate.support.size() == 1);
}

TEST_CASE("multistart is deterministic") {
  Gen g(1301);
  const ProblemInstance inst = testing::make_instance(g.gaussian(4, 9), g.gaussian(4), 0.3);
  const MultistartResult a = multistart_solve(inst, 24, 99);
  const MultistartResult b = multistart_solve(inst, 24, 99);
  CHECK(identical(a, b));
  const MultistartResult c = multistart_solve(inst, 24, 100);
  CHECK(c.runs == 24);
}

TEST_CASE("descent, determinism and independent recertification") {
  Gen g(1401);
  for (int k = 0; k < 40; ++k) {
    const Eigen::Index m = g.integer(2, 6), n = g.integer(3, 10);
    const Cone cone = k % 3 == 0 ? Cone::NonNegative : Cone::Free;
    const ProblemInstance inst =
        testing::make_instance(g.gaussian(m, n), g.gaussian(m), g.uniform(0.05, 2), cone);
    Vector x0 = g.gaussian(n);
    if (cone == Cone::NonNegative) x0 = x0.cwiseAbs();
    LocalSolution s;
    try {
      s = solve_local(inst, x0);
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::ZeroCollapse);
      continue;
    }
    const auto& h = s.trace.history;
    for (std::size_t i = 1; i < h.size(); ++i) {
      REQUIRE(h[i].objective <= h[i - 1].objective + 1e-12 * std::max(1.0, std::abs(h[i - 1].objective)));
      REQUIRE(h[i].support_size <= h[i - 1].support_size);
    }
    if (cone == Cone::NonNegative) REQUIRE((s.point.array() >= 0).all());
    const LocalSolution again = solve_local(inst, x0);
    REQUIRE(again.point == s.point);
    REQUIRE(again.trace.iterations == s.trace.iterations);
    const MinimizerCertificate c = certify_local_minimizer(inst, s.point);
    REQUIRE(c.verdict == s.certificate.verdict);
  }
}

TEST_CASE("solver errors") {
  const ProblemInstance inst = testing::two_column();
  CHECK(code_of([&] { solve_local(inst, vec({0, 0})); }) == ErrorCode::ZeroPoint);
  const ProblemInstance con = testing::make_instance(Matrix::Ones(1, 2), vec({1}), std::nullopt);
  CHECK(code_of([&] { solve_local(con, vec({1, 0})); }) == ErrorCode::WrongModel);
  const ProblemInstance nn =
      testing::make_instance(Matrix::Ones(1, 2), vec({1}), 1.0, Cone::NonNegative);
  CHECK(code_of([&] { solve_local(nn, vec({-1, 1})); }) == ErrorCode::ConeViolation);
  SolverOptions bad;
  bad.backtrack = 1.0;
  CHECK(code_of([&] { solve_local(inst, vec({1, 0}), bad); }) == ErrorCode::BadArgument);
  CHECK(code_of([&] { multistart_solve(inst, 0, 1); }) == ErrorCode::BadArgument);

  // the only sign pattern available pulls the iterate onto zero
  const ProblemInstance pull = testing::make_instance(Matrix::Identity(2, 2), vec({1, 0}), 1.0);
  CHECK(code_of([&] { solve_local(pull, vec({-1, 0})); }) == ErrorCode::ZeroCollapse);
}

TEST_CASE("stream seeds are distinct and stable") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(derive_stream_seed(7, k));
  CHECK(seen.size() == 1000);
  CHECK(derive_stream_seed(7, 3) == derive_stream_seed(7, 3));
  CHECK(derive_stream_seed(7, 3) != derive_stream_seed(8, 3));
}

TEST_CASE("vertex oracle on partition bundles") {
  GlobalOracleResult r = global_oracle_partition_polytope(partition_bundle("1,1"));
  CHECK(r.global_value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(((r.argmin - vec({1, 0, 0, 1})).norm() == 0 || (r.argmin - vec({0, 1, 1, 0})).norm() == 0));
  CHECK(r.method == "partition_vertex_scan");

  r = global_oracle_partition_polytope(partition_bundle("1,1,3"));
  CHECK(r.global_value > std::sqrt(3.0) + 1e-9);
  // best vertex: both unit items on one side, the 3 split 1/6 : 5/6
  CHECK(r.global_value == doctest::Approx(9 * std::sqrt(2.0) / 7).epsilon(1e-14));

  r = global_oracle_partition_polytope(partition_bundle("3,1,1,2,2,1"));
  CHECK(r.global_value == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));

  CHECK(code_of([] { global_oracle_partition_polytope(partition_bundle("1,1", ModelKind::Unconstrained)); }) ==
        ErrorCode::Unsupported);
}

TEST_CASE("multistart reaches the certificate value on a partitionable bundle") {
  const ReductionBundle b = partition_bundle("3,1,1,2,2,1", ModelKind::Unconstrained);
  const MultistartResult ms = multistart_solve(b.instance, 64, 2024);
  REQUIRE_FALSE(ms.points.empty());
  CHECK(std::abs(ms.points.front().objective - b.expected_value) <= 1e-6);
}

}  // TEST_SUITE
