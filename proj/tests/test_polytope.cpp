#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "l1l2/polytope.hpp"
#include "l1l2/reductions.hpp"
#include "l1l2/solver.hpp"
#include "support.hpp"

using namespace l1l2;
using testing::Gen;
using testing::vec;

namespace {

// Gaussian elimination with partial pivoting; nullopt when singular.
std::optional<Vector> solve_square(Matrix B, Vector c) {
  const Eigen::Index k = B.rows();
  for (Eigen::Index col = 0; col < k; ++col) {
    Eigen::Index piv = col;
    for (Eigen::Index r = col + 1; r < k; ++r)
      if (std::abs(B(r, col)) > std::abs(B(piv, col))) piv = r;
    if (std::abs(B(piv, col)) < 1e-10) return std::nullopt;
    B.row(col).swap(B.row(piv));
    std::swap(c[col], c[piv]);
    for (Eigen::Index r = col + 1; r < k; ++r) {
      const double f = B(r, col) / B(col, col);
      B.row(r) -= f * B.row(col);
      c[r] -= f * c[col];
    }
  }
  Vector x(k);
  for (Eigen::Index r = k - 1; r >= 0; --r) {
    double s = c[r];
    for (Eigen::Index j = r + 1; j < k; ++j) s -= B(r, j) * x[j];
    x[r] = s / B(r, r);
  }
  return x;
}

// Partition bundles: rows are [a, -a] and [I, I]. The first row is the only
// one that can be dependent (when it vanishes), so drop nothing and use
// square subsystems over the n+1 rows.
std::vector<Vector> brute_vertices(const Matrix& M, const Vector& c) {
  const Eigen::Index rows = M.rows(), cols = M.cols();
  std::vector<Vector> out;
  std::vector<int> pick(static_cast<std::size_t>(cols), 0);
  std::fill(pick.begin(), pick.begin() + rows, 1);
  std::sort(pick.begin(), pick.end());
  do {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < cols; ++j)
      if (pick[static_cast<std::size_t>(j)]) idx.push_back(j);
    Matrix B(rows, rows);
    for (Eigen::Index j = 0; j < rows; ++j) B.col(j) = M.col(idx[static_cast<std::size_t>(j)]);
    const auto sol = solve_square(B, c);
    if (!sol || sol->minCoeff() < -1e-9) continue;
    Vector u = Vector::Zero(cols);
    for (Eigen::Index j = 0; j < rows; ++j) u[idx[static_cast<std::size_t>(j)]] = std::max(0.0, (*sol)[j]);
    bool seen = false;
    for (const auto& v : out) seen = seen || (v - u).norm() <= 1e-9;
    if (!seen) out.push_back(u);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return out;
}

bool contains(const std::vector<Vector>& set, const Vector& u) {
  return std::any_of(set.begin(), set.end(), [&](const Vector& v) { return (v - u).norm() <= 1e-9; });
}

ReductionBundle bundle(const char* w, double p = 1.0, double q = 2.0) {
  return encode_partition(make_partition_spec(parse_weights(w)), ModelKind::Constrained,
                          Cone::NonNegative, p, q);
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::BadArgument;
}

}  // namespace

TEST_SUITE("polytope") {

TEST_CASE("vertex enumeration matches an independent basis search") {
  for (const char* w : {"1,1", "1,1,3", "1,2,3", "2,1,1,2", "3,1,1,2,2,1", "1,5,2"}) {
    const ReductionBundle b = bundle(w);
    const VertexEnumeration ve = enumerate_vertices(b.instance.A(), b.instance.b(), 1'000'000);
    const std::vector<Vector> ref = brute_vertices(b.instance.A(), b.instance.b());
    CHECK(ve.rank == b.instance.rows());
    REQUIRE(ve.vertices.size() == ref.size());
    for (const auto& v : ref) CHECK(contains(ve.vertices, v));

    double best = INFINITY;
    for (const auto& v : ref) best = std::min(best, objective_value(b.instance, v));
    CHECK(global_oracle_partition_polytope(b).global_value == doctest::Approx(best).epsilon(1e-13));
  }
}

TEST_CASE("vertex scan agrees with enumeration for other exponents") {
  for (const auto& [p, q] : {std::pair{0.5, 2.0}, std::pair{1.0, 3.0}, std::pair{0.3, 1.5}}) {
    for (const char* w : {"1,1,3", "2,3,4", "3,1,1,2,2,1"}) {
      const ReductionBundle b = bundle(w, p, q);
      const VertexEnumeration ve = enumerate_vertices(b.instance.A(), b.instance.b(), 1'000'000);
      double best = INFINITY;
      for (const auto& v : ve.vertices) best = std::min(best, objective_value(b.instance, v));
      CHECK(global_oracle_partition_polytope(b).global_value == doctest::Approx(best).epsilon(1e-13));
    }
  }
}

TEST_CASE("random feasible points never beat the vertex minimum") {
  Gen g(2101);
  for (const char* w : {"1,1,3", "1,2,3", "3,1,1,2,2,1"}) {
    const ReductionBundle b = bundle(w);
    const auto verts = enumerate_vertices(b.instance.A(), b.instance.b(), 1'000'000).vertices;
    const double global = global_oracle_partition_polytope(b).global_value;
    for (int k = 0; k < 2000; ++k) {
      Vector u = Vector::Zero(b.instance.cols());
      double total = 0;
      for (const auto& v : verts) {
        const double c = std::pow(g.uniform(0, 1), 4.0);
        u += c * v;
        total += c;
      }
      u /= total;
      REQUIRE(feasibility_residual(b.instance, u) <= 1e-12);
      REQUIRE(objective_value(b.instance, u) >= global - 1e-12);
    }
  }
}

TEST_CASE("3-partition basis enumeration attains the ratio floor") {
  const PartitionSpec spec =
      make_three_partition_spec(parse_weights("25,26,39,30,33,27"), 2, Rational(90));
  const ReductionBundle b =
      encode_three_partition(spec, ModelKind::Constrained, Cone::NonNegative);
  CHECK(basis_count(b.instance.A()) == 792);
  const GlobalOracleResult r = global_oracle_partition_polytope(b);
  CHECK(r.method == "basis_enumeration");
  CHECK(r.global_value == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
  CHECK(extract_partition(r.argmin, spec).has_value());
}

TEST_CASE("3-partition labeling fallback") {
  PartitionSpec spec =
      make_three_partition_spec(parse_weights("3,3,4,3,3,4,3,3,4"), 3, Rational(10));
  ReductionBundle b = encode_three_partition(spec, ModelKind::Constrained, Cone::NonNegative);
  CHECK(basis_count(b.instance.A()) > 2'000'000);
  const GlobalOracleResult r = global_oracle_partition_polytope(b);
  CHECK(r.method == "labeling_enumeration");
  CHECK(r.global_value == doctest::Approx(3.0).epsilon(1e-15));

  // four 6s cannot share three bins of 10
  spec = make_three_partition_spec(parse_weights("6,6,6,6,2,1,1,1,1"), 3, Rational(10));
  b = encode_three_partition(spec, ModelKind::Constrained, Cone::NonNegative);
  CHECK(code_of([&] { global_oracle_partition_polytope(b); }) == ErrorCode::BudgetExceeded);
}

TEST_CASE("enumeration budgets") {
  const ReductionBundle b = bundle("1,1,3");
  CHECK(basis_count(b.instance.A()) == 15);
  CHECK(code_of([&] { enumerate_vertices(b.instance.A(), b.instance.b(), 10); }) ==
        ErrorCode::BudgetExceeded);
  std::string many = "1";
  for (int i = 0; i < 21; ++i) many += ",1";
  CHECK(code_of([&] { global_oracle_partition_polytope(bundle(many.c_str())); }) ==
        ErrorCode::BudgetExceeded);
}

TEST_CASE("small polytope with a redundant row") {
  Matrix M(3, 3);
  M << 1, 1, 1, 2, 2, 2, 1, 0, 0;
  const VertexEnumeration ve = enumerate_vertices(M, vec({1, 2, 0.25}), 100);
  CHECK(ve.rank == 2);
  CHECK(ve.vertices.size() == 2);
  CHECK(contains(ve.vertices, vec({0.25, 0.75, 0})));
  CHECK(contains(ve.vertices, vec({0.25, 0, 0.75})));
}

}  // TEST_SUITE
