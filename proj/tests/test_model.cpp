#include <cmath>

#include "doctest.h"
#include "l1l2/instance_io.hpp"
#include "l1l2/model.hpp"
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

InstanceDescription ex1_desc() {
  InstanceDescription d;
  d.m = 1;
  d.n = 2;
  d.A = {1, 1};
  d.b = {1};
  d.gamma = 1.0;
  d.model = ModelKind::Unconstrained;
  return d;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("validate_instance accepts the two-column example") {
  const ProblemInstance inst = validate_instance(ex1_desc());
  CHECK(inst.rows() == 1);
  CHECK(inst.cols() == 2);
  CHECK(inst.penalty() == 1.0);
  CHECK(inst.is_l1_over_l2());
}

TEST_CASE("validate_instance rejections") {
  InstanceDescription d = ex1_desc();
  d.b = {0};
  CHECK(code_of([&] { validate_instance(d); }) == ErrorCode::ZeroObservation);

  d = InstanceDescription{};
  d.m = 2;
  d.n = 2;
  d.A = {1, 0, 0, 1};
  d.b = {0, 0};
  CHECK(code_of([&] { validate_instance(d); }) == ErrorCode::ZeroObservation);

  d = ex1_desc();
  d.b = {1, 2};
  CHECK(code_of([&] { validate_instance(d); }) == ErrorCode::DimensionMismatch);

  d = ex1_desc();
  d.p = 1.5;
  CHECK(code_of([&] { validate_instance(d); }) == ErrorCode::BadExponent);
  d.p = 1.0;
  d.q = 1.0;
  CHECK(code_of([&] { validate_instance(d); }) == ErrorCode::BadExponent);

  d = ex1_desc();
  d.A[0] = std::nan("");
  CHECK(code_of([&] { validate_instance(d); }) == ErrorCode::NonFinite);

  d = ex1_desc();
  d.gamma.reset();
  CHECK(code_of([&] { validate_instance(d); }) == ErrorCode::BadGamma);
  d.gamma = -1.0;
  CHECK(code_of([&] { validate_instance(d); }) == ErrorCode::BadGamma);
  d.gamma = 1.0;
  d.model = ModelKind::Constrained;
  CHECK(code_of([&] { validate_instance(d); }) == ErrorCode::BadGamma);
}

TEST_CASE("pnorm examples") {
  CHECK(pnorm(vec({3, 4}), 2) == doctest::Approx(5).epsilon(1e-15));
  CHECK(pnorm(vec({1, 1}), 0.5) == doctest::Approx(4).epsilon(1e-15));
  CHECK(pnorm(vec({1, 0, -1}), 1) == 2);
  CHECK(pnorm(Vector::Zero(3), 0.5) == 0.0);
  CHECK(code_of([] { pnorm(vec({1, INFINITY}), 2); }) == ErrorCode::NonFinite);
}

TEST_CASE("objective and feasibility examples") {
  const ProblemInstance inst = testing::two_column();
  CHECK(objective_value(inst, vec({1, 0})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(objective_value(inst, vec({0.5, 0.5})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(feasibility_residual(inst, vec({1, 0})) == 0.0);
  CHECK(feasibility_residual(inst, vec({1, 1})) == doctest::Approx(1.0));
  CHECK(code_of([&] { objective_value(inst, vec({0, 0})); }) == ErrorCode::ZeroPoint);

  const ProblemInstance con = testing::make_instance(Matrix::Identity(6, 6), Vector::Ones(6),
                                                     std::nullopt);
  CHECK(objective_value(con, Vector::Ones(6)) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));

  const ProblemInstance nn = testing::make_instance(Matrix::Identity(2, 2), vec({-1, 2}),
                                                    std::nullopt, Cone::NonNegative);
  CHECK(feasibility_residual(nn, vec({-1, 2})) == doctest::Approx(1.0));
  CHECK(code_of([&] { objective_value(nn, vec({-1, 2})); }) == ErrorCode::ConeViolation);
}

TEST_CASE("support_and_stats examples") {
  SupportStats st = support_and_stats(vec({4, 0, -1}), 1e-8);
  CHECK(st.support == std::vector<Eigen::Index>{0, 2});
  CHECK(st.size() == 2);
  CHECK(*st.dyn_range == 4.0);

  st = support_and_stats(vec({1, 0}));
  CHECK(st.support == std::vector<Eigen::Index>{0});
  CHECK(st.l1 == 1.0);
  CHECK(st.l2 == 1.0);
  CHECK(*st.dyn_range == 1.0);

  st = support_and_stats(vec({2.5, 2.5}));
  CHECK(*st.dyn_range == 1.0);

  st = support_and_stats(Vector::Zero(3));
  CHECK(st.empty());
  CHECK_FALSE(st.dyn_range.has_value());
}

TEST_CASE("power inequality examples") {
  PowerInequalityReport r = power_inequality_check(vec({1, 0}), vec({0, 1}), 0.5, 2.0);
  CHECK(r.lhs_p == doctest::Approx(2));
  CHECK(r.rhs_p == doctest::Approx(2));
  CHECK(r.equality_p);
  CHECK(*r.lhs_q == doctest::Approx(2));
  CHECK(*r.rhs_q == doctest::Approx(2));
  CHECK(*r.equality_q);

  r = power_inequality_check(vec({1, 1}), vec({1, 1}), 0.5, 2.0);
  CHECK(r.lhs_p == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-14));
  CHECK(r.rhs_p == doctest::Approx(4));
  CHECK_FALSE(r.equality_p);
  CHECK(r.holds_p);

  CHECK(code_of([] { power_inequality_check(vec({1, -1}), vec({1, 1}), 0.5, 2.0); }) ==
        ErrorCode::MixedSignQCheck);
  // signed inputs are fine for the p direction alone
  r = power_inequality_check(vec({1, -1}), vec({0, 0}), 0.5, 2.0, false);
  CHECK(r.disjoint);
  CHECK(r.equality_p);
}

TEST_CASE("norm-form inequality fails where the power form holds") {
  const Vector a = vec({1, 0}), b = vec({0, 1});
  // ||a + b||_{1/2} = 4 exceeds ||a||_{1/2} + ||b||_{1/2} = 2
  CHECK(pnorm(a + b, 0.5) > pnorm(a, 0.5) + pnorm(b, 0.5));
  CHECK(power_inequality_check(a, b, 0.5, 2.0).holds_p);
}

TEST_CASE("pnorm homogeneity and ratio scale invariance") {
  Gen g(101);
  for (int k = 0; k < 2000; ++k) {
    const Eigen::Index n = g.integer(1, 12);
    const Vector x = g.gaussian(n);
    const double t = g.uniform(0.3, 4.0);
    const double c = g.uniform(-5, 5);
    const double lhs = pnorm(c * x, t);
    const double rhs = std::abs(c) * pnorm(x, t);
    REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1e-300, rhs));
  }

  const ProblemInstance free_inst =
      testing::make_instance(g.gaussian(3, 8), g.gaussian(3), std::nullopt, Cone::Free, 0.5, 3.0);
  const ProblemInstance nn_inst = testing::make_instance(g.gaussian(3, 8), g.gaussian(3),
                                                         std::nullopt, Cone::NonNegative, 1.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const Vector x = g.gaussian(8);
    const double c = g.uniform(0.01, 100) * (k % 2 ? -1.0 : 1.0);
    const double v = objective_value(free_inst, x);
    REQUIRE(std::abs(objective_value(free_inst, c * x) - v) <= 1e-12 * v);
    const Vector y = x.cwiseAbs();
    const double w = objective_value(nn_inst, y);
    REQUIRE(std::abs(objective_value(nn_inst, std::abs(c) * y) - w) <= 1e-12 * w);
  }
}

TEST_CASE("Cauchy-Schwarz and the ratio range on 10^4 vectors") {
  Gen g(202);
  for (int k = 0; k < 10000; ++k) {
    const Eigen::Index n = g.integer(1, 20);
    Vector x = g.sparse_nonneg(n, 0.3) - g.sparse_nonneg(n, 0.6);
    if (x.isZero(0.0)) x[0] = 1.0;
    const SupportStats st = support_and_stats(x);
    REQUIRE(st.l1 <= std::sqrt(static_cast<double>(st.size())) * st.l2 * (1 + 1e-15));
    REQUIRE(*st.dyn_range >= 1.0);
    const double ratio = st.l1 / st.l2;
    REQUIRE(ratio >= 1.0 - 1e-15);
    REQUIRE(ratio <= std::sqrt(static_cast<double>(n)) * (1 + 1e-15));
  }
}

TEST_CASE("power inequalities on 10^4 nonnegative pairs") {
  Gen g(303);
  int disjoint = 0;
  for (int k = 0; k < 10000; ++k) {
    const Eigen::Index n = g.integer(1, 10);
    Vector a = g.sparse_nonneg(n, 0.4);
    Vector b = g.sparse_nonneg(n, 0.4);
    if (k % 3 == 0) {
      for (Eigen::Index i = 0; i < n; ++i) (g.uniform(0, 1) < 0.5 ? a : b)[i] = 0.0;
    }
    const double p = g.uniform(0.05, 0.95);
    const double q = g.uniform(1.05, 3.0);
    const PowerInequalityReport r = power_inequality_check(a, b, p, q);
    REQUIRE(r.holds_p);
    REQUIRE(*r.holds_q);
    const bool oracle_disjoint = [&] {
      for (Eigen::Index i = 0; i < n; ++i)
        if (a[i] != 0.0 && b[i] != 0.0) return false;
      return true;
    }();
    disjoint += oracle_disjoint;
    REQUIRE(r.disjoint == oracle_disjoint);
    REQUIRE(r.equality_p == oracle_disjoint);
    REQUIRE(*r.equality_q == oracle_disjoint);
  }
  CHECK(disjoint > 1000);
}

TEST_CASE("instance JSON round trip and schema errors") {
  const ProblemInstance inst = testing::two_column(0.8);
  const Json doc = instance_to_json(inst);
  const ProblemInstance back = instance_from_json(Json::parse(doc.dump()));
  CHECK(back.A() == inst.A());
  CHECK(back.b() == inst.b());
  CHECK(*back.gamma() == 0.8);
  CHECK(back.model() == ModelKind::Unconstrained);

  Json extra = doc;
  extra["surprise"] = 1;
  CHECK(code_of([&] { instance_from_json(extra); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_point_csv("1,,2"); }) == ErrorCode::BadArgument);
  CHECK(parse_point_csv(" 0.5, -2e-3 ") == vec({0.5, -2e-3}));
}

}  // TEST_SUITE
