#include "l1l2/reductions.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <unsupported/Eigen/KroneckerProduct>

namespace l1l2 {

// ---- rationals ---------------------------------------------------------------

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::BadArgument, "not a rational: '" + std::string(whole) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorCode::BadArgument, "weights overflow 64-bit integer arithmetic");
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorCode::BadArgument, "weights overflow 64-bit integer arithmetic");
  }
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw Error(ErrorCode::BadArgument, "empty rational");
  try {
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
      const std::int64_t den = parse_int(trim(s.substr(slash + 1)), s);
      if (den == 0) throw Error(ErrorCode::BadArgument, "zero denominator in '" + std::string(s) + "'");
      return Rational(parse_int(trim(s.substr(0, slash)), s), den);
    }
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string_view ip = s.substr(0, dot);
      const std::string_view fp = s.substr(dot + 1);
      bool neg = false;
      if (!ip.empty() && (ip.front() == '-' || ip.front() == '+')) {
        neg = ip.front() == '-';
        ip.remove_prefix(1);
      }
      if ((ip.empty() && fp.empty()) || fp.size() > 18) {
        throw Error(ErrorCode::BadArgument, "not a rational: '" + std::string(s) + "'");
      }
      std::int64_t scale = 1;
      for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
      const std::int64_t whole = ip.empty() ? 0 : parse_int(ip, s);
      const std::int64_t frac = fp.empty() ? 0 : parse_int(fp, s);
      if (whole < 0 || frac < 0) throw Error(ErrorCode::BadArgument, "not a rational: '" + std::string(s) + "'");
      const std::int64_t num = checked_add(checked_mul(whole, scale), frac);
      return Rational(neg ? -num : num, scale);
    }
    return Rational(parse_int(s, s));
  } catch (const boost::bad_rational&) {
    throw Error(ErrorCode::BadArgument, "not a rational: '" + std::string(s) + "'");
  }
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::vector<Rational> parse_weights(std::string_view csv) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? csv.size() : comma;
    out.push_back(parse_rational(csv.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view to_string(PartitionKind kind) {
  return kind == PartitionKind::Partition ? "partition" : "3partition";
}

PartitionKind parse_partition_kind(std::string_view text) {
  if (text == "partition") return PartitionKind::Partition;
  if (text == "3partition") return PartitionKind::ThreePartition;
  throw Error(ErrorCode::BadArgument, "kind must be 'partition' or '3partition'");
}

// ---- specs -------------------------------------------------------------------

namespace {

void require_positive(const std::vector<Rational>& w) {
  for (const auto& a : w) {
    if (a <= 0) throw Error(ErrorCode::BadArgument, "weights must be positive");
  }
}

Rational sum_of(const std::vector<Rational>& w) {
  Rational s(0);
  for (const auto& a : w) s += a;
  return s;
}

}  // namespace

PartitionSpec make_partition_spec(std::vector<Rational> weights) {
  if (weights.size() < 2) throw Error(ErrorCode::TooFewWeights, "partition needs at least two weights");
  require_positive(weights);
  PartitionSpec spec;
  spec.kappa = sum_of(weights) / 2;
  spec.weights = std::move(weights);
  spec.kind = PartitionKind::Partition;
  spec.bins = 2;
  return spec;
}

PartitionSpec make_three_partition_spec(std::vector<Rational> weights, int bins, Rational kappa) {
  if (weights.empty()) throw Error(ErrorCode::TooFewWeights, "3-partition needs weights");
  require_positive(weights);
  if (bins < 1 || weights.size() != 3 * static_cast<std::size_t>(bins)) {
    throw Error(ErrorCode::ShapeViolation, "3-partition needs n = 3m weights");
  }
  if (sum_of(weights) != kappa * bins) {
    throw Error(ErrorCode::ShapeViolation, "3-partition needs sum(weights) = m * kappa");
  }
  PartitionSpec spec;
  spec.kind = PartitionKind::ThreePartition;
  spec.bins = bins;
  spec.kappa = kappa;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const Rational& a = weights[i];
    if (!(a > kappa / 4 && a < kappa / 2)) {
      spec.warnings.push_back("weight " + std::to_string(i) + " = " + format_rational(a) +
                              " lies outside (kappa/4, kappa/2)");
    }
  }
  spec.weights = std::move(weights);
  return spec;
}

IntegerWeights integer_weights(const PartitionSpec& spec) {
  std::int64_t scale = spec.kappa.denominator();
  for (const auto& a : spec.weights) {
    scale = checked_mul(scale / std::gcd(scale, a.denominator()), a.denominator());
  }
  IntegerWeights out;
  out.scale = scale;
  for (const auto& a : spec.weights) {
    out.weights.push_back(checked_mul(a.numerator(), scale / a.denominator()));
    out.total = checked_add(out.total, out.weights.back());
  }
  out.kappa = checked_mul(spec.kappa.numerator(), scale / spec.kappa.denominator());
  return out;
}

std::vector<std::vector<int>> Witness::groups(int bins) const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(std::max(bins, 0)));
  for (std::size_t i = 0; i < label.size(); ++i) {
    const int j = label[i];
    if (j >= 0 && j < bins) out[static_cast<std::size_t>(j)].push_back(static_cast<int>(i));
  }
  return out;
}

bool is_valid_witness(const PartitionSpec& spec, const Witness& w) {
  if (w.label.size() != spec.size()) return false;
  std::vector<Rational> load(static_cast<std::size_t>(spec.bins), Rational(0));
  for (std::size_t i = 0; i < w.label.size(); ++i) {
    const int j = w.label[i];
    if (j < 0 || j >= spec.bins) return false;
    load[static_cast<std::size_t>(j)] += spec.weights[i];
  }
  for (const auto& l : load) {
    if (l != spec.kappa) return false;
  }
  return true;
}

// ---- encoders ----------------------------------------------------------------

double ratio_floor(std::size_t n, double p, double q) {
  return std::pow(static_cast<double>(n), 1.0 / p - 1.0 / q);
}

namespace {

Vector weight_vector(const PartitionSpec& spec) {
  Vector a(static_cast<Eigen::Index>(spec.size()));
  for (std::size_t i = 0; i < spec.size(); ++i) {
    a[static_cast<Eigen::Index>(i)] = boost::rational_cast<double>(spec.weights[i]);
  }
  return a;
}

ReductionBundle make_bundle(const Matrix& A, const Vector& b, const PartitionSpec& spec,
                            ModelKind model, Cone cone, double p, double q) {
  InstanceDescription raw;
  raw.m = A.rows();
  raw.n = A.cols();
  raw.A.resize(static_cast<std::size_t>(A.size()));
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      raw.A[static_cast<std::size_t>(i * A.cols() + j)] = A(i, j);
  raw.b.assign(b.data(), b.data() + b.size());
  raw.cone = cone;
  raw.model = model;
  raw.p = p;
  raw.q = q;
  if (model == ModelKind::Unconstrained) raw.gamma = 0.25;

  const double floor = ratio_floor(spec.size(), p, q);
  ReductionBundle out{validate_instance(raw), spec, model, floor, floor, std::nullopt};
  if (model == ModelKind::Unconstrained) {
    out.expected_value = floor / 4.0;
    out.half_ratio_value = floor / 2.0;
  }
  return out;
}

}  // namespace

ReductionBundle encode_partition(const PartitionSpec& spec, ModelKind model, Cone cone, double p,
                                 double q) {
  if (spec.kind != PartitionKind::Partition) {
    throw Error(ErrorCode::BadArgument, "encode_partition needs a partition spec");
  }
  if (spec.size() < 2) throw Error(ErrorCode::TooFewWeights, "partition needs at least two weights");
  const Eigen::Index n = static_cast<Eigen::Index>(spec.size());
  const Vector a = weight_vector(spec);
  Matrix A = Matrix::Zero(n + 1, 2 * n);
  A.block(0, 0, 1, n) = a.transpose();
  A.block(0, n, 1, n) = -a.transpose();
  A.block(1, 0, n, n).setIdentity();
  A.block(1, n, n, n).setIdentity();
  Vector b = Vector::Ones(n + 1);
  b[0] = 0.0;
  return make_bundle(A, b, spec, model, cone, p, q);
}

ReductionBundle encode_three_partition(const PartitionSpec& spec, ModelKind model, Cone cone,
                                       double p, double q) {
  if (spec.kind != PartitionKind::ThreePartition) {
    throw Error(ErrorCode::BadArgument, "encode_three_partition needs a 3-partition spec");
  }
  const Eigen::Index m = spec.bins;
  const Eigen::Index n = static_cast<Eigen::Index>(spec.size());
  if (m < 1 || n != 3 * m) throw Error(ErrorCode::ShapeViolation, "3-partition needs n = 3m weights");
  if (sum_of(spec.weights) != spec.kappa * static_cast<std::int64_t>(m)) {
    throw Error(ErrorCode::ShapeViolation, "3-partition needs sum(weights) = m * kappa");
  }
  const Vector a = weight_vector(spec);
  const Matrix I_n = Matrix::Identity(n, n);
  const Matrix I_m = Matrix::Identity(m, m);
  Matrix A(n + m, n * m);
  A.topRows(n) = Eigen::kroneckerProduct(Matrix::Ones(1, m), I_n);
  A.bottomRows(m) = Eigen::kroneckerProduct(I_m, Matrix(a.transpose()));
  Vector b(n + m);
  b.head(n).setOnes();
  b.tail(m).setConstant(boost::rational_cast<double>(spec.kappa));
  return make_bundle(A, b, spec, model, cone, p, q);
}

ReductionBundle encode_reduction(const PartitionSpec& spec, ModelKind model, Cone cone, double p,
                                 double q) {
  return spec.kind == PartitionKind::Partition ? encode_partition(spec, model, cone, p, q)
                                               : encode_three_partition(spec, model, cone, p, q);
}

// ---- certificates ------------------------------------------------------------

Vector embed_certificate(const PartitionSpec& spec, const Witness& w) {
  if (!is_valid_witness(spec, w)) {
    throw Error(ErrorCode::InvalidPartition, "bin sums differ or labels are out of range");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(spec.size());
  if (spec.kind == PartitionKind::Partition) {
    Vector u = Vector::Zero(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool first = w.label[static_cast<std::size_t>(i)] == 0;
      u[i] = first ? 1.0 : 0.0;
      u[n + i] = first ? 0.0 : 1.0;
    }
    return u;
  }
  Vector u = Vector::Zero(n * spec.bins);
  for (Eigen::Index i = 0; i < n; ++i) u[w.label[static_cast<std::size_t>(i)] * n + i] = 1.0;
  return u;
}

std::optional<Witness> extract_partition(const Vector& u, const PartitionSpec& spec, double tol) {
  const Eigen::Index n = static_cast<Eigen::Index>(spec.size());
  const Eigen::Index m = spec.kind == PartitionKind::Partition ? 2 : spec.bins;
  if (u.size() != n * m) return std::nullopt;
  std::vector<int> bit(static_cast<std::size_t>(u.size()));
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const double r = std::round(u[k]);
    if (!(std::abs(u[k] - r) <= tol) || (r != 0.0 && r != 1.0)) return std::nullopt;
    bit[static_cast<std::size_t>(k)] = static_cast<int>(r);
  }
  Witness w;
  w.label.assign(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    int hits = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (bit[static_cast<std::size_t>(j * n + i)] == 1) {
        ++hits;
        w.label[static_cast<std::size_t>(i)] = static_cast<int>(j);
      }
    }
    if (hits != 1) return std::nullopt;
  }
  if (!is_valid_witness(spec, w)) return std::nullopt;
  return w;
}

// ---- oracle ------------------------------------------------------------------

PartitionOracleResult partition_oracle(const PartitionSpec& spec) {
  const IntegerWeights iw = integer_weights(spec);
  const int n = static_cast<int>(iw.weights.size());
  PartitionOracleResult out;

  if (spec.kind == PartitionKind::Partition) {
    if (n > 20) throw Error(ErrorCode::BudgetExceeded, "partition oracle needs n <= 20");
    if (iw.total % 2 != 0) return out;
    const std::int64_t half = iw.total / 2;
    // group containing item 0, by size then lexicographically
    for (int k = 0; k < n; ++k) {
      std::vector<int> idx(static_cast<std::size_t>(k));
      std::iota(idx.begin(), idx.end(), 1);
      while (true) {
        ++out.examined;
        std::int64_t s = iw.weights[0];
        for (int i : idx) s += iw.weights[static_cast<std::size_t>(i)];
        if (s == half) {
          Witness w;
          w.label.assign(static_cast<std::size_t>(n), 1);
          w.label[0] = 0;
          for (int i : idx) w.label[static_cast<std::size_t>(i)] = 0;
          out.exists = true;
          out.witness = std::move(w);
          return out;
        }
        int j = k - 1;
        while (j >= 0 && idx[static_cast<std::size_t>(j)] == n - k + j) --j;
        if (j < 0) break;
        ++idx[static_cast<std::size_t>(j)];
        for (int t = j + 1; t < k; ++t) idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
      }
    }
    return out;
  }

  const int m = spec.bins;
  if (std::pow(static_cast<double>(m), n) > 1e6) {
    throw Error(ErrorCode::BudgetExceeded, "3-partition oracle needs m^n <= 1e6");
  }
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> load(static_cast<std::size_t>(m), 0);
  auto dfs = [&](auto&& self, int i, int used) -> bool {
    ++out.examined;
    if (i == n) return true;  // every load <= kappa and the total is m * kappa
    for (int j = 0; j < m && j <= used; ++j) {
      const std::int64_t next = load[static_cast<std::size_t>(j)] + iw.weights[static_cast<std::size_t>(i)];
      if (next > iw.kappa) continue;
      load[static_cast<std::size_t>(j)] = next;
      label[static_cast<std::size_t>(i)] = j;
      if (self(self, i + 1, std::max(used, j + 1))) return true;
      load[static_cast<std::size_t>(j)] -= iw.weights[static_cast<std::size_t>(i)];
    }
    return false;
  };
  if (dfs(dfs, 0, 0)) {
    out.exists = true;
    out.witness = Witness{label};
  }
  return out;
}

// ---- verification ------------------------------------------------------------

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skip: return "SKIP";
  }
  return "UNKNOWN";
}

bool VerificationReport::passed() const {
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) return false;
  }
  return true;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

VerificationCheck make_check(std::string name, bool ok, std::string detail,
                             bool evidence = false) {
  return {std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail), evidence};
}

}  // namespace

VerificationReport verify_reduction(const PartitionSpec& spec, ModelKind model, Cone cone,
                                    double p, double q, const VerificationOptions& opts) {
  const ReductionBundle bundle = encode_reduction(spec, model, cone, p, q);
  const ProblemInstance& inst = bundle.instance;

  VerificationReport rep;
  rep.kind = spec.kind;
  rep.model = model;
  rep.cone = cone;
  rep.p = p;
  rep.q = q;
  rep.expected_value = bundle.expected_value;
  rep.half_ratio_value = bundle.half_ratio_value;

  const PartitionOracleResult oracle = partition_oracle(spec);
  rep.exists = oracle.exists;
  rep.witness = oracle.witness;

  if (oracle.exists) {
    const Vector u = embed_certificate(spec, *oracle.witness);
    const double val = objective_value(inst, u);
    const double resid = model == ModelKind::Constrained
                             ? feasibility_residual(inst, u)
                             : (inst.A() * u - inst.b()).norm();
    rep.certificate_value = val;
    rep.certificate_half_ratio_value = model == ModelKind::Unconstrained ? 2.0 * val : val;
    rep.certificate_residual = resid;
    rep.checks.push_back(make_check("certificate_feasible", resid <= opts.value_tol,
                                    "residual " + fmt(resid)));
    rep.checks.push_back(make_check(
        "certificate_value", std::abs(val - bundle.expected_value) <= opts.value_tol,
        "value " + fmt(val) + ", expected " + fmt(bundle.expected_value)));
    const auto back = extract_partition(u, spec);
    rep.checks.push_back(make_check("certificate_round_trip", back && *back == *oracle.witness,
                                    back ? "witness recovered" : "no certificate recovered"));
  }

  if (model == ModelKind::Constrained) {
    if (cone == Cone::NonNegative) {
      const GlobalOracleResult g = global_oracle_partition_polytope(bundle);
      rep.global = g;
      if (oracle.exists) {
        rep.checks.push_back(make_check(
            "global_value_attained",
            std::abs(g.global_value - bundle.expected_value) <= opts.strict_margin,
            "vertex minimum " + fmt(g.global_value) + ", expected " + fmt(bundle.expected_value)));
      } else {
        rep.checks.push_back(make_check(
            "global_value_exceeds", g.global_value > bundle.expected_value + opts.strict_margin,
            "vertex minimum " + fmt(g.global_value) + ", expected " + fmt(bundle.expected_value)));
      }
      const bool attains = g.global_value <= bundle.expected_value + opts.strict_margin;
      rep.checks.push_back(make_check("oracle_consistency", attains == oracle.exists,
                                      attains ? "vertex scan attains the floor"
                                              : "vertex scan stays above the floor"));
    } else {
      rep.checks.push_back({"global_value", CheckStatus::Skip,
                            "no exact global oracle over the free cone", false});
    }
    return rep;
  }

  if (!inst.is_l1_over_l2()) {
    rep.checks.push_back({"multistart_lower_bound", CheckStatus::Skip,
                          "local solver supports p = 1, q = 2 only", true});
    return rep;
  }
  const MultistartResult ms = multistart_solve(inst, opts.starts, opts.seed);
  MultistartEvidence ev;
  ev.starts = ms.runs;
  ev.seed = opts.seed;
  ev.certified_points = static_cast<int>(ms.points.size());
  ev.collapsed = ms.collapsed;
  ev.uncertified = ms.uncertified;
  if (!ms.points.empty()) ev.best_value = ms.points.front().objective;
  rep.multistart = ev;
  const bool below =
      ev.best_value && *ev.best_value < bundle.expected_value - opts.multistart_slack;
  rep.checks.push_back(make_check(
      "multistart_lower_bound", !below,
      ev.best_value ? "best certified " + fmt(*ev.best_value) + ", expected " +
                          fmt(bundle.expected_value)
                    : "no certified points",
      true));
  return rep;
}

// ---- bundle JSON -------------------------------------------------------------

Json bundle_to_json(const ReductionBundle& bundle) {
  Json doc = instance_to_json(bundle.instance);
  Json red;
  red["kind"] = std::string(to_string(bundle.spec.kind));
  Json w = Json::array();
  for (const auto& a : bundle.spec.weights) w.push_back(format_rational(a));
  red["weights"] = w;
  red["m"] = bundle.spec.bins;
  red["kappa"] = format_rational(bundle.spec.kappa);
  red["expected_value"] = bundle.expected_value;
  red["half_ratio_value"] = bundle.half_ratio_value;
  if (bundle.certificate) red["certificate"] = vector_to_json(*bundle.certificate);
  if (!bundle.spec.warnings.empty()) red["warnings"] = bundle.spec.warnings;
  doc["reduction"] = red;
  return doc;
}

ReductionBundle bundle_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("reduction")) {
    throw Error(ErrorCode::SchemaError, "bundle needs a 'reduction' block");
  }
  const Json& red = doc.at("reduction");
  try {
    std::vector<Rational> w;
    for (const auto& s : red.at("weights")) w.push_back(parse_rational(s.get<std::string>()));
    const PartitionKind kind = parse_partition_kind(red.at("kind").get<std::string>());
    PartitionSpec spec = kind == PartitionKind::Partition
                             ? make_partition_spec(std::move(w))
                             : make_three_partition_spec(std::move(w), red.at("m").get<int>(),
                                                         parse_rational(red.at("kappa").get<std::string>()));
    ProblemInstance inst = instance_from_json(doc, {"reduction", "meta"});
    ReductionBundle out = encode_reduction(spec, inst.model(), inst.cone(), inst.p(), inst.q());
    if ((out.instance.A() - inst.A()).cwiseAbs().maxCoeff() != 0.0 ||
        (out.instance.b() - inst.b()).cwiseAbs().maxCoeff() != 0.0) {
      throw Error(ErrorCode::SchemaError, "instance does not match its reduction block");
    }
    if (red.contains("certificate")) out.certificate = vector_from_json(red.at("certificate"));
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("bad reduction block: ") + e.what());
  }
}

}  // namespace l1l2
