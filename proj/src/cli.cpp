#include "l1l2/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <Eigen/Eigenvalues>

#include "CLI11.hpp"
#include "l1l2/report.hpp"

namespace l1l2::cli {

namespace {

struct Options {
  std::string instance;
  std::string point;
  std::string weights;
  std::string kind = "partition";
  int bins = 0;
  std::string kappa;
  std::string model = "constrained";
  std::string cone = "nonneg";
  double p = 1.0;
  double q = 2.0;
  std::optional<double> gamma;
  int starts = 0;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string out;
  std::string format = "json";
  std::string trace;
  bool no_timestamp = false;
};

// ---- helpers ------------------------------------------------------------------

ProblemInstance load_instance(const Options& o) {
  ProblemInstance inst = instance_from_json(read_json_file(o.instance), {"reduction", "meta"});
  if (!o.gamma) return inst;
  InstanceDescription d = inst.describe();
  if (d.model != ModelKind::Unconstrained) {
    throw Error(ErrorCode::BadGamma, "--gamma applies to unconstrained instances only");
  }
  d.gamma = o.gamma;
  return validate_instance(d);
}

Vector load_point(const Options& o, const ProblemInstance& inst) {
  std::string text = o.point;
  if (!text.empty() && text.front() == '@') text = read_text_file(text.substr(1));
  const auto first = text.find_first_not_of(" \t\r\n");
  Vector x = first != std::string::npos && text[first] == '['
                 ? vector_from_json(Json::parse(text))
                 : parse_point_csv(text);
  if (x.size() != inst.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(x.size()) +
                                                  " entries, instance n is " +
                                                  std::to_string(inst.cols()));
  }
  return x;
}

PartitionSpec load_spec(const Options& o) {
  std::vector<Rational> w = parse_weights(o.weights);
  const PartitionKind kind = parse_partition_kind(o.kind);
  if (kind == PartitionKind::Partition) return make_partition_spec(std::move(w));
  if (o.bins < 1) throw Error(ErrorCode::BadArgument, "3partition needs --bins");
  if (o.kappa.empty()) throw Error(ErrorCode::BadArgument, "3partition needs --kappa");
  return make_three_partition_spec(std::move(w), o.bins, parse_rational(o.kappa));
}

CertificationTolerances cert_tolerances(const Options& o) {
  CertificationTolerances t;
  if (o.tol) t.first_order = *o.tol;
  if (!(t.first_order > 0.0)) throw Error(ErrorCode::BadArgument, "--tol must be positive");
  return t;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::BadArgument, "cannot write '" + o.out + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json spec_config(const Options& o) {
  Json c;
  c["weights"] = o.weights;
  c["kind"] = o.kind;
  if (o.kind == "3partition") {
    c["bins"] = o.bins;
    c["kappa"] = o.kappa;
  }
  c["model"] = o.model;
  c["cone"] = o.cone;
  c["p"] = o.p;
  c["q"] = o.q;
  return c;
}

Json instance_config(const Options& o) {
  Json c;
  c["instance"] = o.instance;
  if (!o.point.empty()) c["point"] = o.point;
  if (o.gamma) c["gamma"] = *o.gamma;
  return c;
}

// ---- subcommands ---------------------------------------------------------------

int cmd_encode(const Options& o, std::ostream& out) {
  const PartitionSpec spec = load_spec(o);
  ReductionBundle bundle =
      encode_reduction(spec, parse_model(o.model), parse_cone(o.cone), o.p, o.q);
  try {
    const PartitionOracleResult orc = partition_oracle(spec);
    if (orc.exists) bundle.certificate = embed_certificate(spec, *orc.witness);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExceeded) throw;
  }
  Json doc;
  doc["meta"] = report_header("encode", spec_config(o), !o.no_timestamp);
  const Json body = bundle_to_json(bundle);
  for (const auto& [k, v] : body.items()) doc[k] = v;
  emit(o, out, dump(doc));
  return kOk;
}

int cmd_solve(const Options& o, std::ostream& out) {
  const ProblemInstance inst = load_instance(o);
  const CertificationTolerances tol = cert_tolerances(o);
  SolverOptions so;
  so.seed = o.seed;
  Json cfg = instance_config(o);
  cfg["tolerances"] = to_json(tol);
  Json doc;
  if (!o.point.empty()) {
    const LocalSolution sol = solve_local(inst, load_point(o, inst), so, tol);
    if (!o.trace.empty()) {
      std::ofstream f(o.trace, std::ios::binary);
      if (!f) throw Error(ErrorCode::BadArgument, "cannot write '" + o.trace + "'");
      f << trace_to_jsonl(sol.trace);
    }
    doc["header"] = report_header("solve", cfg, !o.no_timestamp);
    doc["solution"] = to_json(sol);
  } else {
    const int starts = o.starts > 0 ? o.starts : 32;
    cfg["starts"] = starts;
    cfg["seed"] = o.seed;
    const MultistartResult res = multistart_solve(inst, starts, o.seed, so, tol);
    doc["header"] = report_header("solve", cfg, !o.no_timestamp);
    doc["multistart"] = to_json(res);
  }
  emit(o, out, dump(doc));
  return kOk;
}

int cmd_certify(const Options& o, std::ostream& out) {
  const ProblemInstance inst = load_instance(o);
  const Vector x = load_point(o, inst);
  const CertificationTolerances tol = cert_tolerances(o);
  Json cfg = instance_config(o);
  cfg["tolerances"] = to_json(tol);
  Json doc;
  doc["header"] = report_header("certify", cfg, !o.no_timestamp);
  doc["objective"] = number_json(objective_value(inst, x));
  if (inst.model() == ModelKind::Unconstrained) {
    doc["certificate"] = to_json(certify_local_minimizer(inst, x, tol));
  } else {
    doc["constrained"] = to_json(constrained_stationarity(inst, x, tol.first_order));
  }
  emit(o, out, dump(doc));
  return kOk;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  const ProblemInstance inst = load_instance(o);
  const double audit_tol = o.tol.value_or(kAuditTol);
  Json cfg = instance_config(o);
  cfg["audit_tol"] = audit_tol;
  cfg["rank_cutoff"] = kDefaultRankCutoff;
  cfg["tolerances"] = to_json(CertificationTolerances{});
  if (o.format != "json" && o.format != "csv") {
    throw Error(ErrorCode::BadArgument, "--format must be json or csv");
  }

  if (o.point.empty()) {
    if (o.format == "csv") throw Error(ErrorCode::BadArgument, "csv output needs --point");
    Json doc;
    doc["header"] = report_header("bounds", cfg, !o.no_timestamp);
    doc["radii"] = to_json(l2_ball_radii(inst));
    emit(o, out, dump(doc));
    return kOk;
  }

  const Vector x = load_point(o, inst);
  const MinimizerCertificate cert = certify_local_minimizer(inst, x);
  const AuditRecord rec = audit_point(x, inst, cert, audit_tol);
  if (o.format == "csv") {
    emit(o, out, audit_csv_header() + audit_csv_row(o.instance, o.point, rec));
  } else {
    Json doc;
    doc["header"] = report_header("bounds", cfg, !o.no_timestamp);
    doc["audit"] = to_json(rec);
    emit(o, out, dump(doc));
  }
  return rec.passed() ? kOk : kFail;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  const ProblemInstance inst = load_instance(o);
  const SpectralSummary ss = sigma_min_nonzero(inst.A());
  Json doc;
  doc["header"] = report_header("spectrum", instance_config(o), !o.no_timestamp);
  Json gram = Json::array();
  for (double v : ss.eigenvalues) gram.push_back(number_json(v));
  doc["gram_eigenvalues"] = gram;
  doc["sigma"] = number_json(ss.sigma);
  doc["rank_cutoff"] = ss.rank_cutoff;
  if (!o.point.empty()) {
    const Vector x = load_point(o, inst);
    const SupportStats st = support_and_stats(x);
    if (st.empty()) throw Error(ErrorCode::EmptySupport, "spectrum needs a nonzero point");
    doc["support"] = to_json(st);
    if (inst.model() == ModelKind::Unconstrained) {
      const Vector y = restrict_to(x, st.support);
      const double gamma = inst.penalty();
      doc["q_spectrum"] = to_json(q_matrix_spectrum(static_cast<int>(st.size()),
                                                    y.lpNorm<1>(), y.norm(), gamma));
      const Derivatives d =
          restricted_l1l2_derivatives(y, restrict_columns(inst.A(), st.support), inst.b(), gamma);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(d.hessian, Eigen::EigenvaluesOnly);
      Json h = Json::array();
      for (double v : eig.eigenvalues()) h.push_back(number_json(v));
      doc["hessian_eigenvalues"] = h;
    }
  }
  emit(o, out, dump(doc));
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const PartitionSpec spec = load_spec(o);
  VerificationOptions vo;
  if (o.starts > 0) vo.starts = o.starts;
  if (o.seed != 0) vo.seed = o.seed;
  Json cfg = spec_config(o);
  cfg["starts"] = vo.starts;
  cfg["seed"] = vo.seed;
  cfg["value_tol"] = vo.value_tol;
  cfg["strict_margin"] = vo.strict_margin;
  cfg["multistart_slack"] = vo.multistart_slack;
  const VerificationReport rep =
      verify_reduction(spec, parse_model(o.model), parse_cone(o.cone), o.p, o.q, vo);
  Json doc;
  doc["header"] = report_header("verify-reduction", cfg, !o.no_timestamp);
  doc["verification"] = to_json(rep, spec);
  if (!spec.warnings.empty()) doc["warnings"] = spec.warnings;
  emit(o, out, dump(doc));
  return rep.passed() ? kOk : kFail;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  std::optional<ReductionBundle> bundle;
  Json cfg;
  if (!o.instance.empty()) {
    bundle = bundle_from_json(read_json_file(o.instance));
    cfg["instance"] = o.instance;
  } else {
    cfg = spec_config(o);
    bundle = encode_reduction(load_spec(o), parse_model(o.model), parse_cone(o.cone), o.p, o.q);
  }
  Json doc;
  doc["header"] = report_header("oracle", cfg, !o.no_timestamp);
  doc["partition"] = to_json(partition_oracle(bundle->spec), bundle->spec);
  doc["expected_value"] = number_json(bundle->expected_value);
  const ProblemInstance& inst = bundle->instance;
  if (inst.model() == ModelKind::Constrained && inst.cone() == Cone::NonNegative) {
    doc["global"] = to_json(global_oracle_partition_polytope(*bundle));
  } else {
    doc["global"] = nullptr;
  }
  emit(o, out, dump(doc));
  return kOk;
}

std::string error_json(std::string_view code, std::string_view detail) {
  Json j;
  j["error"] = std::string(code);
  j["detail"] = std::string(detail);
  return j.dump() + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"L1/L2 ratio minimization: certification, bounds and hardness reductions", "l1l2"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  auto add_out = [&](CLI::App* s) {
    s->add_option("--out", o.out, "Output path (default stdout)");
    s->add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp from the report header");
  };
  auto add_spec = [&](CLI::App* s) {
    s->add_option("--weights", o.weights, "Comma-separated rationals, e.g. 25,26,39")->required();
    s->add_option("--kind", o.kind, "partition or 3partition")
        ->check(CLI::IsMember({"partition", "3partition"}));
    s->add_option("--bins", o.bins, "Number of bins m (3partition)");
    s->add_option("--kappa", o.kappa, "Bin target (3partition)");
    s->add_option("--model", o.model, "constrained or unconstrained")
        ->check(CLI::IsMember({"constrained", "unconstrained"}));
    s->add_option("--cone", o.cone, "free or nonneg")->check(CLI::IsMember({"free", "nonneg"}));
    s->add_option("--p", o.p, "Numerator exponent in (0, 1]");
    s->add_option("--q", o.q, "Denominator exponent in (1, inf)");
  };
  auto add_instance = [&](CLI::App* s, bool point_required) {
    s->add_option("--instance", o.instance, "Instance JSON")->required();
    auto* pt = s->add_option("--point", o.point, "Point as CSV, JSON array, or @path");
    if (point_required) pt->required();
    s->add_option("--gamma", o.gamma, "Override the instance gamma");
  };

  auto* enc = app.add_subcommand("encode", "Encode a partition or 3-partition instance");
  add_spec(enc);
  add_out(enc);

  auto* sol = app.add_subcommand("solve", "Local solve from --point, or seeded multistart");
  add_instance(sol, false);
  sol->add_option("--starts", o.starts, "Multistart runs (default 32)");
  sol->add_option("--seed", o.seed, "Multistart seed");
  sol->add_option("--tol", o.tol, "First-order certification tolerance");
  sol->add_option("--trace", o.trace, "Write the iteration trace as JSON lines");
  add_out(sol);

  auto* cer = app.add_subcommand("certify", "Certify a point");
  add_instance(cer, true);
  cer->add_option("--tol", o.tol, "First-order tolerance");
  add_out(cer);

  auto* bnd = app.add_subcommand("bounds", "L2 radii, or a full audit of --point");
  add_instance(bnd, false);
  bnd->add_option("--tol", o.tol, "Audit tolerance");
  bnd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_out(bnd);

  auto* spc = app.add_subcommand("spectrum", "Gram, Q-matrix and restricted Hessian spectra");
  add_instance(spc, false);
  add_out(spc);

  auto* ver = app.add_subcommand("verify-reduction", "Check the optimal-value equivalence");
  add_spec(ver);
  ver->add_option("--starts", o.starts, "Multistart runs for unconstrained bundles (default 128)");
  ver->add_option("--seed", o.seed, "Multistart seed");
  add_out(ver);

  auto* orc = app.add_subcommand("oracle", "Exact partition oracle and vertex scan");
  orc->add_option("--instance", o.instance, "Bundle JSON written by encode");
  orc->add_option("--weights", o.weights, "Comma-separated rationals");
  orc->add_option("--kind", o.kind)->check(CLI::IsMember({"partition", "3partition"}));
  orc->add_option("--bins", o.bins);
  orc->add_option("--kappa", o.kappa);
  orc->add_option("--model", o.model)->check(CLI::IsMember({"constrained", "unconstrained"}));
  orc->add_option("--cone", o.cone)->check(CLI::IsMember({"free", "nonneg"}));
  orc->add_option("--p", o.p);
  orc->add_option("--q", o.q);
  add_out(orc);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    out << error_json("UsageError", e.what());
    return kInputError;
  }

  try {
    if (enc->parsed()) return cmd_encode(o, out);
    if (sol->parsed()) return cmd_solve(o, out);
    if (cer->parsed()) return cmd_certify(o, out);
    if (bnd->parsed()) return cmd_bounds(o, out);
    if (spc->parsed()) return cmd_spectrum(o, out);
    if (ver->parsed()) return cmd_verify(o, out);
    if (orc->parsed()) {
      if (o.instance.empty() && o.weights.empty()) {
        throw Error(ErrorCode::BadArgument, "oracle needs --instance or --weights");
      }
      return cmd_oracle(o, out);
    }
  } catch (const Error& e) {
    out << error_json(to_string(e.code()), e.what());
    return e.code() == ErrorCode::BudgetExceeded ? kBudgetExceeded : kInputError;
  } catch (const nlohmann::json::exception& e) {
    out << error_json(to_string(ErrorCode::SchemaError), e.what());
    return kInputError;
  }
  err << "no subcommand\n";
  return kInputError;
}

}  // namespace l1l2::cli
