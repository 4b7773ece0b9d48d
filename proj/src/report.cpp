#include "l1l2/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <sstream>

namespace l1l2 {

Json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json indices_json(const std::vector<Eigen::Index>& idx) {
  Json out = Json::array();
  for (auto i : idx) out.push_back(i);
  return out;
}

namespace {

Json opt_json(const std::optional<double>& v) { return v ? number_json(*v) : Json(nullptr); }

Json vec_json(const Vector& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number_json(x));
  return out;
}

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_opt(const std::optional<double>& v) { return v ? csv_num(*v) : ""; }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Json report_header(std::string_view command, const Json& config, bool timestamp) {
  Json h;
  h["tool"] = "l1l2";
  h["version"] = std::string(kToolVersion);
  h["command"] = std::string(command);
  h["config"] = config;
  if (timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    h["timestamp"] = buf;
  }
  return h;
}

Json to_json(const CertificationTolerances& tol) {
  return Json{{"first_order", tol.first_order},
              {"second_order", tol.second_order},
              {"support_rel", tol.support_rel}};
}

Json to_json(const MinimizerCertificate& cert) {
  Json j;
  j["support"] = indices_json(cert.support);
  j["residual"] = number_json(cert.first_order_residual);
  j["off_support_margin"] = number_json(cert.off_support_margin);
  j["min_hessian_eig"] = opt_json(cert.min_hessian_eig);
  j["verdict"] = std::string(to_string(cert.verdict));
  j["tolerances"] = to_json(cert.tolerances);
  return j;
}

Json to_json(const ConstrainedStationarity& cs) {
  Json j;
  j["support"] = indices_json(cs.support);
  j["feasibility"] = number_json(cs.feasibility);
  j["projected_gradient"] = number_json(cs.projected_gradient);
  j["verdict"] = std::string(to_string(cs.verdict));
  j["tolerance"] = cs.tolerance;
  return j;
}

Json to_json(const SupportStats& st) {
  Json j;
  j["support"] = indices_json(st.support);
  j["s"] = st.size();
  j["l1"] = number_json(st.l1);
  j["l2"] = number_json(st.l2);
  j["dyn_range"] = st.dyn_range ? number_json(*st.dyn_range) : Json("undefined");
  return j;
}

Json to_json(const L2Radii& r) {
  Json j;
  j["sigma"] = number_json(r.sigma);
  j["sigma_support"] = opt_json(r.sigma_support);
  j["rank_cutoff"] = r.rank_cutoff;
  j["constrained_uniform"] = number_json(r.constrained_uniform);
  j["unconstrained_uniform_i"] = opt_json(r.unconstrained_uniform_i);
  j["unconstrained_uniform_i_sqrt_s"] = opt_json(r.unconstrained_uniform_i_sqrt_s);
  j["unconstrained_uniform_ii"] = opt_json(r.unconstrained_uniform_ii);
  j["support_radius_i"] = opt_json(r.support_radius_i);
  j["support_radius_ii"] = opt_json(r.support_radius_ii);
  return j;
}

Json to_json(const EntryBound& eb) {
  Json j;
  j["index"] = eb.index;
  j["value"] = number_json(eb.value);
  j["delta"] = number_json(eb.delta);
  j["delta_tilde"] = number_json(eb.delta_tilde);
  j["Delta"] = number_json(eb.Delta);
  j["kappa1"] = opt_json(eb.kappa1);
  j["kappa2"] = opt_json(eb.kappa2);
  j["case"] = std::string(to_string(eb.entry_case));
  return j;
}

Json to_json(const EntryBoundReport& rep) {
  Json j;
  j["support"] = indices_json(rep.support);
  j["l1"] = number_json(rep.l1);
  j["l2"] = number_json(rep.l2);
  j["gamma"] = rep.gamma;
  Json entries = Json::array();
  for (const auto& eb : rep.entries) entries.push_back(to_json(eb));
  j["entries"] = entries;
  j["radii"] = to_json(rep.radii);
  return j;
}

namespace {

Json violations_json(const std::vector<Violation>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) {
    Json j;
    j["kind"] = v.kind;
    j["index"] = v.index ? Json(*v.index) : Json(nullptr);
    j["magnitude"] = number_json(v.magnitude);
    out.push_back(j);
  }
  return out;
}

}  // namespace

Json to_json(const AuditRecord& rec) {
  Json j;
  j["norm"] = number_json(rec.norm);
  j["certificate"] = to_json(rec.certificate);
  j["entries"] = to_json(rec.entries);
  Json checks = Json::array();
  for (const auto& rc : rec.radius_checks) {
    checks.push_back(Json{{"name", rc.name},
                          {"radius", number_json(rc.radius)},
                          {"norm", number_json(rc.norm)},
                          {"within", rc.within},
                          {"support_level", rc.support_level}});
  }
  j["radius_checks"] = checks;
  j["support_radii_ok"] = rec.support_radii_ok;
  j["uniform_radii_ok"] = rec.uniform_radii_ok;
  j["entries_ok"] = rec.entries_ok;
  j["known_discrepancy"] = rec.known_discrepancy;
  j["violations"] = violations_json(rec.violations);
  j["discrepancies"] = violations_json(rec.discrepancies);
  j["passed"] = rec.passed();
  return j;
}

Json to_json(const SolveTrace& t) {
  Json j;
  j["iterations"] = t.iterations;
  j["final_residual"] = number_json(t.final_residual);
  j["stop"] = std::string(to_string(t.stop));
  Json changes = Json::array();
  for (const auto& c : t.support_changes) {
    changes.push_back(Json{{"iteration", c.iteration}, {"dropped", indices_json(c.dropped)}});
  }
  j["support_changes"] = changes;
  return j;
}

Json to_json(const LocalSolution& sol) {
  Json j;
  j["point"] = vec_json(sol.point);
  j["objective"] = number_json(sol.objective);
  j["trace"] = to_json(sol.trace);
  j["certificate"] = to_json(sol.certificate);
  return j;
}

Json to_json(const MultistartResult& res) {
  Json j;
  j["runs"] = res.runs;
  j["collapsed"] = res.collapsed;
  j["uncertified"] = res.uncertified;
  j["start_radius"] = number_json(res.start_radius);
  Json pts = Json::array();
  for (const auto& p : res.points) {
    pts.push_back(Json{{"point", vec_json(p.point)},
                       {"objective", number_json(p.objective)},
                       {"certificate", to_json(p.certificate)}});
  }
  j["points"] = pts;
  return j;
}

Json to_json(const RankTwoSpec& s) {
  Json j;
  j["lambda1"] = number_json(s.lambda1);
  j["lambda2"] = number_json(s.lambda2);
  j["zero_multiplicity"] = s.zero_multiplicity;
  j["dense_fallback"] = s.dense_fallback;
  return j;
}

Json to_json(const QSpectrum& s) {
  Json j;
  j["s"] = s.s;
  j["a"] = number_json(s.a);
  j["r"] = number_json(s.r);
  j["gamma"] = number_json(s.gamma);
  j["lam1"] = number_json(s.lam1);
  j["lam2"] = number_json(s.lam2);
  j["q_neg"] = number_json(s.q_neg);
  j["q_pos"] = number_json(s.q_pos);
  j["q_bulk"] = number_json(s.q_bulk);
  j["bulk_multiplicity"] = s.bulk_multiplicity;
  Json ev = Json::array();
  for (double v : s.eigenvalues()) ev.push_back(number_json(v));
  j["eigenvalues"] = ev;
  return j;
}

Json to_json(const GlobalOracleResult& r) {
  Json j;
  j["global_value"] = number_json(r.global_value);
  j["argmin"] = vec_json(r.argmin);
  j["method"] = r.method;
  j["vertices_examined"] = r.vertices_examined;
  return j;
}

Json to_json(const Witness& w, const PartitionSpec& spec) {
  Json groups = Json::array();
  for (const auto& g : w.groups(spec.bins)) {
    Json items = Json::array();
    Json weights = Json::array();
    for (int i : g) {
      items.push_back(i);
      weights.push_back(format_rational(spec.weights[static_cast<std::size_t>(i)]));
    }
    groups.push_back(Json{{"items", items}, {"weights", weights}});
  }
  return Json{{"label", w.label}, {"groups", groups}};
}

Json to_json(const PartitionOracleResult& r, const PartitionSpec& spec) {
  Json j;
  j["exists"] = r.exists;
  j["witness"] = r.witness ? to_json(*r.witness, spec) : Json(nullptr);
  j["examined"] = r.examined;
  return j;
}

Json to_json(const VerificationReport& rep, const PartitionSpec& spec) {
  Json j;
  j["verdict"] = rep.passed() ? "PASS" : "FAIL";
  j["kind"] = std::string(to_string(rep.kind));
  j["model"] = std::string(to_string(rep.model));
  j["cone"] = std::string(to_string(rep.cone));
  j["p"] = rep.p;
  j["q"] = rep.q;
  j["exists"] = rep.exists;
  j["witness"] = rep.witness ? to_json(*rep.witness, spec) : Json(nullptr);
  j["expected_value"] = number_json(rep.expected_value);
  j["half_ratio_value"] = number_json(rep.half_ratio_value);
  j["certificate_value"] = opt_json(rep.certificate_value);
  j["certificate_half_ratio_value"] = opt_json(rep.certificate_half_ratio_value);
  j["certificate_residual"] = opt_json(rep.certificate_residual);
  j["global"] = rep.global ? to_json(*rep.global) : Json(nullptr);
  if (rep.multistart) {
    const auto& m = *rep.multistart;
    j["multistart"] = Json{{"starts", m.starts},
                           {"seed", m.seed},
                           {"certified_points", m.certified_points},
                           {"collapsed", m.collapsed},
                           {"uncertified", m.uncertified},
                           {"best_value", opt_json(m.best_value)},
                           {"evidence_only", true}};
  } else {
    j["multistart"] = nullptr;
  }
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"status", std::string(to_string(c.status))},
                          {"detail", c.detail},
                          {"evidence_only", c.evidence_only}});
  }
  j["checks"] = checks;
  return j;
}

std::string trace_to_jsonl(const SolveTrace& trace) {
  std::string out;
  for (const auto& e : trace.history) {
    out += Json{{"iteration", e.iteration},
                {"objective", number_json(e.objective)},
                {"residual", number_json(e.residual)},
                {"support_size", e.support_size}}
               .dump();
    out += '\n';
  }
  return out;
}

std::string audit_csv_header() {
  return "instance,point,norm,s,l1,l2,sigma,sigma_support,constrained_uniform,"
         "unconstrained_uniform_i,unconstrained_uniform_i_sqrt_s,unconstrained_uniform_ii,"
         "support_radius_i,support_radius_ii,worst_entry_margin,first_order_residual,"
         "off_support_margin,min_hessian_eig,verdict,support_radii_ok,uniform_radii_ok,"
         "entries_ok,known_discrepancy,violations,passed\n";
}

std::string audit_csv_row(std::string_view instance, std::string_view point,
                          const AuditRecord& rec) {
  const auto& r = rec.entries.radii;
  // smallest distance from |x_i| to the region its case forbids; negative inside it
  std::optional<double> worst;
  for (const auto& eb : rec.entries.entries) {
    std::optional<double> m;
    if (eb.entry_case == EntryCase::LowerBounded && eb.kappa2) {
      m = eb.value - *eb.kappa2;
    } else if (eb.entry_case == EntryCase::Dichotomy && eb.kappa1) {
      m = std::max(*eb.kappa1 - eb.value, eb.value - *eb.kappa2);
    }
    if (m && (!worst || *m < *worst)) worst = m;
  }
  const auto b = [](bool v) { return v ? "true" : "false"; };
  std::ostringstream os;
  os << csv_field(instance) << ',' << csv_field(point) << ',' << csv_num(rec.norm) << ','
     << rec.entries.support.size() << ',' << csv_num(rec.entries.l1) << ','
     << csv_num(rec.entries.l2) << ',' << csv_num(r.sigma) << ',' << csv_opt(r.sigma_support)
     << ',' << csv_num(r.constrained_uniform) << ',' << csv_opt(r.unconstrained_uniform_i) << ','
     << csv_opt(r.unconstrained_uniform_i_sqrt_s) << ',' << csv_opt(r.unconstrained_uniform_ii)
     << ',' << csv_opt(r.support_radius_i) << ',' << csv_opt(r.support_radius_ii) << ','
     << csv_opt(worst) << ',' << csv_num(rec.certificate.first_order_residual) << ','
     << csv_num(rec.certificate.off_support_margin) << ','
     << csv_opt(rec.certificate.min_hessian_eig) << ',' << to_string(rec.certificate.verdict)
     << ',' << b(rec.support_radii_ok) << ',' << b(rec.uniform_radii_ok) << ','
     << b(rec.entries_ok) << ',' << b(rec.known_discrepancy) << ',' << rec.violations.size()
     << ',' << b(rec.passed()) << '\n';
  return os.str();
}

}  // namespace l1l2
