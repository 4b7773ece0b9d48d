#pragma once

#include <string>
#include <string_view>

#include "l1l2/bounds.hpp"
#include "l1l2/instance_io.hpp"
#include "l1l2/ratio_calculus.hpp"
#include "l1l2/reductions.hpp"
#include "l1l2/solver.hpp"
#include "l1l2/stationarity.hpp"

namespace l1l2 {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Finite doubles become JSON numbers; inf and nan become "inf", "-inf", "nan".
Json number_json(double v);
Json indices_json(const std::vector<Eigen::Index>& idx);

/// {"tool", "version", "command", "config", "timestamp"?}; the timestamp is
/// UTC ISO-8601 and omitted when `timestamp` is false.
Json report_header(std::string_view command, const Json& config, bool timestamp);

Json to_json(const CertificationTolerances& tol);
Json to_json(const MinimizerCertificate& cert);
Json to_json(const ConstrainedStationarity& cs);
Json to_json(const SupportStats& st);
Json to_json(const L2Radii& radii);
Json to_json(const EntryBound& eb);
Json to_json(const EntryBoundReport& rep);
Json to_json(const AuditRecord& rec);
Json to_json(const SolveTrace& trace);  // summary, without the history
Json to_json(const LocalSolution& sol);
Json to_json(const MultistartResult& res);
Json to_json(const RankTwoSpec& spec);
Json to_json(const QSpectrum& spec);
Json to_json(const GlobalOracleResult& res);
Json to_json(const Witness& w, const PartitionSpec& spec);
Json to_json(const PartitionOracleResult& res, const PartitionSpec& spec);
Json to_json(const VerificationReport& rep, const PartitionSpec& spec);

/// One JSON object per line: {"iteration","objective","residual","support_size"}.
std::string trace_to_jsonl(const SolveTrace& trace);

/// Audit table: one row per (instance, point).
std::string audit_csv_header();
std::string audit_csv_row(std::string_view instance, std::string_view point,
                          const AuditRecord& rec);

}  // namespace l1l2
