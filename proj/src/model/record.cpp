#include "mimic/record.hpp"

#include "mimic/errors.hpp"

namespace mimic {

namespace {

bool all_equal(const std::vector<Snapshot>& a, const std::vector<Snapshot>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!structural_equals(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

bool structural_equals(const MockableCallRecord& a, const MockableCallRecord& b) {
  return a.site_id == b.site_id && a.seq == b.seq && all_equal(a.args, b.args) &&
         structural_equals(a.return_value, b.return_value);
}

bool structural_equals(const Outcome& a, const Outcome& b) {
  if (a.index() != b.index()) return false;
  if (const auto* r = std::get_if<Returned>(&a)) return structural_equals(r->value, std::get<Returned>(b).value);
  return std::get<Raised>(a).error_type == std::get<Raised>(b).error_type;
}

bool same_observation(const InvocationRecord& a, const InvocationRecord& b) {
  if (a.mut_id != b.mut_id) return false;
  if (!structural_equals(a.receiver, b.receiver) || !all_equal(a.args, b.args)) return false;
  if (!structural_equals(a.outcome, b.outcome)) return false;
  if (a.calls.size() != b.calls.size()) return false;
  for (std::size_t i = 0; i < a.calls.size(); ++i) {
    if (!structural_equals(a.calls[i], b.calls[i])) return false;
  }
  return true;
}

bool structural_equals(const InvocationRecord& a, const InvocationRecord& b) {
  return a.schema_version == b.schema_version && a.invocation_uid == b.invocation_uid &&
         a.timestamp == b.timestamp && same_observation(a, b);
}

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::output: return "output";
    case OracleKind::parameter: return "parameter";
    case OracleKind::call: return "call";
  }
  return "?";
}

OracleKind parse_oracle_kind(std::string_view text) {
  if (text == "output") return OracleKind::output;
  if (text == "parameter") return OracleKind::parameter;
  if (text == "call") return OracleKind::call;
  throw Error("unknown oracle kind '" + std::string(text) + "'");
}

}  // namespace mimic
