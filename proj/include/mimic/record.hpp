#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mimic/snapshot.hpp"

namespace mimic {

inline constexpr int kSchemaVersion = 1;

struct MockableCallRecord {
  std::string site_id;
  std::int64_t seq = 0;
  std::vector<Snapshot> args;
  Snapshot return_value;
};

struct Returned {
  Snapshot value;
};

struct Raised {
  std::string error_type;
};

using Outcome = std::variant<Returned, Raised>;

struct InvocationRecord {
  int schema_version = kSchemaVersion;
  std::string mut_id;
  std::string invocation_uid;
  std::string timestamp;  // UTC, `YYYY-MM-DDTHH:MM:SS.mmmZ`
  Snapshot receiver;
  std::vector<Snapshot> args;
  Outcome outcome = Returned{};
  std::vector<MockableCallRecord> calls;

  bool raised() const { return std::holds_alternative<Raised>(outcome); }
};

bool structural_equals(const MockableCallRecord& a, const MockableCallRecord& b);
bool structural_equals(const Outcome& a, const Outcome& b);

/// Field-by-field equality including uid and timestamp.
bool structural_equals(const InvocationRecord& a, const InvocationRecord& b);

/// Equality of the observed behavior only: receiver, args, outcome, calls.
bool same_observation(const InvocationRecord& a, const InvocationRecord& b);

struct StubDirective {
  std::string site_id;
  std::vector<Snapshot> matched_args;
  std::vector<Snapshot> returns;  // non-empty, in seq order
};

enum class OracleKind { output, parameter, call };

std::string_view to_string(OracleKind kind);
OracleKind parse_oracle_kind(std::string_view text);

struct ResourceFile {
  std::string relative_path;
  std::string bytes;
};

struct GeneratedTest {
  std::string mut_id;
  std::string invocation_uid;
  OracleKind oracle_kind = OracleKind::output;
  std::string test_name;
  std::string source_text;
  std::vector<ResourceFile> resource_files;
};

}  // namespace mimic
