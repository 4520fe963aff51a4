#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mimic/capture.hpp"
#include "mimic/descriptor.hpp"
#include "mimic/errors.hpp"
#include "mimic/record.hpp"

namespace mimic {

struct GenerationConfig {
  std::string trace_dir;
  std::string candidates_path;
  std::string output_dir;
  std::vector<OracleKind> oracle_kinds{OracleKind::output, OracleKind::parameter, OracleKind::call};
  bool dedup = true;
  bool overwrite = false;
  /// Depth used by generated mocks when capturing call arguments; must match
  /// the depth the records were captured with.
  std::size_t depth_limit = kDefaultDepthLimit;
};

/// Keeps the first record of every class of records with the same
/// observation (receiver, args, outcome, calls), in input order.
std::vector<InvocationRecord> dedupe_records(std::vector<InvocationRecord> records);

/// One directive per (site, structurally equal args) group in
/// first-occurrence order; returns in seq order.
std::vector<StubDirective> build_stub_plan(const InvocationRecord& record);

/// Serves calls from a stub plan the way a generated mock does: exact
/// argument matching, consecutive returns, the last return repeated once a
/// queue is exhausted.
class StubPlanInterpreter {
 public:
  explicit StubPlanInterpreter(std::vector<StubDirective> plan);
  /// nullopt on a stub miss.
  std::optional<Snapshot> call(const std::string& site_id, const std::vector<Snapshot>& args);

 private:
  std::vector<StubDirective> plan_;
  std::vector<std::size_t> served_;
};

/// Replays the record's own call sequence against its plan.
std::vector<std::optional<Snapshot>> replay_stub_plan(const InvocationRecord& record);

/// Arrange and act phases of the tests for one record.
struct ArrangeAct {
  std::string arrange;         // statements, one per line, indented
  std::string act_capturing;   // `auto actual = ...;` (returned outcomes only)
  std::string act_discarding;  // the call alone or wrapped in try/catch
  std::map<std::string, std::string> mock_for_site;  // site id -> mock variable
  std::string resource_dir;    // `<uid>/`, relative to the MUT's resource dir
  std::vector<ResourceFile> resources;
};

/// A skip reason instead of a fragment when the record cannot be replayed.
/// Mocks capture call arguments with `depth_limit`.
std::variant<ArrangeAct, std::string> render_arrange_act(const InvocationRecord& record,
                                                         const MutDescriptor& descriptor,
                                                         const std::vector<StubDirective>& plan,
                                                         std::size_t depth_limit = kDefaultDepthLimit);

/// The test of one oracle kind, or a skip reason.
using RenderedTest = std::variant<GeneratedTest, std::string>;

RenderedTest render_output_oracle(const InvocationRecord& record, const MutDescriptor& descriptor,
                                  const ArrangeAct& fragment);
RenderedTest render_parameter_oracle(const InvocationRecord& record, const MutDescriptor& descriptor,
                                     const ArrangeAct& fragment);
RenderedTest render_call_oracle(const InvocationRecord& record, const MutDescriptor& descriptor,
                                const ArrangeAct& fragment);

/// `test_<mut>_<uid>_<oracle>` with every non-identifier character mapped to `_`.
std::string test_name(const std::string& mut_id, const std::string& uid, OracleKind kind);
/// File name of the generated test source of one MUT.
std::string test_file_name(const std::string& mut_id);

/// C++ expression of the given snapshot's scalar value with the recorded
/// static type, or nullopt when the node is not a plain scalar.
std::optional<std::string> cpp_literal(const Snapshot& s);

struct MutReport {
  std::string mut_id;
  std::size_t records = 0;     // after dedup
  std::size_t duplicates = 0;  // dropped by dedup
  std::size_t tests = 0;
  std::map<std::string, std::size_t> skipped;  // "<oracle>: <reason>" or "record: <reason>" -> count
};

struct EmissionReport {
  std::size_t records_loaded = 0;
  std::size_t tests_generated = 0;
  std::vector<MutReport> muts;  // sorted by mut_id
  std::vector<std::string> problems;  // unreadable files and orphan trace dirs

  std::string format() const;
};

/// The generated tree in memory: relative path -> bytes.
struct Suite {
  std::map<std::string, std::string> files;
  EmissionReport report;
};

/// Pure function of the trace tree, the candidates and the config.
/// Throws ConfigError when the trace dir or candidates cannot be read.
Suite build_suite(const GenerationConfig& config);

/// Builds the suite and writes it. Refuses (ConfigError) to write into a
/// non-empty output dir unless `overwrite` is set; with it, previously
/// generated files are replaced.
EmissionReport emit_suite(const GenerationConfig& config);

/// Differences between a freshly built suite and the output dir on disk;
/// empty when they are byte-identical.
std::vector<std::string> check_suite(const GenerationConfig& config);

inline constexpr const char* kReportFileName = "mimic-report.txt";

}  // namespace mimic
