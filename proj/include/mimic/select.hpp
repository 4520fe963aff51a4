#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mimic/descriptor.hpp"
#include "mimic/errors.hpp"

namespace mimic {

enum class ExternalTypePolicy { outside_project, outside_package };

struct SelectionConfig {
  std::string project_root;
  ExternalTypePolicy external_type_policy = ExternalTypePolicy::outside_project;
  /// Glob patterns over type names; matching types are never external.
  std::vector<std::string> type_denylist = default_type_denylist();
  /// Glob patterns over mut_id. An empty include list keeps everything.
  std::vector<std::string> method_include;
  std::vector<std::string> method_exclude;

  static std::vector<std::string> default_type_denylist();
};

/// Parses denylist text: one glob per line, `#` comments, blank lines ignored.
std::vector<std::string> parse_denylist(const std::string& text);

struct ScanIssue {
  enum class Kind { skipped_file, unresolved_receiver, unsubstitutable_receiver, ineligible_method, not_instrumented };
  Kind kind;
  std::string file;
  int line = 0;
  std::string message;
};

std::string_view to_string(ScanIssue::Kind kind);

struct ScanReport {
  std::size_t files_scanned = 0;
  std::vector<ScanIssue> issues;
};

std::string format_scan_report(const ScanReport& report, std::size_t candidates);

/// Type declarations found under the project root.
struct ProjectIndex {
  struct TypeInfo {
    std::string name;  // fully qualified
    std::string namespace_name;
    std::string file;
    int line = 0;
  };
  std::map<std::string, TypeInfo> types;
};

/// True iff `type_name` (as resolved by the scanner: fully qualified when it
/// names a project type, as spelled otherwise) is external for a use inside
/// namespace `usage_namespace`, and matches no denylist pattern.
bool classify_external(const std::string& type_name, const std::string& usage_namespace, const ProjectIndex& index,
                       const SelectionConfig& config);

struct ScanResult {
  std::vector<MutDescriptor> descriptors;  // sorted by mut_id
  ScanReport report;
  ProjectIndex index;
};

/// Throws ConfigError if the root is not a directory. A root without source
/// files yields an empty result.
ScanResult scan_project(const SelectionConfig& config);

/// Glob match where `*` and `?` also match `/` and `:`.
bool glob_match(const std::string& pattern, const std::string& text);

}  // namespace mimic
