#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mimic/errors.hpp"

namespace mimic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kDefaultCandidates = "mimic-candidates.txt";
inline constexpr const char* kDefaultScanReport = "mimic-scan-report.txt";
inline constexpr const char* kDefaultTraces = "mimic-traces";
inline constexpr const char* kDefaultOut = "mimic-tests";
inline constexpr const char* kDefaultConfigFile = "mimic.toml";

/// Settings shared by the three commands. Every field is unset until a
/// config file or a flag provides it; `merged_over` applies the precedence.
struct CliConfig {
  std::optional<std::string> project;
  std::optional<std::string> candidates;
  std::optional<std::string> traces;
  std::optional<std::string> out;
  std::optional<std::string> policy;  // "project" or "package"
  std::optional<std::vector<std::string>> include;
  std::optional<std::vector<std::string>> exclude;
  std::optional<std::vector<std::string>> denylist;  // extra patterns
  std::optional<std::vector<std::string>> oracles;
  std::optional<bool> dedup;
  std::optional<std::size_t> max_records;
  std::optional<std::size_t> depth;
  std::optional<bool> overwrite;
  std::optional<bool> check;

  /// Fields set here win; unset fields come from `base`.
  CliConfig merged_over(const CliConfig& base) const;
};

/// Parses `key = value` lines. Values are bare words, "quoted strings",
/// true/false, integers or ["lists", "of", "strings"]; `#` starts a comment.
/// Keys are the long flag names with `-` or `_` (`no-dedup` and `dedup` both
/// accepted). Throws ConfigError naming the line on bad input.
CliConfig parse_config_text(std::string_view text);

/// Entry point of the `mimic` executable. Returns the process exit code.
int run(int argc, char** argv);

}  // namespace mimic::cli
