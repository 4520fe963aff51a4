#include "mimic/cli.hpp"

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mimic/agent.hpp"
#include "mimic/candidates.hpp"
#include "mimic/generate.hpp"
#include "mimic/select.hpp"

namespace fs = std::filesystem;

namespace mimic::cli {

namespace {

template <class T>
void take(std::optional<T>& into, const std::optional<T>& from) {
  if (from) into = from;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// A value from the config file: quoted string, list, or bare word.
struct Value {
  std::vector<std::string> items;
  bool list = false;
};

std::string unquote(const std::string& s, std::size_t line) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s.front() == '"' && s[i] == '\\' && i + 2 < s.size()) {
        char c = s[++i];
        out += c == 'n' ? '\n' : c == 't' ? '\t' : c;
      } else {
        out += s[i];
      }
    }
    return out;
  }
  if (!s.empty() && (s.front() == '"' || s.front() == '\'')) {
    throw ConfigError("config line " + std::to_string(line) + ": unterminated string");
  }
  return s;
}

// Strips a `#` comment that is not inside quotes.
std::string strip_comment(const std::string& s) {
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      if (c == '\\' && quote == '"') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

Value parse_value(const std::string& raw, std::size_t line) {
  Value v;
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') throw ConfigError("config line " + std::to_string(line) + ": unterminated list");
    v.list = true;
    std::string body = raw.substr(1, raw.size() - 2);
    // Split on commas outside quotes.
    std::string cur;
    char quote = 0;
    auto flush = [&] {
      std::string item = trim(cur);
      if (!item.empty()) v.items.push_back(unquote(item, line));
      cur.clear();
    };
    for (char c : body) {
      if (quote) {
        if (c == quote) quote = 0;
        cur += c;
      } else if (c == '"' || c == '\'') {
        quote = c;
        cur += c;
      } else if (c == ',') {
        flush();
      } else {
        cur += c;
      }
    }
    flush();
    return v;
  }
  v.items.push_back(unquote(raw, line));
  return v;
}

bool parse_bool(const std::string& s, std::size_t line, const std::string& key) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError("config line " + std::to_string(line) + ": " + key + " expects true or false");
}

std::size_t parse_count(const std::string& s, std::size_t line, const std::string& key) {
  std::size_t n = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw ConfigError("config line " + std::to_string(line) + ": " + key + " expects a non-negative integer");
  }
  return n;
}

std::vector<std::string> as_list(const Value& v) {
  if (v.list) return v.items;
  return split_commas(v.items.front());
}

// Loaded config file, or an empty config when none applies.
CliConfig load_config_file(const std::optional<std::string>& explicit_path) {
  fs::path path = explicit_path ? fs::path(*explicit_path) : fs::path(kDefaultConfigFile);
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    if (explicit_path) throw ConfigError("config file '" + *explicit_path + "' cannot be read");
    return {};
  }
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CliConfig c = parse_config_text(ss.str());
  // Paths in the file are relative to the file.
  const fs::path base = fs::absolute(path).parent_path();
  for (auto* p : {&c.project, &c.candidates, &c.traces, &c.out}) {
    if (*p && fs::path(**p).is_relative()) *p = (base / **p).lexically_normal().string();
  }
  return c;
}

std::vector<OracleKind> oracle_kinds(const std::vector<std::string>& names) {
  std::vector<OracleKind> kinds;
  for (const auto& n : names) {
    try {
      OracleKind k = parse_oracle_kind(n);
      if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    } catch (const Error&) {
      throw ConfigError("unknown oracle kind '" + n + "' (expected output, parameter or call)");
    }
  }
  return kinds;
}

int cmd_select(const CliConfig& c) {
  if (!c.project) throw ConfigError("select needs --project PATH");
  SelectionConfig sc;
  sc.project_root = *c.project;
  if (c.policy) {
    if (*c.policy == "project") sc.external_type_policy = ExternalTypePolicy::outside_project;
    else if (*c.policy == "package") sc.external_type_policy = ExternalTypePolicy::outside_package;
    else throw ConfigError("unknown policy '" + *c.policy + "' (expected project or package)");
  }
  if (c.include) sc.method_include = *c.include;
  if (c.exclude) sc.method_exclude = *c.exclude;
  if (c.denylist) sc.type_denylist.insert(sc.type_denylist.end(), c.denylist->begin(), c.denylist->end());

  ScanResult result = scan_project(sc);
  const fs::path candidates = c.candidates.value_or(kDefaultCandidates);
  const fs::path report = candidates.parent_path() / kDefaultScanReport;
  if (!candidates.parent_path().empty()) fs::create_directories(candidates.parent_path());
  write_candidates(result.descriptors, candidates.string());
  std::ofstream(report) << format_scan_report(result.report, result.descriptors.size());
  std::cout << result.descriptors.size() << " candidates written to " << candidates.string() << "\n"
            << result.report.issues.size() << " scan issues written to " << report.string() << "\n";
  return kExitOk;
}

std::size_t count_records(const fs::path& traces) {
  std::size_t n = 0;
  std::error_code ec;
  if (!fs::is_directory(traces, ec)) return 0;
  for (auto it = fs::recursive_directory_iterator(traces, ec); it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_regular_file() && it->path().extension() == ".rec") ++n;
  }
  return n;
}

int cmd_record(const CliConfig& c, const std::vector<std::string>& command) {
  if (command.empty()) throw ConfigError("record needs the application command after --");
  const fs::path candidates = fs::absolute(c.candidates.value_or(kDefaultCandidates));
  std::error_code ec;
  if (!fs::is_regular_file(candidates, ec)) {
    throw ConfigError("candidates file '" + candidates.string() + "' cannot be read");
  }
  try {
    load_candidates(candidates.string());
  } catch (const Error& e) {
    throw ConfigError("candidates file '" + candidates.string() + "': " + e.what());
  }
  const fs::path traces = fs::absolute(c.traces.value_or(kDefaultTraces));
  fs::create_directories(traces, ec);
  if (ec) throw ConfigError("trace directory '" + traces.string() + "' cannot be created: " + ec.message());
  const std::size_t before = count_records(traces);

  std::cout.flush();
  pid_t pid = ::fork();
  if (pid < 0) throw Error(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    ::setenv(agent::kCandidatesEnv, candidates.c_str(), 1);
    ::setenv(agent::kTraceDirEnv, traces.c_str(), 1);
    if (c.max_records) ::setenv(agent::kMaxRecordsEnv, std::to_string(*c.max_records).c_str(), 1);
    if (c.depth) ::setenv(agent::kDepthEnv, std::to_string(*c.depth).c_str(), 1);
    std::vector<char*> argv;
    for (const auto& a : command) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    ::execvp(argv[0], argv.data());
    std::cerr << "mimic: cannot launch " << command[0] << ": " << std::strerror(errno) << std::endl;
    ::_exit(127);
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw Error(std::string("waitpid failed: ") + std::strerror(errno));
  }
  std::cerr << "mimic: " << count_records(traces) - before << " records written under " << traces.string() << "\n";
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return 1;
}

int cmd_generate(const CliConfig& c) {
  GenerationConfig g;
  g.trace_dir = c.traces.value_or(kDefaultTraces);
  g.candidates_path = c.candidates.value_or(kDefaultCandidates);
  g.output_dir = c.out.value_or(kDefaultOut);
  if (c.oracles) g.oracle_kinds = oracle_kinds(*c.oracles);
  g.dedup = c.dedup.value_or(true);
  g.overwrite = c.overwrite.value_or(false);
  g.depth_limit = c.depth.value_or(kDefaultDepthLimit);

  if (c.check.value_or(false)) {
    auto diffs = check_suite(g);
    if (diffs.empty()) {
      std::cout << "outputs identical\n";
      return kExitOk;
    }
    for (const auto& d : diffs) std::cout << d << "\n";
    std::cout << "outputs differ in " << diffs.size() << " files\n";
    return kExitCheckFailed;
  }
  EmissionReport report = emit_suite(g);
  std::cout << report.tests_generated << " tests generated from " << report.records_loaded << " records in "
            << g.output_dir << "\n";
  for (const auto& p : report.problems) std::cout << "problem " << p << "\n";
  return kExitOk;
}

}  // namespace

CliConfig CliConfig::merged_over(const CliConfig& base) const {
  CliConfig out = base;
  take(out.project, project);
  take(out.candidates, candidates);
  take(out.traces, traces);
  take(out.out, this->out);
  take(out.policy, policy);
  take(out.include, include);
  take(out.exclude, exclude);
  take(out.denylist, denylist);
  take(out.oracles, oracles);
  take(out.dedup, dedup);
  take(out.max_records, max_records);
  take(out.depth, depth);
  take(out.overwrite, overwrite);
  take(out.check, check);
  return out;
}

CliConfig parse_config_text(std::string_view text) {
  CliConfig c;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) continue;  // table header
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const Value v = parse_value(trim(line.substr(eq + 1)), line_no);
    auto scalar = [&]() -> const std::string& {
      if (v.list) throw ConfigError("config line " + std::to_string(line_no) + ": " + key + " expects a single value");
      return v.items.front();
    };
    if (key == "project") c.project = scalar();
    else if (key == "candidates") c.candidates = scalar();
    else if (key == "traces") c.traces = scalar();
    else if (key == "out") c.out = scalar();
    else if (key == "policy") c.policy = scalar();
    else if (key == "include") c.include = as_list(v);
    else if (key == "exclude") c.exclude = as_list(v);
    else if (key == "denylist") c.denylist = as_list(v);
    else if (key == "oracles") c.oracles = as_list(v);
    else if (key == "dedup") c.dedup = parse_bool(scalar(), line_no, key);
    else if (key == "no-dedup") c.dedup = !parse_bool(scalar(), line_no, key);
    else if (key == "max-records") c.max_records = parse_count(scalar(), line_no, key);
    else if (key == "depth") c.depth = parse_count(scalar(), line_no, key);
    else if (key == "overwrite") c.overwrite = parse_bool(scalar(), line_no, key);
    else if (key == "check") c.check = parse_bool(scalar(), line_no, key);
    else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return c;
}

int run(int argc, char** argv) {
  // Everything after `--` is the application command of `record`.
  std::vector<std::string> args;
  std::vector<std::string> command;
  bool in_command = false;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (in_command) command.push_back(a);
    else if (a == "--") in_command = true;
    else args.push_back(a);
  }
  std::reverse(args.begin(), args.end());  // CLI11 takes the vector reversed

  CLI::App app{"capture/replay test generation from recorded invocations", "mimic"};
  app.require_subcommand(1);
  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "key = value settings file (default ./mimic.toml if present)");

  CliConfig flags;
  std::string oracles_text;
  bool no_dedup = false, overwrite = false, check = false;

  auto* select = app.add_subcommand("select", "find methods under test and their mockable call sites");
  select->add_option("--project", flags.project, "source root to scan");
  select->add_option("--candidates", flags.candidates, "candidates file to write");
  select->add_option("--policy", flags.policy, "external type policy: project or package");
  select->add_option("--include", flags.include, "keep only methods whose id matches (repeatable)");
  select->add_option("--exclude", flags.exclude, "drop methods whose id matches (repeatable)");
  select->add_option("--denylist", flags.denylist, "extra type pattern never treated as external (repeatable)");

  auto* record = app.add_subcommand("record", "run an application with recording enabled: record [flags] -- cmd...");
  record->add_option("--candidates", flags.candidates, "candidates file");
  record->add_option("--traces", flags.traces, "trace directory");
  record->add_option("--max-records", flags.max_records, "records kept per method");
  record->add_option("--depth", flags.depth, "snapshot depth limit");

  auto* generate = app.add_subcommand("generate", "write tests from recorded traces");
  generate->add_option("--candidates", flags.candidates, "candidates file");
  generate->add_option("--traces", flags.traces, "trace directory");
  generate->add_option("--out", flags.out, "output directory");
  generate->add_option("--oracles", oracles_text, "comma-separated subset of output,parameter,call");
  generate->add_flag("--no-dedup", no_dedup, "keep duplicate records");
  generate->add_option("--depth", flags.depth, "depth the records were captured with");
  generate->add_flag("--overwrite", overwrite, "replace previously generated files");
  generate->add_flag("--check", check, "compare against the output directory instead of writing");

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (!oracles_text.empty()) flags.oracles = split_commas(oracles_text);
  if (no_dedup) flags.dedup = false;
  if (overwrite) flags.overwrite = true;
  if (check) flags.check = true;

  try {
    const CliConfig config = flags.merged_over(load_config_file(config_path));
    if (!command.empty() && !record->parsed()) throw ConfigError("`--` is only accepted by record");
    if (select->parsed()) return cmd_select(config);
    if (record->parsed()) return cmd_record(config, command);
    return cmd_generate(config);
  } catch (const ConfigError& e) {
    std::cerr << "mimic: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "mimic: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace mimic::cli
