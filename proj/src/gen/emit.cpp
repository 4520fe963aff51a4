#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "mimic/candidates.hpp"
#include "mimic/codec.hpp"
#include "mimic/generate.hpp"

namespace fs = std::filesystem;

namespace mimic {

namespace {

constexpr OracleKind kAllOracles[] = {OracleKind::output, OracleKind::parameter, OracleKind::call};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string file_preamble(const MutDescriptor& d) {
  std::string suite = test_file_name(d.mut_id);
  suite = suite.substr(5, suite.size() - 9);  // strip `test_` and `.cpp`
  std::ostringstream out;
  out << "// Generated by mimic from recorded invocations of " << d.mut_id << ".\n"
      << "#include <limits>\n"
      << "#include <string>\n\n"
      << "#include <mimic/gtest.hpp>\n"
      << "#include <mimic/restore.hpp>\n\n"
      << "#include \"" << d.header << "\"\n\n"
      << "namespace {\n\n"
      << "mimic::Snapshot resource(const std::string& name) {\n"
      << "  return mimic::load_snapshot(mimic::resource_path(__FILE__, \"resources/" << suite << "/\" + name));\n"
      << "}\n\n"
      << "}  // namespace\n";
  return out.str();
}

RenderedTest render(OracleKind kind, const InvocationRecord& r, const MutDescriptor& d, const ArrangeAct& f) {
  switch (kind) {
    case OracleKind::output: return render_output_oracle(r, d, f);
    case OracleKind::parameter: return render_parameter_oracle(r, d, f);
    case OracleKind::call: return render_call_oracle(r, d, f);
  }
  return std::string("unknown oracle");
}

// Files a previous run may have produced.
bool generated_path(const std::string& rel) {
  if (rel == kReportFileName) return true;
  if (rel.rfind("resources/", 0) == 0) return true;
  return rel.find('/') == std::string::npos && rel.rfind("test_", 0) == 0 && fs::path(rel).extension() == ".cpp";
}

std::set<std::string> existing_generated(const fs::path& out) {
  std::set<std::string> found;
  std::error_code ec;
  if (!fs::is_directory(out, ec)) return found;
  for (auto it = fs::recursive_directory_iterator(out); it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    std::string rel = fs::relative(it->path(), out).generic_string();
    if (generated_path(rel)) found.insert(rel);
  }
  return found;
}

}  // namespace

std::string EmissionReport::format() const {
  std::ostringstream out;
  out << "# mimic generation report\n";
  out << "records loaded: " << records_loaded << "\n";
  out << "tests generated: " << tests_generated << "\n";
  for (const auto& m : muts) {
    out << "\nmut " << m.mut_id << "\n";
    out << "  records: " << m.records << " (" << m.duplicates << " duplicates dropped)\n";
    out << "  tests: " << m.tests << "\n";
    for (const auto& [reason, n] : m.skipped) out << "  skipped " << reason << " x" << n << "\n";
  }
  if (!problems.empty()) out << "\n";
  for (const auto& p : problems) out << "problem " << p << "\n";
  return out.str();
}

Suite build_suite(const GenerationConfig& config) {
  if (config.oracle_kinds.empty()) throw ConfigError("at least one oracle kind is required");
  std::error_code ec;
  const fs::path traces(config.trace_dir);
  if (config.trace_dir.empty() || !fs::is_directory(traces, ec)) {
    throw ConfigError("trace directory '" + config.trace_dir + "' cannot be read");
  }
  std::vector<MutDescriptor> candidates;
  try {
    candidates = load_candidates(config.candidates_path);
  } catch (const Error& e) {
    throw ConfigError("candidates file '" + config.candidates_path + "': " + e.what());
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) { return a.mut_id < b.mut_id; });
  const std::set<OracleKind> enabled(config.oracle_kinds.begin(), config.oracle_kinds.end());

  Suite suite;
  std::set<std::string> known_dirs;
  for (const auto& d : candidates) {
    const std::string dir_name = sanitize_mut_id(d.mut_id);
    known_dirs.insert(dir_name);
    const fs::path dir = traces / dir_name;

    std::vector<InvocationRecord> records;
    if (fs::is_directory(dir, ec)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (e.is_regular_file() && e.path().extension() == ".rec" && name[0] != '.') files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        try {
          records.push_back(decode_record(read_file(f), d));
        } catch (const Error& e) {
          suite.report.problems.push_back(dir_name + "/" + f.filename().string() + ": " + e.what());
        }
      }
    }
    std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
      return std::tie(a.timestamp, a.invocation_uid) < std::tie(b.timestamp, b.invocation_uid);
    });
    suite.report.records_loaded += records.size();

    MutReport mr;
    mr.mut_id = d.mut_id;
    const std::size_t loaded = records.size();
    if (config.dedup) records = dedupe_records(std::move(records));
    mr.records = records.size();
    mr.duplicates = loaded - records.size();

    std::string body;
    for (const auto& r : records) {
      const auto plan = build_stub_plan(r);
      auto fragment = render_arrange_act(r, d, plan, config.depth_limit);
      if (const auto* reason = std::get_if<std::string>(&fragment)) {
        ++mr.skipped["record: " + *reason];
        continue;
      }
      const auto& f = std::get<ArrangeAct>(fragment);
      for (OracleKind kind : kAllOracles) {
        if (!enabled.count(kind)) continue;
        RenderedTest t = render(kind, r, d, f);
        if (const auto* reason = std::get_if<std::string>(&t)) {
          ++mr.skipped[std::string(to_string(kind)) + ": " + *reason];
          continue;
        }
        auto& test = std::get<GeneratedTest>(t);
        body += "\n" + test.source_text;
        for (auto& res : test.resource_files) suite.files.emplace(res.relative_path, std::move(res.bytes));
        ++mr.tests;
      }
    }
    if (mr.tests > 0) suite.files[test_file_name(d.mut_id)] = file_preamble(d) + body;
    suite.report.tests_generated += mr.tests;
    if (loaded > 0 || fs::is_directory(dir, ec)) suite.report.muts.push_back(std::move(mr));
  }

  std::vector<std::string> orphans;
  for (const auto& e : fs::directory_iterator(traces)) {
    const auto name = e.path().filename().string();
    if (e.is_directory() && name[0] != '.' && !known_dirs.count(name)) orphans.push_back(name);
  }
  std::sort(orphans.begin(), orphans.end());
  for (const auto& o : orphans) suite.report.problems.push_back(o + ": no candidate describes this trace directory");

  suite.files[kReportFileName] = suite.report.format();
  return suite;
}

EmissionReport emit_suite(const GenerationConfig& config) {
  Suite suite = build_suite(config);
  const fs::path out(config.output_dir);
  if (config.output_dir.empty()) throw ConfigError("no output directory given");
  std::error_code ec;
  if (fs::exists(out, ec)) {
    if (!fs::is_directory(out, ec)) throw ConfigError("output path '" + config.output_dir + "' is not a directory");
    if (!fs::is_empty(out, ec) && !config.overwrite) {
      throw ConfigError("output directory '" + config.output_dir + "' is not empty; pass --overwrite to replace it");
    }
    for (const auto& rel : existing_generated(out)) fs::remove(out / rel, ec);
    fs::remove_all(out / "resources", ec);
  }
  for (const auto& [rel, bytes] : suite.files) {
    const fs::path p = out / rel;
    fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    f << bytes;
    if (!f) throw Error("cannot write " + p.string());
  }
  return suite.report;
}

std::vector<std::string> check_suite(const GenerationConfig& config) {
  Suite suite = build_suite(config);
  const fs::path out(config.output_dir);
  std::vector<std::string> diffs;
  for (const auto& [rel, bytes] : suite.files) {
    std::error_code ec;
    if (!fs::is_regular_file(out / rel, ec)) {
      diffs.push_back("missing " + rel);
    } else if (read_file(out / rel) != bytes) {
      diffs.push_back("differs " + rel);
    }
  }
  for (const auto& rel : existing_generated(out)) {
    if (!suite.files.count(rel)) diffs.push_back("unexpected " + rel);
  }
  return diffs;
}

}  // namespace mimic
