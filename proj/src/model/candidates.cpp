#include "mimic/candidates.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mimic/errors.hpp"

namespace mimic {

namespace {

constexpr std::string_view kHeader =
    "# mimic candidate list (format 1)\n"
    "# One block per method under test. Delete a block to stop recording it.\n";

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ValidationError("malformed candidates file", "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

// Everything after the first `n` whitespace-separated tokens, trimmed.
std::string rest_after(std::string_view s, std::size_t n) {
  std::size_t i = 0;
  for (std::size_t k = 0; k < n; ++k) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
  }
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  auto end = s.size();
  while (end > i && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) --end;
  return std::string(s.substr(i, end - i));
}

bool parse_size(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_site(const CallSite& s) {
  std::string out = "site " + s.site_id + " ";
  if (const auto* f = std::get_if<FieldBinding>(&s.receiver)) {
    out += "field " + f->name;
  } else {
    out += "param " + std::to_string(std::get<ParameterBinding>(s.receiver).index);
  }
  out += " " + s.callee_type + "::" + s.callee_method + "/" + std::to_string(s.callee_arity);
  out += " at " + s.location.file + ":" + std::to_string(s.location.line);
  return out;
}

CallSite parse_site(const std::vector<std::string>& t, std::size_t line) {
  // site <id> field <name>|param <index> <Type>::<method>/<arity> at <file>:<line>
  if (t.size() != 7 || t[5] != "at") fail(line, "expected 'site <id> field|param <binding> <Type>::<method>/<arity> at <file>:<line>'");
  CallSite s;
  s.site_id = t[1];
  if (t[2] == "field") {
    s.receiver = FieldBinding{t[3]};
  } else if (t[2] == "param") {
    std::size_t index = 0;
    if (!parse_size(t[3], index)) fail(line, "parameter binding must be an index");
    s.receiver = ParameterBinding{index};
  } else {
    fail(line, "receiver binding must be 'field' or 'param'");
  }
  const std::string& callee = t[4];
  auto slash = callee.rfind('/');
  auto colons = callee.rfind("::", slash);
  if (slash == std::string::npos || colons == std::string::npos || colons == 0) {
    fail(line, "callee must be '<Type>::<method>/<arity>'");
  }
  s.callee_type = callee.substr(0, colons);
  s.callee_method = callee.substr(colons + 2, slash - colons - 2);
  if (s.callee_method.empty() || !parse_size(std::string_view(callee).substr(slash + 1), s.callee_arity)) {
    fail(line, "callee must be '<Type>::<method>/<arity>'");
  }
  const std::string& loc = t[6];
  auto colon = loc.rfind(':');
  std::size_t lineno = 0;
  if (colon == std::string::npos || colon == 0 || !parse_size(std::string_view(loc).substr(colon + 1), lineno)) {
    fail(line, "location must be '<file>:<line>'");
  }
  s.location = SourceLocation{loc.substr(0, colon), static_cast<int>(lineno)};
  return s;
}

}  // namespace

std::string format_candidates(const std::vector<MutDescriptor>& descriptors) {
  std::string out(kHeader);
  for (const auto& d : descriptors) {
    out += "\nmut " + d.mut_id + "\n";
    out += "  type " + d.declaring_type + "\n";
    if (!d.namespace_name.empty()) out += "  namespace " + d.namespace_name + "\n";
    if (d.return_kind == ReturnKind::none) {
      out += "  returns none\n";
    } else {
      out += "  returns value " + d.return_type + "\n";
    }
    for (const auto& p : d.params) out += "  param " + p.name + " " + p.type + "\n";
    for (const auto& s : d.call_sites) out += "  " + format_site(s) + "\n";
  }
  return out;
}

std::vector<MutDescriptor> parse_candidates(std::string_view text) {
  std::vector<MutDescriptor> out;
  std::vector<std::size_t> starts;
  bool have_returns = false;

  auto finish = [&]() {
    if (out.empty()) return;
    auto& d = out.back();
    const std::size_t where = starts.back();
    if (d.declaring_type.empty()) fail(where, "block lacks a 'type' line");
    if (!have_returns) fail(where, "block lacks a 'returns' line");
    // mut_id = <header>::<type>::<method>/<arity>
    auto slash = d.mut_id.rfind('/');
    auto first = d.mut_id.find("::");
    auto last = d.mut_id.rfind("::", slash);
    if (slash == std::string::npos || first == std::string::npos || last <= first) {
      fail(where, "mut id must be '<file>::<Type>::<method>/<arity>'");
    }
    d.header = d.mut_id.substr(0, first);
    d.method = d.mut_id.substr(last + 2, slash - last - 2);
    if (make_mut_id(d.header, d.declaring_type, d.method, d.params.size()) != d.mut_id) {
      fail(where, "mut id does not agree with its type and parameter count");
    }
    try {
      validate_descriptor(d);
    } catch (const ValidationError& e) {
      fail(where, e.what());
    }
  };

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    auto t = split(raw);
    if (t.empty() || t[0][0] == '#') continue;
    const std::string& key = t[0];
    if (key == "mut") {
      finish();
      if (t.size() != 2) fail(lineno, "expected 'mut <id>'");
      out.emplace_back();
      out.back().mut_id = t[1];
      starts.push_back(lineno);
      have_returns = false;
      continue;
    }
    if (out.empty()) fail(lineno, "'" + key + "' outside a mut block");
    auto& d = out.back();
    if (key == "type") {
      if (t.size() != 2) fail(lineno, "expected 'type <name>'");
      d.declaring_type = t[1];
    } else if (key == "namespace") {
      if (t.size() != 2) fail(lineno, "expected 'namespace <name>'");
      d.namespace_name = t[1];
    } else if (key == "returns") {
      if (t.size() == 2 && t[1] == "none") {
        d.return_kind = ReturnKind::none;
        d.return_type = "void";
      } else if (t.size() >= 3 && t[1] == "value") {
        d.return_kind = ReturnKind::value;
        d.return_type = rest_after(raw, 2);
      } else {
        fail(lineno, "expected 'returns none' or 'returns value <type>'");
      }
      have_returns = true;
    } else if (key == "param") {
      if (t.size() < 3) fail(lineno, "expected 'param <name> <type>'");
      d.params.push_back(Parameter{t[1], rest_after(raw, 2)});
    } else if (key == "site") {
      d.call_sites.push_back(parse_site(t, lineno));
    } else {
      fail(lineno, "unknown key '" + key + "'");
    }
  }
  finish();

  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (out[k].mut_id == out[i].mut_id) fail(starts[i], "duplicate mut id '" + out[i].mut_id + "'");
    }
  }
  return out;
}

void write_candidates(const std::vector<MutDescriptor>& descriptors, const std::string& path) {
  validate_candidate_set(descriptors);
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write candidates file '" + path + "'");
  out << format_candidates(descriptors);
  if (!out) throw Error("cannot write candidates file '" + path + "'");
}

std::vector<MutDescriptor> load_candidates(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read candidates file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_candidates(buf.str());
}

}  // namespace mimic
