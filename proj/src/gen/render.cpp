#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "mimic/codec.hpp"
#include "mimic/generate.hpp"

namespace mimic {

namespace {

std::string identifier(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_';
  return out;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c >= 0x20 && c < 0x7f) {
          out += static_cast<char>(c);
        } else {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\%03o", c);
          out += buf;
        }
    }
  }
  return out + "\"";
}

std::string text_literal(const std::string& type, const std::string& value) {
  std::string q = quoted(value);
  if (value.find('\0') != std::string::npos) q += ", " + std::to_string(value.size());
  if (type == "std::string") return "std::string(" + q + ")";
  if (type == "std::string_view") return "std::string_view(" + q + ")";
  return "static_cast<const char*>(" + q + ")";
}

std::string double_literal(double v) {
  if (std::isnan(v)) return "std::numeric_limits<double>::quiet_NaN()";
  if (std::isinf(v)) return v > 0 ? "std::numeric_limits<double>::infinity()" : "-std::numeric_limits<double>::infinity()";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

// Integer literal with a suffix that gives it exactly `type`.
std::optional<std::string> integer_literal(const std::string& type, const Scalar& value) {
  static const std::map<std::string, std::string> suffix = {
      {"int", ""}, {"long", "L"}, {"long long", "LL"}, {"unsigned", "U"}, {"unsigned long", "UL"},
      {"unsigned long long", "ULL"}};
  std::string digits;
  bool is_min = false;
  if (const auto* i = std::get_if<std::int64_t>(&value)) {
    digits = std::to_string(*i);
    is_min = *i == std::numeric_limits<std::int64_t>::min() ||
             (type == "int" && *i == std::numeric_limits<int>::min());
  } else if (const auto* u = std::get_if<std::uint64_t>(&value)) {
    digits = std::to_string(*u);
  } else {
    return std::nullopt;
  }
  if (auto it = suffix.find(type); it != suffix.end()) {
    if (is_min) {
      // The negated maximum keeps the literal in range.
      std::string max = digits.substr(1);
      max.back() = static_cast<char>(max.back() - 1);
      return "(-" + max + it->second + " - 1)";
    }
    return digits + it->second;
  }
  std::string wide = is_min ? "(-9223372036854775807LL - 1)" : digits + (digits.size() > 9 ? "LL" : "");
  return "static_cast<" + type + ">(" + wide + ")";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string upper_first(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

struct SpelledType {
  std::string core;  // without top-level const and references
  bool mutable_lvalue_ref = false;
};

SpelledType decay(std::string t) {
  SpelledType out;
  auto trim = [](std::string& s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  };
  trim(t);
  bool ref = false;
  bool rvalue = false;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "&&") == 0) {
    rvalue = true;
    t.resize(t.size() - 2);
  } else if (!t.empty() && t.back() == '&') {
    ref = true;
    t.pop_back();
  }
  trim(t);
  bool is_const = false;
  if (t.size() > 6 && t.compare(t.size() - 6, 6, " const") == 0 && t[t.size() - 7] != '*') {
    is_const = true;
    t.resize(t.size() - 6);
  }
  if (t.rfind("const ", 0) == 0 && t.find('*') == std::string::npos) {
    is_const = true;
    t = t.substr(6);
  }
  trim(t);
  out.core = t;
  out.mutable_lvalue_ref = ref && !is_const && !rvalue;
  return out;
}

bool contains_opaque(const Snapshot& s) { return !opaque_paths(s).empty(); }

bool contains_ref_root(const Snapshot& s) { return s.kind() == NodeKind::ref; }

std::string suite_name(const std::string& mut_id) { return identifier(sanitize_mut_id(mut_id)); }

// Resource files of one record. Code refers to them relative to the MUT's
// resource directory; files are placed relative to the output directory.
class Resources {
 public:
  Resources(const std::string& mut_id, std::string dir)
      : dir_(std::move(dir)), file_prefix_("resources/" + suite_name(mut_id) + "/") {}

  // A Snapshot-typed expression: a literal when possible, else a resource.
  std::string value(const Snapshot& s, const std::string& name) {
    if (s.kind() == NodeKind::null) return "mimic::Snapshot::null()";
    if (auto lit = cpp_literal(s)) return "mimic::value(" + *lit + ")";
    return resource(s, name);
  }

  std::string resource(const Snapshot& s, const std::string& name) {
    const std::string rel = dir_ + name + ".json";
    if (!written_.count(rel)) {
      written_.insert(rel);
      files_.push_back({file_prefix_ + rel, encode_snapshot(s) + "\n"});
    }
    return "resource(\"" + rel + "\")";
  }

  std::string args(const std::vector<Snapshot>& args, const std::string& prefix) {
    if (args.empty()) return "{}";
    std::vector<std::string> lits;
    for (const auto& a : args) {
      auto lit = cpp_literal(a);
      if (!lit) break;
      lits.push_back(*lit);
    }
    if (lits.size() == args.size()) return "mimic::args(" + join(lits, ", ") + ")";
    std::vector<std::string> exprs;
    for (std::size_t j = 0; j < args.size(); ++j) exprs.push_back(value(args[j], prefix + "_arg" + std::to_string(j + 1)));
    return "{" + join(exprs, ", ") + "}";
  }

  std::vector<ResourceFile> take() { return std::move(files_); }

 private:
  std::string dir_;
  std::string file_prefix_;
  std::set<std::string> written_;
  std::vector<ResourceFile> files_;
};

std::string test_header(const std::string& suite, const std::string& name) {
  return "TEST(" + suite + ", " + name + ") {\n";
}

GeneratedTest make_test(const InvocationRecord& record, OracleKind kind, std::string body,
                        std::vector<ResourceFile> resources) {
  GeneratedTest t;
  t.mut_id = record.mut_id;
  t.invocation_uid = record.invocation_uid;
  t.oracle_kind = kind;
  t.test_name = test_name(record.mut_id, record.invocation_uid, kind);
  t.source_text = test_header(suite_name(record.mut_id), t.test_name) + body + "}\n";
  t.resource_files = std::move(resources);
  return t;
}

}  // namespace

std::string test_name(const std::string& mut_id, const std::string& uid, OracleKind kind) {
  return "test_" + identifier(sanitize_mut_id(mut_id)) + "_" + identifier(uid) + "_" + std::string(to_string(kind));
}

std::string test_file_name(const std::string& mut_id) { return "test_" + identifier(sanitize_mut_id(mut_id)) + ".cpp"; }

std::optional<std::string> cpp_literal(const Snapshot& s) {
  if (s.node_id()) return std::nullopt;
  const std::string& type = s.type_name();
  if (s.kind() == NodeKind::text) {
    if (type != "std::string" && type != "std::string_view" && type != "const char*") return std::nullopt;
    return text_literal(type, s.text_value());
  }
  if (s.kind() != NodeKind::primitive || type.empty()) return std::nullopt;
  const Scalar& v = s.scalar();
  if (const auto* b = std::get_if<bool>(&v)) {
    if (type != "bool") return std::nullopt;
    return std::string(*b ? "true" : "false");
  }
  if (const auto* d = std::get_if<double>(&v)) {
    if (type == "double") return double_literal(*d);
    if (type == "float" || type == "long double") return "static_cast<" + type + ">(" + double_literal(*d) + ")";
    return std::nullopt;
  }
  if (type == "bool" || type == "double" || type == "float" || type == "long double") return std::nullopt;
  return integer_literal(type, v);
}

std::variant<ArrangeAct, std::string> render_arrange_act(const InvocationRecord& record,
                                                         const MutDescriptor& descriptor,
                                                         const std::vector<StubDirective>& plan,
                                                         std::size_t depth_limit) {
  if (record.mut_id != descriptor.mut_id) return std::string("record belongs to another method");
  if (record.receiver.kind() != NodeKind::object) return std::string("receiver snapshot is not an object");
  const auto fields = descriptor.mockable_fields();
  const std::set<std::string> mockable_fields(fields.begin(), fields.end());
  for (const auto& path : opaque_paths(record.receiver)) {
    if (path.rfind("$.", 0) != 0 || !mockable_fields.count(path.substr(2))) {
      return "receiver holds an external value at " + path + " that is not a mockable field";
    }
  }
  const auto mock_params = descriptor.mockable_params();
  const std::set<std::size_t> mockable_params(mock_params.begin(), mock_params.end());
  if (record.args.size() != descriptor.params.size()) return std::string("argument count differs from the descriptor");
  for (std::size_t i = 0; i < record.args.size(); ++i) {
    if (mockable_params.count(i)) continue;
    const std::string name = descriptor.params[i].name;
    if (contains_opaque(record.args[i])) return "argument '" + name + "' holds an external value";
    if (contains_ref_root(record.args[i])) return "argument '" + name + "' shares state with another value";
    if (decay(descriptor.params[i].type).core.rfind("std::unique_ptr<", 0) == 0) {
      return "argument '" + name + "' is a std::unique_ptr";
    }
  }
  for (const auto& c : record.calls) {
    if (contains_opaque(c.return_value)) return "a mocked call on " + c.site_id + " returned an external value";
  }

  ArrangeAct out;
  out.resource_dir = record.invocation_uid + "/";
  Resources res(record.mut_id, out.resource_dir);
  std::ostringstream a;

  // Names used by the generated body.
  std::set<std::string> taken = {"mocks", "receiver", "actual", "resource"};
  auto fresh = [&](std::string base) {
    std::string name = base;
    for (int n = 2; taken.count(name); ++n) name = base + std::to_string(n);
    taken.insert(name);
    return name;
  };

  if (depth_limit == kDefaultDepthLimit) {
    a << "  mimic::MockScope mocks;\n";
  } else {
    a << "  mimic::MockScope mocks{" << depth_limit << "};\n";
  }
  std::vector<std::string> quoted_fields;
  for (const auto& f : fields) quoted_fields.push_back(quoted(f));
  a << "  auto receiver = mimic::restore_receiver<" << descriptor.declaring_type << ">("
    << res.resource(record.receiver, "receiver");
  if (!quoted_fields.empty()) a << ", {" << join(quoted_fields, ", ") << "}";
  a << ");\n";

  // One mock per binding, in first-use order.
  std::vector<std::pair<ReceiverBinding, std::string>> mocks;
  std::map<std::size_t, std::string> param_mock;
  for (const auto& site : descriptor.call_sites) {
    auto it = std::find_if(mocks.begin(), mocks.end(), [&](const auto& m) { return m.first == site.receiver; });
    if (it != mocks.end()) {
      out.mock_for_site[site.site_id] = it->second;
      continue;
    }
    std::string label;
    if (const auto* f = std::get_if<FieldBinding>(&site.receiver)) {
      label = f->name;
    } else {
      label = descriptor.params[std::get<ParameterBinding>(site.receiver).index].name;
    }
    std::string stem = identifier(label);
    while (stem.size() > 1 && stem.back() == '_') stem.pop_back();
    std::string var = fresh("mock" + upper_first(stem));
    std::vector<std::string> bound;
    for (const auto& s : descriptor.call_sites) {
      if (s.receiver == site.receiver) {
        bound.push_back("{" + quoted(s.site_id) + ", " + quoted(s.callee_method) + ", " + std::to_string(s.callee_arity) +
                        "}");
      }
    }
    a << "  auto " << var << " = mocks.mock<" << site.callee_type << ">(" << quoted(label) << ", {" << join(bound, ", ")
      << "});\n";
    if (const auto* f = std::get_if<FieldBinding>(&site.receiver)) {
      a << "  mimic::inject_mock_field(*receiver, " << quoted(f->name) << ", " << var << ");\n";
    } else {
      param_mock[std::get<ParameterBinding>(site.receiver).index] = var;
    }
    mocks.emplace_back(site.receiver, var);
    out.mock_for_site[site.site_id] = var;
  }

  for (std::size_t d = 0; d < plan.size(); ++d) {
    const auto& directive = plan[d];
    auto mock = out.mock_for_site.find(directive.site_id);
    if (mock == out.mock_for_site.end()) return "call recorded on unknown site " + directive.site_id;
    const std::string prefix = "stub" + std::to_string(d + 1);
    std::vector<std::string> returns;
    for (std::size_t k = 0; k < directive.returns.size(); ++k) {
      returns.push_back(res.value(directive.returns[k], prefix + "_ret" + std::to_string(k + 1)));
    }
    a << "  " << mock->second << ".when(" << quoted(directive.site_id) << ", " << res.args(directive.matched_args, prefix)
      << ").then_return(" << (returns.size() == 1 ? returns[0] : "{" + join(returns, ", ") + "}") << ");\n";
  }

  std::vector<std::string> call_args;
  for (std::size_t i = 0; i < descriptor.params.size(); ++i) {
    const auto& p = descriptor.params[i];
    const SpelledType st = decay(p.type);
    const bool smart = st.core.rfind("std::shared_ptr<", 0) == 0;
    if (auto m = param_mock.find(i); m != param_mock.end()) {
      call_args.push_back(m->second + (p.type.find("shared_ptr") != std::string::npos ? ".shared()" : ".get()"));
      continue;
    }
    const Snapshot& v = record.args[i];
    if (v.kind() == NodeKind::null) {
      call_args.push_back("nullptr");
      continue;
    }
    const bool pointer = !st.core.empty() && st.core.back() == '*';
    auto lit = cpp_literal(v);
    if (lit && !pointer && !smart && !st.mutable_lvalue_ref) {
      call_args.push_back(*lit);
      continue;
    }
    std::string var = fresh(identifier(p.name));
    const std::string arg_res = "arg" + std::to_string(i + 1);
    if (pointer || smart) {
      a << "  auto " << var << " = mimic::restore_shared<" << v.type_name() << ">(" << res.resource(v, arg_res)
        << ");\n";
      call_args.push_back(pointer ? var + ".get()" : var);
    } else if (lit) {
      a << "  auto " << var << " = " << *lit << ";\n";
      call_args.push_back(var);
    } else {
      a << "  auto " << var << " = mimic::restore<" << v.type_name() << ">(" << res.resource(v, arg_res) << ");\n";
      call_args.push_back(var);
    }
  }

  const std::string call = "receiver->" + descriptor.method + "(" + join(call_args, ", ") + ")";
  out.arrange = a.str();
  if (record.raised()) {
    out.act_discarding = "  try {\n    " + call + ";\n  } catch (...) {\n  }\n";
  } else {
    out.act_discarding = "  " + call + ";\n";
    if (descriptor.return_kind == ReturnKind::value) out.act_capturing = "  auto actual = " + call + ";\n";
  }
  out.resources = res.take();
  return out;
}

RenderedTest render_output_oracle(const InvocationRecord& record, const MutDescriptor& descriptor,
                                  const ArrangeAct& fragment) {
  if (record.raised()) return std::string("the invocation raised " + std::get<Raised>(record.outcome).error_type);
  if (descriptor.return_kind == ReturnKind::none) return std::string("the method returns void");
  const Snapshot& expected = std::get<Returned>(record.outcome).value;
  if (expected.kind() == NodeKind::opaque) return std::string("the returned value is an external object");

  Resources res(record.mut_id, fragment.resource_dir);
  std::string check;
  const auto lit = cpp_literal(expected);
  const bool direct = lit && (expected.kind() == NodeKind::primitive || expected.type_name() == "std::string");
  if (direct) {
    check = "  EXPECT_EQ(actual, " + *lit + ");\n";
  } else {
    check = "  MIMIC_EXPECT(mimic::expect_snapshot(actual, " +
            (expected.kind() == NodeKind::null ? std::string("mimic::Snapshot::null()")
                                               : res.resource(expected, "return")) +
            "));\n";
  }
  std::string body = fragment.arrange + "\n" + fragment.act_capturing + "\n" + check;
  auto resources = fragment.resources;
  for (auto& r : res.take()) resources.push_back(std::move(r));
  return make_test(record, OracleKind::output, std::move(body), std::move(resources));
}

RenderedTest render_parameter_oracle(const InvocationRecord& record, const MutDescriptor& descriptor,
                                     const ArrangeAct& fragment) {
  (void)descriptor;
  if (record.calls.empty()) return std::string("no mockable calls were recorded");
  const auto plan = build_stub_plan(record);
  // Same resource names as the stubs so argument files are shared.
  Resources res(record.mut_id, fragment.resource_dir);
  std::string checks;
  for (std::size_t d = 0; d < plan.size(); ++d) {
    const auto& directive = plan[d];
    checks += "  MIMIC_EXPECT(mocks.verify_at_least_once(" + fragment.mock_for_site.at(directive.site_id) +
              ".handle(), " + quoted(directive.site_id) + ", " +
              res.args(directive.matched_args, "stub" + std::to_string(d + 1)) + "));\n";
  }
  std::string body = fragment.arrange + "\n" + fragment.act_discarding + "\n" + checks;
  auto resources = fragment.resources;
  for (auto& r : res.take()) {
    bool present = std::any_of(resources.begin(), resources.end(),
                               [&](const ResourceFile& f) { return f.relative_path == r.relative_path; });
    if (!present) resources.push_back(std::move(r));
  }
  return make_test(record, OracleKind::parameter, std::move(body), std::move(resources));
}

RenderedTest render_call_oracle(const InvocationRecord& record, const MutDescriptor& descriptor,
                                const ArrangeAct& fragment) {
  (void)descriptor;
  if (record.calls.empty()) return std::string("no mockable calls were recorded");
  std::vector<const MockableCallRecord*> calls;
  for (const auto& c : record.calls) calls.push_back(&c);
  std::stable_sort(calls.begin(), calls.end(), [](const auto* a, const auto* b) { return a->seq < b->seq; });
  std::vector<std::pair<std::string, std::size_t>> runs;
  for (const auto* c : calls) {
    if (!runs.empty() && runs.back().first == c->site_id) {
      ++runs.back().second;
    } else {
      runs.emplace_back(c->site_id, 1);
    }
  }
  std::vector<std::string> steps;
  for (const auto& [site, n] : runs) {
    steps.push_back("{" + fragment.mock_for_site.at(site) + ", " + quoted(site) + ", " + std::to_string(n) + "}");
  }
  std::string check = "  MIMIC_EXPECT(mocks.verify_in_order({" + join(steps, ", ") + "}));\n";
  std::string body = fragment.arrange + "\n" + fragment.act_discarding + "\n" + check;
  return make_test(record, OracleKind::call, std::move(body), fragment.resources);
}

}  // namespace mimic
