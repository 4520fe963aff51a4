#include <fnmatch.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "mimic/select.hpp"
#include "parser.hpp"

namespace fs = std::filesystem;

namespace mimic {

extern const char* const kDefaultDenylistText;

std::vector<std::string> parse_denylist(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

std::vector<std::string> SelectionConfig::default_type_denylist() { return parse_denylist(kDefaultDenylistText); }

bool glob_match(const std::string& pattern, const std::string& text) {
  return ::fnmatch(pattern.c_str(), text.c_str(), 0) == 0;
}

std::string_view to_string(ScanIssue::Kind kind) {
  switch (kind) {
    case ScanIssue::Kind::skipped_file: return "skipped-file";
    case ScanIssue::Kind::unresolved_receiver: return "unresolved-receiver";
    case ScanIssue::Kind::unsubstitutable_receiver: return "unsubstitutable-receiver";
    case ScanIssue::Kind::ineligible_method: return "ineligible-method";
    case ScanIssue::Kind::not_instrumented: return "not-instrumented";
  }
  return "issue";
}

std::string format_scan_report(const ScanReport& report, std::size_t candidates) {
  std::ostringstream out;
  out << "# mimic scan report\n";
  out << "files scanned: " << report.files_scanned << "\n";
  out << "candidates: " << candidates << "\n";
  out << "issues: " << report.issues.size() << "\n";
  for (const auto& issue : report.issues) {
    out << to_string(issue.kind) << ' ' << issue.file << ':' << issue.line << ' ' << issue.message << "\n";
  }
  return out.str();
}

namespace {

std::string strip_template_args(const std::string& name) {
  std::string out;
  int depth = 0;
  for (char c : name) {
    if (c == '<') ++depth;
    if (depth == 0) out += c;
    if (c == '>') --depth;
  }
  return out;
}

}  // namespace

bool classify_external(const std::string& type_name, const std::string& usage_namespace, const ProjectIndex& index,
                       const SelectionConfig& config) {
  for (const auto& pattern : config.type_denylist) {
    if (glob_match(pattern, type_name)) return false;
  }
  auto it = index.types.find(strip_template_args(type_name));
  if (it == index.types.end()) return true;
  if (config.external_type_policy == ExternalTypePolicy::outside_project) return false;
  return it->second.namespace_name != usage_namespace;
}

namespace {

using scan::ClassDecl;
using scan::MethodDecl;
using scan::Scope;
using scan::Token;
using scan::Tokens;

const std::set<std::string> kSourceExtensions = {".hpp", ".h", ".hh", ".hxx", ".cpp", ".cc", ".cxx", ".ipp", ".inl"};
const std::set<std::string> kImplementationExtensions = {".cpp", ".cc", ".cxx"};

const std::set<std::string> kStatementWords = {"return", "throw",  "case",   "goto",     "else",     "do",
                                               "new",    "delete", "sizeof", "typeid",   "co_return", "co_await",
                                               "co_yield", "using", "not",   "and",      "or",       "if",
                                               "while",  "for",    "switch", "static_cast", "const_cast",
                                               "reinterpret_cast", "dynamic_cast"};

// `other` covers weak_ptr and smart pointers nested in pointers.
enum class Holder { value, shared, unique, other };

struct TypeShape {
  Holder holder = Holder::value;
  int depth = 0;
  bool reference = false;
  bool const_pointee = false;
  bool const_slot = false;  // the pointer or smart pointer itself is const
  bool unresolved = false;
  std::string core;
};

std::string compact(const Tokens& tokens) {
  std::string s = scan::spell(tokens);
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ' ' && i > 0 && s[i - 1] == ',') continue;
    out += s[i];
  }
  if (out.rfind("::", 0) == 0) out = out.substr(2);
  return out;
}

class Scanner {
 public:
  explicit Scanner(const SelectionConfig& config) : config_(config) {}

  ScanResult run() {
    fs::path root(config_.project_root);
    std::error_code ec;
    if (config_.project_root.empty() || !fs::is_directory(root, ec)) {
      throw ConfigError("project root '" + config_.project_root + "' is not a directory");
    }
    std::vector<std::string> files = source_files(root);
    result_.report.files_scanned = files.size();

    for (const auto& rel : files) parse_one(root, rel);
    for (const auto& cls : project_.classes) {
      if (!cls->name.empty()) classes_.emplace(cls->name, cls.get());
    }
    build_index();
    for (const auto& a : project_.aliases) aliases_.emplace(a.name, &a);
    attach_definitions();

    for (const auto& cls : project_.classes) {
      if (cls->name.empty() || classes_.at(cls->name) != cls.get()) continue;
      select_class(*cls);
    }
    finish();
    return std::move(result_);
  }

 private:
  static std::vector<std::string> source_files(const fs::path& root) {
    std::vector<std::string> out;
    auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied);
    for (; it != fs::recursive_directory_iterator(); ++it) {
      const auto& p = it->path();
      if (it->is_directory() && p.filename().string().rfind('.', 0) == 0) {
        it.disable_recursion_pending();
        continue;
      }
      if (it->is_regular_file() && kSourceExtensions.count(p.extension().string())) {
        out.push_back(fs::relative(p, root).generic_string());
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void parse_one(const fs::path& root, const std::string& rel) {
    std::ifstream in(root / rel, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::size_t classes = project_.classes.size();
    const std::size_t aliases = project_.aliases.size();
    const std::size_t defs = project_.definitions.size();
    project_.files.push_back({rel, {}, {}, {}, {}});
    try {
      if (!in) throw scan::SyntaxError(0, "cannot read file");
      project_.files.back().tokens = scan::lex(ss.str());
      scan::parse_file(project_, project_.files.size() - 1);
    } catch (const scan::SyntaxError& e) {
      project_.classes.resize(classes);
      project_.aliases.resize(aliases);
      project_.definitions.resize(defs);
      project_.files.back() = {rel, {}, {}, {}, {}};
      issue(ScanIssue::Kind::skipped_file, rel, e.line(), std::string("cannot parse: ") + e.what());
    }
  }

  void build_index() {
    auto add = [&](const std::string& name, const std::string& ns, std::size_t file, int line) {
      if (name.empty()) return;
      result_.index.types.emplace(name, ProjectIndex::TypeInfo{name, ns, project_.files[file].path, line});
    };
    for (const auto& cls : project_.classes) add(cls->name, cls->namespace_name, cls->file, cls->line);
    for (std::size_t f = 0; f < project_.files.size(); ++f) {
      for (const auto& e : project_.files[f].enums) {
        auto pos = e.rfind("::");
        std::string ns = pos == std::string::npos ? "" : e.substr(0, pos);
        if (classes_.count(ns)) ns = classes_.at(ns)->namespace_name;
        add(e, ns, f, 0);
      }
    }
  }

  void issue(ScanIssue::Kind kind, const std::string& file, int line, std::string message) {
    result_.report.issues.push_back({kind, file, line, std::move(message)});
  }

  // Name lookup: enclosing classes, enclosing namespaces, then using-directives.
  template <class Exists>
  std::optional<std::string> lookup(const std::string& spelled, const Scope& scope, Exists exists) const {
    if (spelled.rfind("::", 0) == 0) {
      std::string s = spelled.substr(2);
      return exists(s) ? std::optional(s) : std::nullopt;
    }
    for (auto c = scope.classes.rbegin(); c != scope.classes.rend(); ++c) {
      std::string cand = *c + "::" + spelled;
      if (exists(cand)) return cand;
    }
    std::string ns = scope.namespace_name;
    while (true) {
      std::string cand = ns.empty() ? spelled : ns + "::" + spelled;
      if (exists(cand)) return cand;
      if (ns.empty()) break;
      auto pos = ns.rfind("::");
      ns = pos == std::string::npos ? "" : ns.substr(0, pos);
    }
    for (const auto& u : project_.files[scope.file].using_namespaces) {
      std::string cand = (u.rfind("::", 0) == 0 ? u.substr(2) : u) + "::" + spelled;
      if (exists(cand)) return cand;
    }
    return std::nullopt;
  }

  const ClassDecl* find_class(const Tokens& spelled, const Scope& scope) const {
    auto name = lookup(strip_template_args(compact_keep_global(spelled)), scope,
                       [&](const std::string& n) { return classes_.count(n) > 0; });
    return name ? classes_.at(*name) : nullptr;
  }

  static std::string compact_keep_global(const Tokens& tokens) {
    std::string s = scan::spell(tokens);
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == ' ' && i > 0 && s[i - 1] == ',') continue;
      out += s[i];
    }
    return out;
  }

  TypeShape analyze(Tokens type, const Scope& scope, int alias_depth = 0) const {
    TypeShape shape;
    type.erase(std::remove_if(type.begin(), type.end(),
                              [](const Token& t) {
                                return t.is("typename") || t.is("struct") || t.is("class") || t.is("volatile") ||
                                       t.is("mutable");
                              }),
               type.end());
    while (!type.empty() && (type.back().is("&") || type.back().is("&&"))) {
      shape.reference = true;
      type.pop_back();
    }
    std::size_t run = type.size();
    while (run > 0 && (type[run - 1].is("*") || type[run - 1].is("const"))) --run;
    bool seen_star = false;
    for (std::size_t k = run; k < type.size(); ++k) {
      if (type[k].is("*")) {
        seen_star = true;
        ++shape.depth;
        shape.const_slot = false;
      } else if (!seen_star) {
        shape.const_pointee = true;
      } else {
        shape.const_slot = true;
      }
    }
    type.resize(run);
    bool leading_const = false;
    while (!type.empty() && type.front().is("const")) {
      leading_const = true;
      type.erase(type.begin());
    }
    if (leading_const) {
      if (shape.depth > 0) {
        shape.const_pointee = true;
      } else {
        shape.const_slot = true;
      }
    }
    if (type.empty()) {
      shape.unresolved = true;
      return shape;
    }

    std::string spelled = compact_keep_global(type);
    for (const auto& tok : type) {
      if (tok.is("decltype") || tok.is("auto")) shape.unresolved = true;
    }
    if (type.size() == 1 && std::count(scope.template_params.begin(), scope.template_params.end(), type[0].text)) {
      shape.unresolved = true;
    }
    if (shape.unresolved) {
      shape.core = compact(type);
      return shape;
    }

    // Smart pointers wrap the interesting type.
    static const std::map<std::string, Holder> smart = {{"std::shared_ptr", Holder::shared},
                                                        {"std::unique_ptr", Holder::unique},
                                                        {"std::weak_ptr", Holder::other}};
    std::string head = strip_template_args(spelled);
    if (head.rfind("::", 0) == 0) head = head.substr(2);
    if (auto it = smart.find(head); it != smart.end() && shape.depth == 0) {
      auto open = std::find_if(type.begin(), type.end(), [](const Token& t) { return t.is("<"); });
      if (open != type.end() && type.back().is(">")) {
        Tokens inner(open + 1, type.end() - 1);
        // Drop a custom deleter argument.
        int depth = 0;
        for (std::size_t k = 0; k < inner.size(); ++k) {
          if (inner[k].is("<")) ++depth;
          if (inner[k].is(">")) --depth;
          if (inner[k].is(",") && depth == 0) {
            inner.resize(k);
            break;
          }
        }
        TypeShape in = analyze(inner, scope, alias_depth);
        in.holder = in.holder == Holder::value && in.depth == 0 ? it->second : Holder::other;
        in.reference = shape.reference;
        in.const_slot = shape.const_slot;
        return in;
      }
    }

    if (alias_depth < 8) {
      auto alias = lookup(strip_template_args(spelled), scope,
                          [&](const std::string& n) { return aliases_.count(n) > 0; });
      auto cls = lookup(strip_template_args(spelled), scope,
                        [&](const std::string& n) { return result_.index.types.count(n) > 0; });
      if (alias && !cls) {
        const auto* a = aliases_.at(*alias);
        TypeShape target = analyze(a->target, a->scope, alias_depth + 1);
        if (shape.depth > 0 && target.holder != Holder::value) target.holder = Holder::other;
        target.depth += shape.depth;
        target.reference = target.reference || shape.reference;
        if (shape.depth == 0) {
          target.const_slot = target.const_slot || shape.const_slot;
        } else {
          target.const_slot = shape.const_slot;
        }
        return target;
      }
    }

    auto resolved = lookup(strip_template_args(spelled), scope,
                           [&](const std::string& n) { return result_.index.types.count(n) > 0; });
    if (resolved) {
      auto lt = spelled.find('<');
      std::string args = lt == std::string::npos ? "" : spelled.substr(lt);
      shape.core = *resolved + args;
    } else {
      shape.core = compact(type);
    }
    return shape;
  }

  void attach_definitions() {
    for (const auto& def : project_.definitions) {
      Tokens qual;
      for (std::size_t k = 0; k < def.qualifier.size(); ++k) {
        if (k) qual.push_back({scan::TokKind::punct, "::", 0});
        qual.push_back({scan::TokKind::ident, def.qualifier[k], 0});
      }
      const ClassDecl* found = find_class(qual, def.scope);
      if (!found) continue;
      auto* cls = const_cast<ClassDecl*>(found);
      for (auto& m : cls->methods) {
        if (m.name == def.method.name && m.params.size() == def.method.params.size() && !m.has_body) {
          m.has_body = true;
          m.body = def.method.body;
          m.file = def.method.file;
          m.line = def.method.line;
          m.template_params = def.method.template_params;
          m.is_template = m.is_template || def.method.is_template;
          for (std::size_t i = 0; i < m.params.size(); ++i) {
            if (!def.method.params[i].name.empty()) m.params[i].name = def.method.params[i].name;
          }
          break;
        }
      }
    }
  }

  struct VisibleField {
    const scan::FieldDecl* decl;
    const ClassDecl* owner;
  };

  void collect_fields(const ClassDecl& cls, bool inherited, std::map<std::string, VisibleField>& out, int depth) const {
    for (const auto& f : cls.fields) {
      if (f.is_static) continue;
      if (inherited && f.access == scan::Access::private_) continue;
      out.emplace(f.name, VisibleField{&f, &cls});
    }
    if (depth > 16) return;
    for (const auto& base : cls.bases) {
      Scope outer = cls.scope;
      if (!outer.classes.empty()) outer.classes.pop_back();
      if (const ClassDecl* b = find_class(base, outer)) collect_fields(*b, true, out, depth + 1);
    }
  }

  bool is_local_declaration(const Tokens& t, std::size_t begin, std::size_t k) const {
    if (k + 1 >= t.size()) return false;
    static const std::set<std::string> after = {"=", ";", "{", "(", ":", ",", "[", ")"};
    if (!after.count(t[k + 1].text) || t[k + 1].kind == scan::TokKind::literal) return false;
    std::size_t j = k;
    while (j > begin) {
      const Token& p = t[j - 1];
      if (p.is(";") || p.is("{") || p.is("}") || p.is("(") || p.is(")") || p.is(",") || p.is(":") || p.is("?")) break;
      --j;
    }
    if (j == k) return false;
    if (t[j].is("*") || t[j].is("&") || t[j].is("&&") || (t[j].is("::") && j + 1 == k)) return false;
    for (std::size_t m = j; m < k; ++m) {
      const Token& p = t[m];
      if (p.kind == scan::TokKind::ident) {
        if (kStatementWords.count(p.text)) return false;
      } else if (p.kind == scan::TokKind::number) {
      } else if (!(p.is("::") || p.is("*") || p.is("&") || p.is("&&") || p.is("<") || p.is(">"))) {
        return false;
      }
    }
    const Token& last = t[k - 1];
    return last.ident() || last.is(">") || last.is("*") || last.is("&") || last.is("&&");
  }

  struct FoundSite {
    ReceiverBinding binding;
    std::string callee_type;
    std::string method;
    std::size_t arity;
    int line;
  };

  std::vector<FoundSite> find_sites(const ClassDecl& cls, const MethodDecl& m) {
    std::vector<FoundSite> sites;
    const Tokens& t = project_.files[m.body.file].tokens;
    const std::string& file = project_.files[m.body.file].path;
    std::map<std::string, VisibleField> fields;
    collect_fields(cls, false, fields, 0);
    std::map<std::string, std::size_t> params;
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      if (!m.params[i].name.empty()) params.emplace(m.params[i].name, i);
    }
    Scope method_scope = cls.scope;
    method_scope.file = m.body.file;
    for (const auto& p : m.template_params) method_scope.template_params.push_back(p);
    std::set<std::string> locals;
    const std::size_t b = m.body.begin;
    const std::size_t e = m.body.end;

    for (std::size_t k = b; k < e; ++k) {
      const Token& tok = t[k];
      if (tok.is("]") && k + 1 < e && t[k + 1].is("(")) {
        // Lambda parameters shadow fields and parameters.
        int depth = 0;
        for (std::size_t j = k + 1; j < e; ++j) {
          if (t[j].is("(")) ++depth;
          if (t[j].is(")") && --depth == 0) break;
          if (depth == 1 && t[j].ident() && j + 1 < e && (t[j + 1].is(",") || t[j + 1].is(")") || t[j + 1].is("="))) {
            locals.insert(t[j].text);
          }
        }
        continue;
      }
      if (!tok.ident()) continue;
      bool via_this = false;
      if (k > b && (t[k - 1].is(".") || t[k - 1].is("->") || t[k - 1].is("::"))) {
        bool this_arrow = t[k - 1].is("->") && k >= b + 2 && t[k - 2].is("this") &&
                          !(k >= b + 3 && (t[k - 3].is(".") || t[k - 3].is("->") || t[k - 3].is("::")));
        if (!this_arrow) continue;
        via_this = true;
      }
      if (!via_this && is_local_declaration(t, b, k)) {
        locals.insert(tok.text);
        continue;
      }
      if (k + 3 >= e || !(t[k + 1].is("->") || t[k + 1].is(".")) || !t[k + 2].ident()) continue;
      std::size_t call = k + 3;
      if (t[call].is("<")) {
        int depth = 0;
        for (; call < e; ++call) {
          if (t[call].is("<")) ++depth;
          if (t[call].is(">") && --depth == 0) break;
          if (t[call].is(";")) break;
        }
        ++call;
      }
      if (call >= e || !t[call].is("(")) continue;
      if (k > b && t[k - 1].is("*")) continue;  // (*p).m()

      const std::string& name = tok.text;
      ReceiverBinding binding;
      Tokens decl_type;
      Scope type_scope = method_scope;
      if (!via_this && params.count(name) && !locals.count(name)) {
        binding = ParameterBinding{params.at(name)};
        decl_type = m.params[params.at(name)].type;
      } else if (!via_this && locals.count(name)) {
        continue;
      } else if (fields.count(name)) {
        binding = FieldBinding{name};
        const auto& vf = fields.at(name);
        decl_type = vf.decl->type;
        type_scope = vf.owner->scope;
      } else {
        continue;
      }

      TypeShape shape = analyze(decl_type, type_scope);
      const std::string receiver = name + " (" + scan::spell(decl_type) + ")";
      if (shape.unresolved) {
        issue(ScanIssue::Kind::unresolved_receiver, file, tok.line,
              "receiver " + receiver + " has no statically known type; not treated as external");
        continue;
      }
      if (!classify_external(shape.core, cls.namespace_name, result_.index, config_)) continue;
      const bool pointer_like = shape.holder != Holder::value || shape.depth > 0;
      const bool arrow = t[k + 1].is("->");
      if (pointer_like != arrow || shape.depth > 1) continue;
      const bool substitutable =
          !shape.reference && !shape.const_pointee && !shape.const_slot &&
          ((shape.holder == Holder::value && shape.depth == 1) ||
           (shape.holder == Holder::shared && shape.depth == 0));
      if (!substitutable) {
        issue(ScanIssue::Kind::unsubstitutable_receiver, file, tok.line,
              "calls on " + receiver + " in " + cls.name + "::" + m.name +
                  " are not recorded: only T* and std::shared_ptr<T> bindings can be substituted");
        continue;
      }
      std::size_t close = call;
      int depth = 0;
      std::size_t commas = 0;
      bool any = false;
      for (; close < e; ++close) {
        const Token& c = t[close];
        if (c.is("(") || c.is("[") || c.is("{")) {
          ++depth;
        } else if (c.is(")") || c.is("]") || c.is("}")) {
          if (--depth == 0) break;
        } else if (depth == 1) {
          if (c.is(",")) ++commas;
          any = true;
        }
      }
      std::size_t arity = any ? commas + 1 : 0;
      sites.push_back({binding, shape.core, t[k + 2].text, arity, tok.line});
    }
    return sites;
  }

  std::string ineligible_reason(const ClassDecl& cls, const MethodDecl& m) const {
    if (cls.is_template) return "declared in a class template";
    if (m.is_template) return "is a member template";
    if (cls.in_anonymous_namespace) return "declared in an anonymous namespace";
    if (kImplementationExtensions.count(fs::path(project_.files[cls.file].path).extension().string())) {
      return "its class is defined in a source file, not a header";
    }
    if (m.is_special) return "is a constructor, destructor or operator";
    if (m.is_static) return "is static";
    if (m.access != scan::Access::public_) return "is not public";
    if (m.variadic) return "is variadic";
    if (!m.return_type.empty() && (m.return_type.back().is("&") || m.return_type.back().is("&&"))) {
      return "returns a reference";
    }
    return "";
  }

  void select_class(const ClassDecl& cls) {
    std::set<std::string> taken;
    for (const auto& m : cls.methods) {
      if (!m.has_body) continue;
      std::vector<FoundSite> sites = find_sites(cls, m);
      const std::string& file = project_.files[m.body.file].path;
      if (sites.empty()) continue;
      std::string reason = ineligible_reason(cls, m);
      std::string key = m.name + "/" + std::to_string(m.params.size());
      if (reason.empty() && !taken.insert(key).second) reason = "overloads another candidate with the same arity";
      if (!reason.empty()) {
        issue(ScanIssue::Kind::ineligible_method, file, m.line, cls.name + "::" + m.name + " " + reason);
        continue;
      }

      MutDescriptor d;
      d.header = project_.files[cls.file].path;
      d.declaring_type = cls.name;
      d.namespace_name = cls.namespace_name;
      d.method = m.name;
      for (std::size_t i = 0; i < m.params.size(); ++i) {
        std::string pname = m.params[i].name.empty() ? "arg" + std::to_string(i) : m.params[i].name;
        d.params.push_back({pname, scan::spell(m.params[i].type)});
      }
      d.return_type = m.return_type.empty() ? "void" : scan::spell(m.return_type);
      d.return_kind = d.return_type == "void" ? ReturnKind::none : ReturnKind::value;
      d.mut_id = make_mut_id(d.header, d.declaring_type, d.method, d.params.size());
      std::size_t n = 0;
      for (const auto& s : sites) {
        d.call_sites.push_back(
            {"s" + std::to_string(++n), s.binding, s.callee_type, s.method, s.arity, {file, s.line}});
      }
      const Tokens& t = project_.files[m.body.file].tokens;
      bool instrumented = std::any_of(t.begin() + static_cast<std::ptrdiff_t>(m.body.begin),
                                      t.begin() + static_cast<std::ptrdiff_t>(m.body.end),
                                      [](const Token& tok) { return tok.is("MIMIC_AROUND"); });
      if (!instrumented) {
        issue(ScanIssue::Kind::not_instrumented, file, m.line,
              d.mut_id + " has no MIMIC_AROUND; it will not be recorded until instrumented");
      }
      result_.descriptors.push_back(std::move(d));
    }
  }

  void finish() {
    auto& ds = result_.descriptors;
    auto matches_any = [](const std::vector<std::string>& patterns, const std::string& id) {
      return std::any_of(patterns.begin(), patterns.end(), [&](const std::string& p) { return glob_match(p, id); });
    };
    ds.erase(std::remove_if(ds.begin(), ds.end(),
                            [&](const MutDescriptor& d) {
                              if (!config_.method_include.empty() && !matches_any(config_.method_include, d.mut_id)) {
                                return true;
                              }
                              return matches_any(config_.method_exclude, d.mut_id);
                            }),
             ds.end());
    std::sort(ds.begin(), ds.end(), [](const auto& a, const auto& b) { return a.mut_id < b.mut_id; });
    auto& is = result_.report.issues;
    std::sort(is.begin(), is.end(), [](const ScanIssue& a, const ScanIssue& b) {
      return std::tie(a.file, a.line, a.kind, a.message) < std::tie(b.file, b.line, b.kind, b.message);
    });
    is.erase(std::unique(is.begin(), is.end(),
                         [](const ScanIssue& a, const ScanIssue& b) {
                           return a.file == b.file && a.line == b.line && a.kind == b.kind && a.message == b.message;
                         }),
             is.end());
  }

  const SelectionConfig& config_;
  scan::ParsedProject project_;
  std::map<std::string, ClassDecl*> classes_;
  std::map<std::string, const scan::AliasDecl*> aliases_;
  ScanResult result_;
};

}  // namespace

ScanResult scan_project(const SelectionConfig& config) { return Scanner(config).run(); }

}  // namespace mimic
