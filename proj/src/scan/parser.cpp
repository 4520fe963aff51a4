#include "parser.hpp"

#include <set>

namespace mimic::scan {

namespace {

const std::set<std::string> kBuiltinWords = {"int",     "char",     "short",    "long",     "unsigned", "signed",
                                             "float",   "double",   "bool",     "void",     "auto",     "wchar_t",
                                             "char8_t", "char16_t", "char32_t", "const",    "volatile"};

const std::set<std::string> kNonCallParens = {"decltype", "alignas", "noexcept", "sizeof", "alignof",
                                              "__attribute__", "__declspec", "requires", "throw", "typeid"};

bool wordish(const Token& t) { return t.kind != TokKind::punct; }

std::string qualify(const std::string& outer, const std::string& name) {
  return outer.empty() ? name : outer + "::" + name;
}

class Parser {
 public:
  Parser(ParsedProject& project, std::size_t file)
      : project_(project), file_(file), t_(project.files[file].tokens) {}

  void run() {
    Scope scope;
    scope.file = file_;
    parse_scope(t_.size(), scope, nullptr, Access::public_, false);
  }

 private:
  bool is(std::size_t k, std::string_view s) const { return k < t_.size() && t_[k].is(s); }
  bool ident_at(std::size_t k) const { return k < t_.size() && t_[k].ident(); }

  std::size_t match_close(std::size_t open) const {
    std::vector<char> stack;
    for (std::size_t k = open; k < t_.size(); ++k) {
      const Token& tok = t_[k];
      if (tok.kind != TokKind::punct || tok.text.size() != 1) continue;
      char c = tok.text[0];
      if (c == '(' || c == '[' || c == '{') {
        stack.push_back(c == '(' ? ')' : c == '[' ? ']' : '}');
      } else if (c == ')' || c == ']' || c == '}') {
        if (stack.empty() || stack.back() != c) throw SyntaxError(tok.line, std::string("unbalanced '") + c + "'");
        stack.pop_back();
        if (stack.empty()) return k;
      }
    }
    throw SyntaxError(t_[open].line, "unclosed '" + t_[open].text + "'");
  }

  /// Index of the `>` closing the `<` at `open`, or npos if `<` is not a
  /// template argument list.
  std::size_t skip_angles(std::size_t open) const {
    int depth = 0;
    for (std::size_t k = open; k < t_.size(); ++k) {
      const Token& tok = t_[k];
      if (tok.is("<")) {
        ++depth;
      } else if (tok.is(">")) {
        if (--depth == 0) return k;
      } else if (tok.is("(") || tok.is("[")) {
        k = match_close(k);
      } else if (tok.is(";") || tok.is("{") || tok.is("}") || tok.is(")") || tok.is("]")) {
        return std::string::npos;
      }
    }
    return std::string::npos;
  }

  /// Index just past the `;` ending the statement starting at `k`.
  std::size_t statement_end(std::size_t k, std::size_t end) const {
    while (k < end) {
      if (is(k, ";")) return k + 1;
      if (is(k, "(") || is(k, "[") || is(k, "{")) {
        k = match_close(k) + 1;
        continue;
      }
      if (is(k, "}")) throw SyntaxError(t_[k].line, "unexpected '}'");
      ++k;
    }
    return end;
  }

  /// Splits [begin, end) at top-level commas.
  std::vector<std::pair<std::size_t, std::size_t>> split_commas(std::size_t begin, std::size_t end) const {
    std::vector<std::pair<std::size_t, std::size_t>> parts;
    std::size_t part = begin;
    for (std::size_t k = begin; k < end; ++k) {
      if (is(k, "(") || is(k, "[") || is(k, "{")) {
        k = match_close(k);
      } else if (is(k, "<") && k > begin && t_[k - 1].ident()) {
        std::size_t close = skip_angles(k);
        if (close != std::string::npos && close < end) k = close;
      } else if (is(k, ",")) {
        parts.emplace_back(part, k);
        part = k + 1;
      }
    }
    if (part < end || !parts.empty()) parts.emplace_back(part, end);
    return parts;
  }

  std::size_t skip_attribute(std::size_t k) const {
    if (is(k, "[") && is(k + 1, "[")) return match_close(k) + 1;
    if ((is(k, "alignas") || is(k, "__attribute__") || is(k, "__declspec")) && is(k + 1, "(")) {
      return match_close(k + 1) + 1;
    }
    return k;
  }

  Tokens slice(std::size_t begin, std::size_t end) const {
    return Tokens(t_.begin() + static_cast<std::ptrdiff_t>(begin), t_.begin() + static_cast<std::ptrdiff_t>(end));
  }

  std::vector<std::string> template_param_names(std::size_t open, std::size_t close) const {
    std::vector<std::string> names;
    for (auto [b, e] : split_commas(open + 1, close)) {
      std::size_t stop = e;
      for (std::size_t k = b; k < e; ++k) {
        if (is(k, "<")) {
          std::size_t c = skip_angles(k);
          if (c != std::string::npos) k = c;
        } else if (is(k, "=")) {
          stop = k;
          break;
        }
      }
      if (stop > b && t_[stop - 1].ident() && !is(stop - 1, "typename") && !is(stop - 1, "class")) {
        names.push_back(t_[stop - 1].text);
      }
    }
    return names;
  }

  void parse_scope(std::size_t end, const Scope& scope, ClassDecl* cls, Access access, bool anonymous) {
    bool pending_template = false;
    std::vector<std::string> pending_params;
    while (i_ < end) {
      const Token& tok = t_[i_];
      if (tok.is(";")) {
        ++i_;
        continue;
      }
      if (tok.is("}")) throw SyntaxError(tok.line, "unexpected '}'");
      if (std::size_t next = skip_attribute(i_); next != i_) {
        i_ = next;
        continue;
      }
      if (cls && (tok.is("public") || tok.is("protected") || tok.is("private")) && is(i_ + 1, ":")) {
        access = tok.is("public") ? Access::public_ : tok.is("protected") ? Access::protected_ : Access::private_;
        i_ += 2;
        continue;
      }
      if (tok.is("inline") && is(i_ + 1, "namespace")) {
        ++i_;
        continue;
      }
      if (tok.is("namespace")) {
        parse_namespace(scope, anonymous);
        continue;
      }
      if (tok.is("extern") && i_ + 2 < end && t_[i_ + 1].kind == TokKind::literal && is(i_ + 2, "{")) {
        std::size_t close = match_close(i_ + 2);
        i_ += 3;
        parse_scope(close, scope, nullptr, Access::public_, anonymous);
        i_ = close + 1;
        continue;
      }
      if (tok.is("using")) {
        parse_using(end, scope, cls);
        pending_template = false;
        continue;
      }
      if (tok.is("typedef")) {
        parse_typedef(end, scope, cls);
        continue;
      }
      if (tok.is("template")) {
        if (is(i_ + 1, "<")) {
          std::size_t close = skip_angles(i_ + 1);
          if (close == std::string::npos) throw SyntaxError(tok.line, "bad template header");
          pending_params = template_param_names(i_ + 1, close);
          pending_template = true;
          i_ = close + 1;
        } else {
          i_ = statement_end(i_, end);  // explicit instantiation
        }
        continue;
      }
      if (tok.is("friend") || tok.is("static_assert")) {
        skip_declaration(end);
        pending_template = false;
        continue;
      }
      if (tok.is("class") || tok.is("struct") || tok.is("union")) {
        if (parse_class(end, scope, cls, anonymous, pending_template, pending_params)) {
          pending_template = false;
          pending_params.clear();
          continue;
        }
      }
      if (tok.is("enum")) {
        parse_enum(end, scope, cls);
        continue;
      }
      Scope decl_scope = scope;
      for (const auto& p : pending_params) decl_scope.template_params.push_back(p);
      parse_declaration(end, decl_scope, cls, access, pending_template);
      pending_template = false;
      pending_params.clear();
    }
  }

  void parse_namespace(const Scope& scope, bool anonymous) {
    std::size_t k = i_ + 1;
    std::string name;
    while (k < t_.size() && !is(k, "{") && !is(k, "=") && !is(k, ";")) {
      if (t_[k].ident() && !is(k, "inline")) name += t_[k].text;
      if (is(k, "::")) name += "::";
      k = skip_attribute(k) == k ? k + 1 : skip_attribute(k);
    }
    if (!is(k, "{")) {
      i_ = statement_end(i_, t_.size());
      return;
    }
    std::size_t close = match_close(k);
    Scope inner = scope;
    inner.classes.clear();
    bool anon = anonymous || name.empty();
    inner.namespace_name = name.empty() ? qualify(scope.namespace_name, "{anonymous}") : qualify(scope.namespace_name, name);
    i_ = k + 1;
    parse_scope(close, inner, nullptr, Access::public_, anon);
    i_ = close + 1;
  }

  std::string scope_prefix(const Scope& scope, const ClassDecl* cls) const {
    return cls ? cls->name : scope.namespace_name;
  }

  void parse_using(std::size_t end, const Scope& scope, ClassDecl* cls) {
    std::size_t stop = statement_end(i_, end);
    if (is(i_ + 1, "namespace")) {
      std::string name;
      for (std::size_t k = i_ + 2; k + 1 < stop; ++k) name += t_[k].text;
      project_.files[file_].using_namespaces.push_back(name);
    } else if (ident_at(i_ + 1)) {
      std::size_t k = skip_attribute(i_ + 2);
      if (is(k, "=")) {
        AliasDecl alias;
        alias.name = qualify(scope_prefix(scope, cls), t_[i_ + 1].text);
        Tokens target = slice(k + 1, stop - 1);
        if (!target.empty() && target.front().is("typename")) target.erase(target.begin());
        alias.target = std::move(target);
        alias.scope = scope;
        project_.aliases.push_back(std::move(alias));
      }
    }
    i_ = stop;
  }

  void parse_typedef(std::size_t end, const Scope& scope, ClassDecl* cls) {
    std::size_t stop = statement_end(i_, end);
    std::size_t last = stop - 1;  // the ';'
    if (last > i_ + 2 && t_[last - 1].ident()) {
      AliasDecl alias;
      alias.name = qualify(scope_prefix(scope, cls), t_[last - 1].text);
      alias.target = slice(i_ + 1, last - 1);
      alias.scope = scope;
      project_.aliases.push_back(std::move(alias));
    }
    i_ = stop;
  }

  void skip_declaration(std::size_t end) {
    std::size_t k = i_;
    while (k < end) {
      if (is(k, ";")) {
        i_ = k + 1;
        return;
      }
      if (is(k, "{")) {
        k = match_close(k) + 1;
        if (is(k, ";")) ++k;
        i_ = k;
        return;
      }
      if (is(k, "(") || is(k, "[")) {
        k = match_close(k) + 1;
        continue;
      }
      ++k;
    }
    i_ = end;
  }

  void parse_enum(std::size_t end, const Scope& scope, ClassDecl* cls) {
    std::size_t k = i_ + 1;
    if (is(k, "class") || is(k, "struct")) ++k;
    k = skip_attribute(k);
    std::string name;
    if (ident_at(k)) name = t_[k].text;
    while (k < end && !is(k, "{") && !is(k, ";")) ++k;
    if (is(k, "{")) {
      if (!name.empty()) project_.files[file_].enums.push_back(qualify(scope_prefix(scope, cls), name));
      k = match_close(k) + 1;
    }
    i_ = k;
    i_ = statement_end(i_, end);
  }

  /// Returns false if the tokens are an elaborated type in another declaration.
  bool parse_class(std::size_t end, const Scope& scope, ClassDecl* outer, bool anonymous, bool is_template,
                   const std::vector<std::string>& template_params) {
    const Token& keyword = t_[i_];
    std::size_t k = i_ + 1;
    std::string name;
    while (k < end) {
      std::size_t next = skip_attribute(k);
      if (next != k) {
        k = next;
        continue;
      }
      if (t_[k].ident() && !is(k, "final")) {
        name = t_[k].text;
        ++k;
      } else if (is(k, "::")) {
        ++k;
      } else {
        break;
      }
    }
    if (is(k, "<")) {
      std::size_t close = skip_angles(k);
      if (close == std::string::npos) return false;
      is_template = true;
      k = close + 1;
    }
    if (is(k, "final")) ++k;
    if (is(k, ";") && !name.empty()) {
      project_.files[file_].forward_decls.push_back(qualify(scope_prefix(scope, outer), name));
      i_ = k + 1;
      return true;
    }
    if (!is(k, "{") && !is(k, ":")) return false;

    auto decl = std::make_unique<ClassDecl>();
    ClassDecl* cls = decl.get();
    cls->simple_name = name;
    cls->name = name.empty() ? "" : qualify(scope_prefix(scope, outer), name);
    cls->namespace_name = scope.namespace_name;
    cls->file = file_;
    cls->line = keyword.line;
    cls->is_template = is_template || (outer && outer->is_template);
    cls->in_anonymous_namespace = anonymous;
    if (is(k, ":")) {
      std::size_t b = k + 1;
      while (k < end && !is(k, "{")) {
        if (is(k, "<")) {
          std::size_t close = skip_angles(k);
          if (close != std::string::npos) k = close;
        }
        ++k;
      }
      for (auto [pb, pe] : split_commas(b, k)) {
        Tokens base;
        for (std::size_t m = pb; m < pe; ++m) {
          if (is(m, "public") || is(m, "protected") || is(m, "private") || is(m, "virtual")) continue;
          base.push_back(t_[m]);
        }
        if (!base.empty()) cls->bases.push_back(std::move(base));
      }
    }
    if (!is(k, "{")) throw SyntaxError(keyword.line, "expected class body");
    std::size_t close = match_close(k);
    cls->scope = scope;
    if (!cls->name.empty()) cls->scope.classes.push_back(cls->name);
    for (const auto& p : template_params) cls->scope.template_params.push_back(p);
    project_.classes.push_back(std::move(decl));
    i_ = k + 1;
    parse_scope(close, cls->scope, cls, keyword.is("class") ? Access::private_ : Access::public_, anonymous);
    i_ = statement_end(close + 1, end);
    return true;
  }

  std::vector<ParamDecl> parse_params(std::size_t open, std::size_t close, bool& variadic) const {
    std::vector<ParamDecl> params;
    auto parts = split_commas(open + 1, close);
    if (parts.size() == 1 && parts[0].second == parts[0].first + 1 && is(parts[0].first, "void")) return params;
    for (auto [b, e] : parts) {
      if (b == e) continue;
      std::size_t stop = e;
      for (std::size_t k = b; k < e; ++k) {
        if (is(k, "...")) variadic = true;
        if (is(k, "(") || is(k, "[") || is(k, "{")) {
          if (is(k, "[")) {
            stop = std::min(stop, k);
          }
          k = match_close(k);
        } else if (is(k, "<") && k > b && t_[k - 1].ident()) {
          std::size_t c = skip_angles(k);
          if (c != std::string::npos) k = c;
        } else if (is(k, "=")) {
          stop = std::min(stop, k);
          break;
        }
      }
      ParamDecl p;
      std::size_t type_end = stop;
      if (stop - b >= 2 && t_[stop - 1].ident() && !kBuiltinWords.count(t_[stop - 1].text) && !is(stop - 2, "::")) {
        p.name = t_[stop - 1].text;
        type_end = stop - 1;
      }
      for (std::size_t k = b; k < type_end; ++k) {
        std::size_t next = skip_attribute(k);
        if (next != k) {
          k = next - 1;
          continue;
        }
        p.type.push_back(t_[k]);
      }
      params.push_back(std::move(p));
    }
    return params;
  }

  void parse_declaration(std::size_t end, const Scope& scope, ClassDecl* cls, Access access, bool is_template) {
    const std::size_t start = i_;
    std::size_t k = start;
    std::size_t paren = std::string::npos;
    while (k < end) {
      const Token& tok = t_[k];
      if (tok.is("operator")) {
        ++k;
        if (is(k, "(") && is(k + 1, ")")) k += 2;
        while (k < end && !is(k, "(")) ++k;
        if (k < end) paren = k;
        break;
      }
      if (tok.is(";") || tok.is("{") || tok.is("=") || tok.is(",")) break;
      if (cls && tok.is(":")) break;
      if (tok.is("}")) throw SyntaxError(tok.line, "unexpected '}'");
      if (tok.is("(")) {
        bool call_like = k > start && !kNonCallParens.count(t_[k - 1].text) &&
                         (t_[k - 1].ident() || t_[k - 1].kind == TokKind::punct);
        if (call_like) {
          paren = k;
          break;
        }
        k = match_close(k) + 1;
        continue;
      }
      if (tok.is("[")) {
        std::size_t next = skip_attribute(k);
        if (next == k) break;
        k = next;
        continue;
      }
      if (tok.is("<") && k > start && t_[k - 1].ident()) {
        std::size_t close = skip_angles(k);
        if (close != std::string::npos) {
          k = close + 1;
          continue;
        }
      }
      ++k;
    }
    if (paren != std::string::npos) {
      parse_function(end, scope, cls, access, is_template, start, paren);
    } else {
      std::size_t stop = statement_end(start, end);
      if (cls) add_fields(cls, access, start, stop - 1);
      i_ = stop;
    }
  }

  void parse_function(std::size_t end, const Scope& scope, ClassDecl* cls, Access access, bool is_template,
                      std::size_t start, std::size_t paren) {
    MethodDecl m;
    m.access = access;
    m.is_template = is_template;
    m.template_params = scope.template_params;
    m.line = t_[paren].line;
    m.file = file_;
    std::size_t close = match_close(paren);
    m.params = parse_params(paren, close, m.variadic);

    bool has_operator = false;
    for (std::size_t k = start; k < paren; ++k) {
      if (is(k, "operator")) has_operator = true;
    }
    std::size_t name_idx = paren - 1;
    std::size_t q = name_idx;
    std::vector<std::string> qualifier;
    bool template_qualified = false;
    if (t_[name_idx].ident() && !has_operator) {
      m.name = t_[name_idx].text;
      if (name_idx > start && is(name_idx - 1, "~")) {
        m.is_special = true;
        q = name_idx - 1;
      }
      while (q >= start + 2 && is(q - 1, "::")) {
        if (t_[q - 2].ident()) {
          qualifier.insert(qualifier.begin(), t_[q - 2].text);
          q -= 2;
        } else {
          template_qualified = true;
          break;
        }
      }
      if (q >= start + 1 && is(q - 1, "::") && (q - 1 == start || !t_[q - 2].ident())) --q;  // leading ::
    } else {
      m.is_special = true;
      q = start;
      for (std::size_t k = start; k < paren; ++k) {
        if (is(k, "operator")) {
          m.name = spell(t_, k, paren);
          break;
        }
      }
    }
    for (std::size_t k = start; k < q; ++k) {
      std::size_t next = skip_attribute(k);
      if (next != k) {
        k = next - 1;
        continue;
      }
      const Token& tok = t_[k];
      if (tok.is("static")) {
        m.is_static = true;
      } else if (tok.is("virtual") || tok.is("inline") || tok.is("constexpr") || tok.is("consteval") ||
                 tok.is("explicit") || tok.is("extern")) {
      } else {
        m.return_type.push_back(tok);
      }
    }
    if (m.return_type.empty()) m.is_special = true;  // constructors, destructors, conversions
    if (!qualifier.empty() && qualifier.back() == m.name) m.is_special = true;

    std::size_t k = close + 1;
    bool body = false;
    while (k < end) {
      if (is(k, ";")) {
        ++k;
        break;
      }
      if (is(k, "=")) {
        k = statement_end(k, end);
        break;
      }
      if (is(k, "{")) {
        body = true;
        break;
      }
      if (is(k, ":")) {
        k = skip_initializers(k + 1, end);
        body = true;
        break;
      }
      if (is(k, "try")) {
        ++k;
        continue;
      }
      if (is(k, "->")) {
        std::size_t b = k + 1;
        while (k < end && !is(k, "{") && !is(k, ";") && !is(k, "=")) {
          if (is(k, "(")) k = match_close(k);
          if (is(k, "<")) {
            std::size_t c = skip_angles(k);
            if (c != std::string::npos) k = c;
          }
          ++k;
        }
        m.return_type = slice(b, k);
        m.trailing_return = true;
        continue;
      }
      if (is(k, "(") || is(k, "[")) {
        k = match_close(k) + 1;
        continue;
      }
      ++k;
    }
    if (body) {
      if (!is(k, "{")) throw SyntaxError(t_[paren].line, "expected function body");
      std::size_t body_close = match_close(k);
      m.has_body = true;
      m.body = {file_, k + 1, body_close};
      k = body_close + 1;
      while (is(k, "catch") && is(k + 1, "(")) {
        std::size_t c = match_close(k + 1);
        if (!is(c + 1, "{")) break;
        k = match_close(c + 1) + 1;
      }
    }
    i_ = k;

    if (cls && qualifier.empty()) {
      if (m.name == cls->simple_name) m.is_special = true;
      cls->methods.push_back(std::move(m));
    } else if (!cls && !qualifier.empty() && m.has_body) {
      OutOfLineDef def;
      def.qualifier = std::move(qualifier);
      def.method = std::move(m);
      def.method.is_template = def.method.is_template || template_qualified;
      def.scope = scope;
      project_.definitions.push_back(std::move(def));
    }
  }

  std::size_t skip_initializers(std::size_t k, std::size_t end) const {
    while (k < end) {
      while (k < end && !is(k, "(") && !is(k, "{")) {
        if (is(k, "<")) {
          std::size_t c = skip_angles(k);
          if (c != std::string::npos) k = c;
        }
        ++k;
      }
      if (k >= end) break;
      k = match_close(k) + 1;
      if (is(k, "...")) ++k;
      if (is(k, ",")) {
        ++k;
        continue;
      }
      break;
    }
    return k;
  }

  void add_fields(ClassDecl* cls, Access access, std::size_t begin, std::size_t end) {
    bool is_static = false;
    std::size_t b = begin;
    while (b < end) {
      std::size_t next = skip_attribute(b);
      if (next != b) {
        b = next;
        continue;
      }
      if (is(b, "static") || is(b, "thread_local")) {
        is_static = true;
      } else if (!(is(b, "mutable") || is(b, "inline") || is(b, "constexpr") || is(b, "constinit"))) {
        break;
      }
      ++b;
    }
    Tokens base;
    bool first = true;
    for (auto [pb, pe] : split_commas(b, end)) {
      std::size_t stop = pe;
      for (std::size_t k = pb; k < pe; ++k) {
        if (is(k, "=") || is(k, "{") || is(k, ":") || (is(k, "[") && !is(k + 1, "["))) {
          stop = k;
          break;
        }
        if (is(k, "<") && k > pb && t_[k - 1].ident()) {
          std::size_t c = skip_angles(k);
          if (c != std::string::npos && c < pe) k = c;
        }
      }
      if (stop == pb || !t_[stop - 1].ident()) return;
      FieldDecl f;
      f.name = t_[stop - 1].text;
      f.access = access;
      f.is_static = is_static;
      f.line = t_[stop - 1].line;
      Tokens declarator = slice(pb, stop - 1);
      if (first) {
        if (declarator.empty()) return;
        f.type = declarator;
        base = declarator;
        while (!base.empty() && (base.back().is("*") || base.back().is("&") || base.back().is("&&"))) base.pop_back();
        first = false;
      } else {
        f.type = base;
        f.type.insert(f.type.end(), declarator.begin(), declarator.end());
      }
      cls->fields.push_back(std::move(f));
    }
  }

  ParsedProject& project_;
  std::size_t file_;
  const Tokens& t_;
  std::size_t i_ = 0;
};

}  // namespace

void parse_file(ParsedProject& project, std::size_t file_index) { Parser(project, file_index).run(); }

std::string spell(const Tokens& tokens, std::size_t begin, std::size_t end) {
  end = std::min(end, tokens.size());
  std::string out;
  for (std::size_t k = begin; k < end; ++k) {
    const Token& tok = tokens[k];
    if (k > begin) {
      const Token& prev = tokens[k - 1];
      if ((wordish(prev) && wordish(tok)) || prev.is(",") || (prev.is(">") && wordish(tok))) out += ' ';
    }
    out += tok.text;
  }
  return out;
}

}  // namespace mimic::scan
