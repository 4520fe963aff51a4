#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lexer.hpp"

namespace mimic::scan {

enum class Access { public_, protected_, private_ };

using Tokens = std::vector<Token>;

struct ParamDecl {
  std::string name;  // empty when unnamed
  Tokens type;
};

struct FieldDecl {
  std::string name;
  Tokens type;
  Access access = Access::private_;
  bool is_static = false;
  int line = 0;
};

/// A token range [begin, end) in one file's token vector.
struct Body {
  std::size_t file = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct MethodDecl {
  std::string name;
  std::vector<ParamDecl> params;
  bool variadic = false;
  Tokens return_type;
  bool trailing_return = false;
  Access access = Access::private_;
  bool is_static = false;
  bool is_template = false;
  std::vector<std::string> template_params;  // names visible in the signature and body
  bool is_special = false;  // constructor, destructor, operator or conversion
  bool has_body = false;
  Body body;
  std::size_t file = 0;  // where the body lives
  int line = 0;
};

/// Lexical scope used to resolve names: enclosing namespace plus the chain of
/// enclosing classes, innermost last.
struct Scope {
  std::string namespace_name;
  std::vector<std::string> classes;  // qualified class names
  std::size_t file = 0;
  std::vector<std::string> template_params;
};

struct ClassDecl {
  std::string name;       // qualified
  std::string simple_name;
  std::string namespace_name;
  std::size_t file = 0;
  int line = 0;
  bool is_template = false;
  bool in_anonymous_namespace = false;
  std::vector<Tokens> bases;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  Scope scope;  // scope of the class body
};

struct AliasDecl {
  std::string name;  // qualified
  Tokens target;
  Scope scope;
};

/// `Ret Qual::Name::method(params) { body }` at namespace scope.
struct OutOfLineDef {
  std::vector<std::string> qualifier;  // e.g. {"Qual", "Name"}
  MethodDecl method;
  Scope scope;
};

struct ParsedFile {
  std::string path;  // project-relative
  Tokens tokens;
  std::vector<std::string> using_namespaces;
  std::vector<std::string> enums;  // qualified names
  std::vector<std::string> forward_decls;
};

struct ParsedProject {
  std::vector<ParsedFile> files;
  std::vector<std::unique_ptr<ClassDecl>> classes;
  std::vector<AliasDecl> aliases;
  std::vector<OutOfLineDef> definitions;
};

/// Parses declarations of one lexed file into `project`. Throws SyntaxError.
void parse_file(ParsedProject& project, std::size_t file_index);

/// Compact spelling of a token range: `const std::map<int, int>&`.
std::string spell(const Tokens& tokens, std::size_t begin = 0, std::size_t end = std::string::npos);

}  // namespace mimic::scan
