#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mimic::scan {

enum class TokKind { ident, number, literal, punct };

struct Token {
  TokKind kind;
  std::string text;
  int line = 0;

  bool is(std::string_view s) const { return text == s && kind != TokKind::literal; }
  bool ident() const { return kind == TokKind::ident; }
};

/// Unbalanced or unterminated source; the file is skipped.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Tokenizes C++ source, dropping comments and preprocessor lines.
std::vector<Token> lex(std::string_view source);

}  // namespace mimic::scan
