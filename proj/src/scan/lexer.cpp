#include "lexer.hpp"

#include <array>
#include <cctype>

namespace mimic::scan {

namespace {

// `>>` is deliberately absent so nested template argument lists close one
// bracket at a time.
constexpr std::array<std::string_view, 24> kPuncts = {
    "->*", "...", "<<=", "<=>", "::", "->", ".*", "==", "!=", "<=", ">=", "&&", "||", "++",
    "--",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "<<"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    bool line_start = true;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        line_start = true;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        block_comment();
        continue;
      }
      if (c == '#' && line_start) {
        directive();
        continue;
      }
      line_start = false;
      const int line = line_;
      if (ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
        std::string_view word = src_.substr(start, pos_ - start);
        if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'') && is_literal_prefix(word)) {
          literal(start, word.back() == 'R' && src_[pos_] == '"');
          continue;
        }
        out_.push_back({TokKind::ident, std::string(word), line});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        number();
        continue;
      }
      if (c == '"' || c == '\'') {
        literal(pos_, false);
        continue;
      }
      punct();
    }
    return std::move(out_);
  }

 private:
  char peek(std::size_t ahead) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  static bool is_literal_prefix(std::string_view w) {
    return w == "L" || w == "u" || w == "U" || w == "u8" || w == "R" || w == "LR" || w == "uR" || w == "UR" ||
           w == "u8R";
  }

  void block_comment() {
    const int start = line_;
    pos_ += 2;
    while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) {
      if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ + 1 >= src_.size()) throw SyntaxError(start, "unterminated comment");
    pos_ += 2;
  }

  void directive() {
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && peek(1) == '\n') {
        ++line_;
        pos_ += 2;
        continue;
      }
      if (src_[pos_] == '/' && peek(1) == '*') {
        block_comment();
        continue;
      }
      ++pos_;
    }
  }

  void number() {
    std::size_t start = pos_;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (ident_char(c) || c == '.' || (c == '\'' && ident_char(peek(1)))) {
        ++pos_;
      } else if ((c == '+' || c == '-') && pos_ > start &&
                 (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E' || src_[pos_ - 1] == 'p' || src_[pos_ - 1] == 'P')) {
        ++pos_;
      } else {
        break;
      }
    }
    out_.push_back({TokKind::number, std::string(src_.substr(start, pos_ - start)), line_});
  }

  void literal(std::size_t start, bool raw) {
    const int line = line_;
    const char quote = src_[pos_];
    ++pos_;
    if (raw) {
      std::size_t open = src_.find('(', pos_);
      if (open == std::string_view::npos) throw SyntaxError(line, "bad raw string");
      std::string close = ")" + std::string(src_.substr(pos_, open - pos_)) + "\"";
      std::size_t end = src_.find(close, open);
      if (end == std::string_view::npos) throw SyntaxError(line, "unterminated raw string");
      for (std::size_t i = pos_; i < end; ++i) {
        if (src_[i] == '\n') ++line_;
      }
      pos_ = end + close.size();
    } else {
      while (pos_ < src_.size() && src_[pos_] != quote) {
        if (src_[pos_] == '\n') throw SyntaxError(line, "unterminated literal");
        if (src_[pos_] == '\\') ++pos_;
        ++pos_;
      }
      if (pos_ >= src_.size()) throw SyntaxError(line, "unterminated literal");
      ++pos_;
    }
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;  // user-defined literal suffix
    out_.push_back({TokKind::literal, std::string(src_.substr(start, pos_ - start)), line});
  }

  void punct() {
    for (auto p : kPuncts) {
      if (src_.substr(pos_, p.size()) == p) {
        out_.push_back({TokKind::punct, std::string(p), line_});
        pos_ += p.size();
        return;
      }
    }
    out_.push_back({TokKind::punct, std::string(1, src_[pos_]), line_});
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::vector<Token> out_;
};

}  // namespace

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

}  // namespace mimic::scan
