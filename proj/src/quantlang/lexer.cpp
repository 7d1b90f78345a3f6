#include "dimcheck/quantlang/lexer.hpp"

#include <array>
#include <cctype>
#include <optional>

#include "dimcheck/decvalue.hpp"
#include "dimcheck/error.hpp"

namespace dimcheck::quantlang {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

class Lexer {
 public:
  Lexer(std::string_view source, bool recover) : src_(source), recover_(recover) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      if (at_end()) break;
      const SourcePos start = pos_;
      try {
        out.push_back(next(start));
      } catch (const LexError& e) {
        if (!recover_) throw;
        out.push_back(Token{TokenKind::Invalid, e.what(), start});
      }
    }
    out.push_back(Token{TokenKind::End, "", pos_});
    return out;
  }

 private:
  bool at_end() const { return pos_.offset >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_.offset + ahead;
    return i < src_.size() ? src_[i] : '\0';
  }
  void advance() {
    if (src_[pos_.offset] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++pos_.offset;
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      const char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        advance();
      } else {
        break;
      }
    }
  }

  Token make(TokenKind kind, const SourcePos& start) const {
    return Token{kind, std::string(src_.substr(start.offset, pos_.offset - start.offset)),
                 start};
  }

  [[noreturn]] void fail(const std::string& message, const SourcePos& at) {
    throw LexError(message, at.line, at.column);
  }

  void digits() {
    while (is_digit(peek())) advance();
  }

  Token number(const SourcePos& start) {
    digits();
    bool malformed = false;
    if (peek() == '.') {
      advance();
      if (!is_digit(peek())) malformed = true;
      digits();
    }
    if (!malformed && (peek() == 'e' || peek() == 'E')) {
      advance();
      if (peek() == '-') advance();
      if (!is_digit(peek())) malformed = true;
      digits();
    }
    if (malformed) {
      // Swallow the rest of the word so recovery resumes after it.
      while (is_ident_char(peek()) || peek() == '.') advance();
      fail("malformed number '" + make(TokenKind::Number, start).text + "'", start);
    }
    Token t = make(TokenKind::Number, start);
    try {
      parse_decimal(t.text);
    } catch (const ExponentOverflow&) {
      fail("number '" + t.text + "' is out of range", start);
    }
    return t;
  }

  Token next(const SourcePos& start) {
    const char c = peek();
    if (is_digit(c)) return number(start);
    if (is_ident_start(c)) {
      while (is_ident_char(peek())) advance();
      return make(TokenKind::Ident, start);
    }
    const auto two = [&](char second, TokenKind yes, std::optional<TokenKind> no) {
      advance();
      if (peek() == second) {
        advance();
        return make(yes, start);
      }
      if (!no) fail(std::string("expected '") + second + "' after '" + c + "'", start);
      return make(*no, start);
    };
    switch (c) {
      case '+': advance(); return make(TokenKind::Plus, start);
      case '-': advance(); return make(TokenKind::Minus, start);
      case '*': advance(); return make(TokenKind::Star, start);
      case '/': advance(); return make(TokenKind::Slash, start);
      case '^': advance(); return make(TokenKind::Caret, start);
      case '(': advance(); return make(TokenKind::LParen, start);
      case ')': advance(); return make(TokenKind::RParen, start);
      case ':': advance(); return make(TokenKind::Colon, start);
      case '=': return two('=', TokenKind::Eq, TokenKind::Assign);
      case '!': return two('=', TokenKind::Ne, std::nullopt);
      case '<': return two('=', TokenKind::Le, TokenKind::Lt);
      case '>': return two('=', TokenKind::Ge, TokenKind::Gt);
      default: break;
    }
    // Skip a whole UTF-8 sequence so the message shows the full character.
    std::size_t len = 1;
    const auto byte = static_cast<unsigned char>(c);
    if (byte >= 0xF0) len = 4;
    else if (byte >= 0xE0) len = 3;
    else if (byte >= 0xC0) len = 2;
    for (std::size_t i = 0; i < len && !at_end(); ++i) advance();
    fail("illegal character '" + make(TokenKind::Invalid, start).text + "'", start);
  }

  std::string_view src_;
  bool recover_;
  SourcePos pos_;
};

}  // namespace

std::string_view token_kind_name(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::Number: return "number";
    case TokenKind::Ident: return "identifier";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Caret: return "'^'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Assign: return "'='";
    case TokenKind::Eq: return "'=='";
    case TokenKind::Ne: return "'!='";
    case TokenKind::Lt: return "'<'";
    case TokenKind::Le: return "'<='";
    case TokenKind::Gt: return "'>'";
    case TokenKind::Ge: return "'>='";
    case TokenKind::End: return "end of input";
    case TokenKind::Invalid: return "invalid token";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source, false).run();
}

std::vector<Token> tokenize_recovering(std::string_view source) {
  return Lexer(source, true).run();
}

bool is_reserved(std::string_view word) noexcept {
  static constexpr std::array<std::string_view, 7> kReserved = {
      "unit", "derive", "const", "var", "check", "eval", "assert"};
  for (std::string_view k : kReserved)
    if (k == word) return true;
  return false;
}

}  // namespace dimcheck::quantlang
