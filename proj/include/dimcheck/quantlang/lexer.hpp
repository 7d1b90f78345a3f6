#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dimcheck::quantlang {

/// 1-based line and column plus the 0-based byte offset.
struct SourcePos {
  int line = 1;
  int column = 1;
  std::size_t offset = 0;

  bool operator==(const SourcePos&) const = default;
};

enum class TokenKind {
  Number,
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  Colon,
  Assign,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  End,
  /// Only produced in recovering mode; `text` holds the message.
  Invalid,
};

std::string_view token_kind_name(TokenKind kind) noexcept;

struct Token {
  TokenKind kind;
  std::string text;
  SourcePos pos;
};

/// Splits source into tokens ending with End. `#` starts a comment running to
/// the end of the line. Throws LexError.
std::vector<Token> tokenize(std::string_view source);

/// Like tokenize, but turns each lexical error into an Invalid token and
/// resumes after the offending character or literal.
std::vector<Token> tokenize_recovering(std::string_view source);

/// Statement and declaration keywords; these cannot be used as names.
bool is_reserved(std::string_view word) noexcept;

}  // namespace dimcheck::quantlang
