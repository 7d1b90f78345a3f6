#pragma once

#include <string_view>
#include <vector>

#include "dimcheck/quantlang/ast.hpp"
#include "dimcheck/quantlang/lexer.hpp"

namespace dimcheck::quantlang {

/// Parses a whole token sequence. Throws ParseError (offset of the offending
/// token, message listing the expected tokens) at the first error.
Program parse(const std::vector<Token>& tokens);

/// Tokenizes and parses, recovering at the next declaration or statement
/// keyword after an error. Lexical and syntax errors become Malformed items.
Program parse_source(std::string_view source);

/// A single expression, comparisons allowed. Throws LexError or ParseError.
ExprPtr parse_expression(std::string_view source);

}  // namespace dimcheck::quantlang
