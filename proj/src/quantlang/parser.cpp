#include "dimcheck/quantlang/parser.hpp"

#include <charconv>

#include "dimcheck/error.hpp"

namespace dimcheck::quantlang {

namespace {

// Syntax error at a token, before it is turned into a ParseError or a
// Malformed item.
struct SyntaxError {
  SourcePos pos;
  std::string message;
  ErrorKind kind = ErrorKind::ParseError;
};

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

  Program program(bool recover) {
    Program p;
    while (peek().kind != TokenKind::End) {
      const SourcePos start = peek().pos;
      const std::size_t first = i_;
      try {
        p.items.push_back(Item{start, item()});
      } catch (const SyntaxError& e) {
        if (!recover) throw;
        p.items.push_back(Item{e.pos, Malformed{e.kind, e.message}});
        synchronize(first);
      }
    }
    return p;
  }

  ExprPtr standalone_expression() {
    ExprPtr e = expr();
    expect(TokenKind::End, "end of expression");
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() {
    const Token& t = toks_[i_];
    if (t.kind != TokenKind::End) ++i_;
    return t;
  }
  bool at(TokenKind k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const { return at(TokenKind::Ident) && peek().text == w; }

  [[noreturn]] void fail_expected(std::string_view expected) const {
    const Token& t = peek();
    if (t.kind == TokenKind::Invalid) throw SyntaxError{t.pos, t.text, ErrorKind::LexError};
    const std::string found =
        t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError{t.pos, "expected " + std::string(expected) + ", found " + found};
  }

  const Token& expect(TokenKind k, std::string_view expected) {
    if (!at(k)) fail_expected(expected);
    return take();
  }

  std::string name(std::string_view what) {
    if (!at(TokenKind::Ident) || is_reserved(peek().text)) fail_expected(what);
    return take().text;
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) fail_expected("'" + std::string(w) + "'");
    take();
  }

  // Skips to the next declaration or statement keyword after the failed
  // item's first token.
  void synchronize(std::size_t first) {
    if (i_ == first) take();
    while (!at(TokenKind::End) && !(at(TokenKind::Ident) && is_reserved(peek().text)))
      take();
  }

  decltype(Item::node) item() {
    if (!at(TokenKind::Ident) || !is_reserved(peek().text))
      fail_expected("a declaration (unit, derive, const, var) or statement (check, eval, assert)");
    const std::string keyword = take().text;
    if (keyword == "unit") return unit_decl();
    if (keyword == "derive") return derive_decl();
    if (keyword == "const") return const_decl();
    if (keyword == "var") return var_decl();
    Statement s;
    s.kind = keyword == "check"  ? StatementKind::Check
             : keyword == "eval" ? StatementKind::Eval
                                 : StatementKind::Assert;
    s.expr = expr();
    if (!at(TokenKind::End) && !(at(TokenKind::Ident) && is_reserved(peek().text)))
      fail_expected("an operator or the next statement");
    return s;
  }

  std::int64_t integer(std::string_view what) {
    const bool negative = at(TokenKind::Minus);
    if (negative) take();
    const Token& t = expect(TokenKind::Number, what);
    std::int64_t v = 0;
    const auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || end != t.text.data() + t.text.size())
      throw SyntaxError{t.pos, "expected an integer exponent, found '" + t.text + "'"};
    return negative ? -v : v;
  }

  Rational rational() {
    const bool negative = at(TokenKind::Minus);
    if (negative) take();
    const Token& num = expect(TokenKind::Number, "a rational number");
    Rational r = Rational::parse(num.text);
    if (at(TokenKind::Slash)) {
      take();
      const Token& den = expect(TokenKind::Number, "a denominator");
      const Rational d = Rational::parse(den.text);
      if (d.is_zero()) throw SyntaxError{den.pos, "zero denominator"};
      r = r / d;
    }
    return negative ? -r : r;
  }

  Dimension dimension_term() {
    if (at(TokenKind::Number) && peek().text == "1") {
      take();
      return Dimension::one();
    }
    if (!at(TokenKind::Ident)) fail_expected("a base dimension");
    const Token& t = peek();
    const auto base = base_from_name(t.text);
    if (!base) throw SyntaxError{t.pos, "unknown base dimension '" + t.text + "'"};
    take();
    Dimension d = Dimension::base(*base);
    if (at(TokenKind::Caret)) {
      take();
      d = d.pow(integer("an integer exponent"));
    }
    return d;
  }

  UnitDecl unit_decl() {
    UnitDecl u;
    u.name = name("a unit name");
    expect(TokenKind::Colon, "':'");
    u.dimension = dimension_term();
    while (at(TokenKind::Star) || at(TokenKind::Slash)) {
      const bool mul = take().kind == TokenKind::Star;
      const Dimension t = dimension_term();
      u.dimension = mul ? u.dimension * t : u.dimension / t;
    }
    expect_word("scale");
    u.scale = rational();
    if (at_word("offset")) {
      take();
      u.offset = rational();
    }
    return u;
  }

  DeriveDecl derive_decl() {
    DeriveDecl d;
    d.name = name("a unit name");
    expect(TokenKind::Assign, "'='");
    d.factors.emplace_back(true, name("a unit name"));
    while (at(TokenKind::Star) || at(TokenKind::Slash)) {
      const bool mul = take().kind == TokenKind::Star;
      d.factors.emplace_back(mul, name("a unit name"));
    }
    return d;
  }

  ConstDecl const_decl() {
    ConstDecl c;
    c.name = name("a constant name");
    expect(TokenKind::Colon, "':'");
    c.unit = name("a unit name");
    expect(TokenKind::Assign, "'='");
    const bool negative = at(TokenKind::Minus);
    if (negative) take();
    c.value = parse_decimal(expect(TokenKind::Number, "a number").text);
    if (negative) c.value = negate(c.value);
    return c;
  }

  VarDecl var_decl() {
    VarDecl v;
    v.name = name("a variable name");
    expect(TokenKind::Colon, "':'");
    v.unit = name("a unit name");
    return v;
  }

  // expr := sum [cmp-op sum]
  ExprPtr expr() {
    ExprPtr lhs = sum();
    static const std::pair<TokenKind, CompareOp> kOps[] = {
        {TokenKind::Eq, CompareOp::Eq}, {TokenKind::Ne, CompareOp::Ne},
        {TokenKind::Lt, CompareOp::Lt}, {TokenKind::Le, CompareOp::Le},
        {TokenKind::Gt, CompareOp::Gt}, {TokenKind::Ge, CompareOp::Ge}};
    for (const auto& [kind, op] : kOps) {
      if (at(kind)) {
        const SourcePos pos = take().pos;
        return make_compare(op, lhs, sum(), pos);
      }
    }
    return lhs;
  }

  ExprPtr sum() {
    ExprPtr e = product();
    while (at(TokenKind::Plus) || at(TokenKind::Minus)) {
      const Token& op = take();
      const ExprKind k = op.kind == TokenKind::Plus ? ExprKind::Add : ExprKind::Subtract;
      e = make_binary(k, e, product(), op.pos);
    }
    return e;
  }

  ExprPtr product() {
    ExprPtr e = power();
    while (at(TokenKind::Star) || at(TokenKind::Slash)) {
      const Token& op = take();
      const ExprKind k = op.kind == TokenKind::Star ? ExprKind::Multiply : ExprKind::Divide;
      e = make_binary(k, e, power(), op.pos);
    }
    return e;
  }

  ExprPtr power() {
    ExprPtr e = atom();
    if (at(TokenKind::Caret)) {
      const SourcePos pos = take().pos;
      e = make_power(e, integer("an integer exponent"), pos);
    }
    return e;
  }

  ExprPtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number: {
        take();
        std::string unit;
        if (at(TokenKind::Ident) && !is_reserved(peek().text)) unit = take().text;
        return make_literal(parse_decimal(t.text), std::move(unit), t.pos);
      }
      case TokenKind::Ident:
        if (is_reserved(t.text)) break;
        take();
        return make_variable(t.text, t.pos);
      case TokenKind::LParen: {
        take();
        ExprPtr inner = sum();
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      case TokenKind::Minus:
        take();
        return make_negate(atom(), t.pos);
      default: break;
    }
    fail_expected("an operand (number, name, '(' or '-')");
  }

  const std::vector<Token>& toks_;
  std::size_t i_ = 0;
};

ParseError to_parse_error(const SyntaxError& e) {
  return ParseError(std::to_string(e.pos.line) + ":" + std::to_string(e.pos.column) +
                        ": " + e.message,
                    e.pos.offset);
}

}  // namespace

Program parse(const std::vector<Token>& tokens) {
  try {
    return Parser(tokens).program(false);
  } catch (const SyntaxError& e) {
    throw to_parse_error(e);
  }
}

Program parse_source(std::string_view source) {
  const std::vector<Token> tokens = tokenize_recovering(source);
  return Parser(tokens).program(true);
}

ExprPtr parse_expression(std::string_view source) {
  const std::vector<Token> tokens = tokenize(source);
  try {
    return Parser(tokens).standalone_expression();
  } catch (const SyntaxError& e) {
    throw to_parse_error(e);
  }
}

}  // namespace dimcheck::quantlang
