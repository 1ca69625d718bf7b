#include <herglotz/expr.hpp>

#include <algorithm>
#include <cctype>
#include <string>

// Recursive-descent parser for the Lagrangian expression grammar:
//   infix + - * / ^ with standard precedence, parentheses, `i` imaginary
//   unit, exact decimal/rational literals, D(field, c1[, c2]) derivatives,
//   s0..s3 action-density components, opaque calls U(x) with U'(x) formal
//   derivatives, identifiers [a-zA-Z_][a-zA-Z0-9_]*.
namespace herglotz::sym {

namespace {

struct Token {
  enum Type { End, Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma };
  Type type = End;
  size_t pos = 0;         // byte offset in the input
  Rational number{};      // Number
  std::string text;       // Ident
  int primes = 0;         // trailing apostrophes on an identifier
};

[[noreturn]] void fail(size_t pos, const std::string& msg) {
  throw Error("symexpr.syntax",
              "syntax error at position " + std::to_string(pos + 1) + ": " + msg);
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.pos = pos_;
    if (pos_ >= s_.size()) {
      tok_.type = Token::End;
      return;
    }
    char c = s_[pos_];
    switch (c) {
      case '+': tok_.type = Token::Plus; ++pos_; return;
      case '-': tok_.type = Token::Minus; ++pos_; return;
      case '*': tok_.type = Token::Star; ++pos_; return;
      case '/': tok_.type = Token::Slash; ++pos_; return;
      case '^': tok_.type = Token::Caret; ++pos_; return;
      case '(': tok_.type = Token::LParen; ++pos_; return;
      case ')': tok_.type = Token::RParen; ++pos_; return;
      case ',': tok_.type = Token::Comma; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      tok_.type = Token::Ident;
      tok_.text = std::string(s_.substr(start, pos_ - start));
      while (pos_ < s_.size() && s_[pos_] == '\'') {
        ++tok_.primes;
        ++pos_;
      }
      return;
    }
    fail(pos_, std::string("unexpected character '") + c + "'");
  }

  // Decimal literals are converted exactly: digits, optional fraction,
  // optional power-of-ten exponent.
  void lex_number() {
    size_t start = pos_;
    boost::multiprecision::cpp_int mantissa = 0;
    long frac_digits = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      mantissa = mantissa * 10 + (s_[pos_] - '0');
      ++pos_;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        fail(pos_, "expected digits after decimal point");
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        mantissa = mantissa * 10 + (s_[pos_] - '0');
        ++frac_digits;
        ++pos_;
      }
    }
    long exp10 = 0;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t save = pos_;
      ++pos_;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        neg = s_[pos_] == '-';
        ++pos_;
      }
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          exp10 = exp10 * 10 + (s_[pos_] - '0');
          ++pos_;
        }
        if (neg) exp10 = -exp10;
      } else {
        pos_ = save;  // bare `e` is an identifier start, not an exponent
      }
    }
    Rational value(mantissa);
    for (long i = 0; i < frac_digits; ++i) value /= 10;
    if (exp10 > 0)
      for (long i = 0; i < exp10; ++i) value *= 10;
    else
      for (long i = 0; i < -exp10; ++i) value /= 10;
    tok_.type = Token::Number;
    tok_.number = std::move(value);
    tok_.pos = start;
  }

  std::string_view s_;
  size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view text, const ParseContext& ctx) : lex_(text), ctx_(ctx) {}

  Expr run() {
    Expr e = parse_sum();
    const Token& t = lex_.peek();
    if (t.type != Token::End) fail(t.pos, "unexpected trailing input");
    return e;
  }

 private:
  Expr parse_sum() {
    std::vector<Expr> terms;
    bool neg = false;
    if (lex_.peek().type == Token::Plus) lex_.next();
    else if (lex_.peek().type == Token::Minus) { lex_.next(); neg = true; }
    Expr first = parse_product();
    terms.push_back(neg ? -first : first);
    while (true) {
      Token::Type t = lex_.peek().type;
      if (t == Token::Plus || t == Token::Minus) {
        lex_.next();
        Expr e = parse_product();
        terms.push_back(t == Token::Minus ? -e : e);
      } else {
        break;
      }
    }
    return sum(std::move(terms));
  }

  Expr parse_product() {
    Expr acc = parse_unary();
    while (true) {
      Token::Type t = lex_.peek().type;
      if (t == Token::Star || t == Token::Slash) {
        lex_.next();
        Expr rhs = parse_unary();
        acc = t == Token::Star ? acc * rhs : acc / rhs;
      } else {
        break;
      }
    }
    return acc;
  }

  Expr parse_unary() {
    if (lex_.peek().type == Token::Minus) {
      lex_.next();
      return -parse_unary();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (lex_.peek().type == Token::Caret) {
      lex_.next();
      return power(std::move(base), parse_exponent());
    }
    return base;
  }

  // Exponents are literal (optionally signed or parenthesized) integers.
  int parse_exponent() {
    bool neg = false;
    bool paren = false;
    if (lex_.peek().type == Token::LParen) {
      paren = true;
      lex_.next();
    }
    if (lex_.peek().type == Token::Minus) {
      neg = true;
      lex_.next();
    }
    Token t = lex_.peek();
    if (t.type != Token::Number) fail(t.pos, "expected integer exponent");
    lex_.next();
    if (denominator(t.number) != 1)
      fail(t.pos, "exponent must be an integer");
    long long v = numerator(t.number).convert_to<long long>();
    if (paren) {
      Token r = lex_.peek();
      if (r.type != Token::RParen) fail(r.pos, "expected ')' after exponent");
      lex_.next();
    }
    long long e = neg ? -v : v;
    if (e == 0) fail(t.pos, "zero exponent is not allowed");
    return static_cast<int>(e);
  }

  Expr parse_atom() {
    Token t = lex_.peek();
    switch (t.type) {
      case Token::Number:
        lex_.next();
        return constant(Complexq::make(t.number, Rational(0)));
      case Token::LParen: {
        lex_.next();
        Expr e = parse_sum();
        Token r = lex_.peek();
        if (r.type != Token::RParen) fail(r.pos, "expected ')'");
        lex_.next();
        return e;
      }
      case Token::Ident:
        return parse_ident();
      default:
        fail(t.pos, "expected a value");
    }
  }

  bool is_coord(const std::string& s) const {
    return std::find(ctx_.coords.begin(), ctx_.coords.end(), s) != ctx_.coords.end();
  }
  bool is_field(const std::string& s) const {
    return std::find(ctx_.fields.begin(), ctx_.fields.end(), s) != ctx_.fields.end();
  }

  Expr parse_ident() {
    Token t = lex_.next();
    const std::string& id = t.text;

    if (t.primes > 0) {
      // primed identifiers are opaque-function derivatives and must be calls
      if (lex_.peek().type != Token::LParen)
        fail(t.pos, "'" + id + "' with derivative marks must be applied to an argument");
      return parse_opaque_call(id, t.primes);
    }

    if (id == "i") return imaginary_unit();

    if (id == "D" && lex_.peek().type == Token::LParen) return parse_field_deriv(t.pos);

    // s0..s3 action-density components
    if (id.size() == 2 && id[0] == 's' && std::isdigit(static_cast<unsigned char>(id[1]))) {
      int idx = id[1] - '0';
      if (idx >= static_cast<int>(ctx_.coords.size()))
        fail(t.pos, "action-density component " + id + " exceeds problem dimension " +
                        std::to_string(ctx_.coords.size()));
      return action_density(idx);
    }
    if (id == "S" && ctx_.action_alias_S) return action_density(0);

    if (lex_.peek().type == Token::LParen) return parse_opaque_call(id, 0);

    if (is_coord(id)) return coordinate(id);
    if (is_field(id)) return field(id);
    if (!ctx_.params.empty() &&
        std::find(ctx_.params.begin(), ctx_.params.end(), id) == ctx_.params.end())
      throw Error("symexpr.undeclared", "undeclared identifier '" + id +
                                            "' at position " + std::to_string(t.pos + 1));
    return parameter(id);
  }

  Expr parse_opaque_call(const std::string& name, int primes) {
    lex_.next();  // consume '('
    Expr arg = parse_sum();
    Token r = lex_.peek();
    if (r.type != Token::RParen) fail(r.pos, "expected ')' closing call of '" + name + "'");
    lex_.next();
    return opaque(name, std::move(arg), primes);
  }

  Expr parse_field_deriv(size_t at) {
    lex_.next();  // consume '('
    Token f = lex_.peek();
    if (f.type != Token::Ident) fail(f.pos, "expected field name in D(...)");
    lex_.next();
    if (!is_field(f.text))
      throw Error("symexpr.nonfield_deriv",
                  "derivative of non-field symbol '" + f.text + "' at position " +
                      std::to_string(f.pos + 1));
    std::vector<std::string> idx;
    while (lex_.peek().type == Token::Comma) {
      lex_.next();
      Token c = lex_.peek();
      if (c.type != Token::Ident) fail(c.pos, "expected coordinate name in D(...)");
      lex_.next();
      if (!is_coord(c.text))
        throw Error("symexpr.undeclared", "'" + c.text + "' is not a declared coordinate");
      idx.push_back(c.text);
    }
    Token r = lex_.peek();
    if (r.type != Token::RParen) fail(r.pos, "expected ')' closing D(...)");
    lex_.next();
    if (idx.empty()) fail(at, "D(...) requires at least one coordinate");
    if (idx.size() > 2)
      throw Error("symexpr.order_overflow", "derivatives above order 2 are not supported");
    return field_deriv(f.text, std::move(idx));
  }

  Lexer lex_;
  const ParseContext& ctx_;
};

}  // namespace

Expr parse(std::string_view text, const ParseContext& ctx) {
  return Parser(text, ctx).run();
}

}  // namespace herglotz::sym
