#pragma once

#include <herglotz/errors.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Symbolic expression core: immutable expression trees over coordinates,
// fields, field derivatives, action-density components and named parameters,
// with exact complex-rational coefficients. Construction canonicalizes:
// every Expr handed out is already in normal form (flattened, constant-folded,
// like terms collected, children sorted).
namespace herglotz::sym {

using Rational = boost::multiprecision::cpp_rational;
using Cplx = std::complex<double>;

// Exact complex number with rational real and imaginary parts.
struct Complexq {
  Rational re{0};
  Rational im{0};

  static Complexq integer(long long n) { return {Rational(n), Rational(0)}; }
  static Complexq make(Rational r, Rational i) { return {std::move(r), std::move(i)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_one() const { return re == 1 && im == 0; }
  bool is_real() const { return im == 0; }

  Complexq negated() const { return {-re, -im}; }
  Complexq conj() const { return {re, -im}; }
  Complexq reciprocal() const;       // throws on zero
  Complexq pow(int n) const;         // integer power, throws on 0^-n

  // Sign convention used for printing and for equation sign normalization:
  // negative iff re < 0, or re == 0 and im < 0.
  bool sign_negative() const { return re < 0 || (re == 0 && im < 0); }

  Cplx to_complex() const {
    return {re.convert_to<double>(), im.convert_to<double>()};
  }

  static int cmp(const Complexq& a, const Complexq& b);

  friend Complexq operator+(const Complexq& a, const Complexq& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Complexq operator*(const Complexq& a, const Complexq& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const Complexq& a, const Complexq& b) {
    return a.re == b.re && a.im == b.im;
  }
};

enum class Kind : std::uint8_t {
  Constant,
  Parameter,
  Coordinate,
  Field,
  FieldDeriv,
  ActionDensity,
  Opaque,
  Power,
  Product,
  Sum,
};

class Expr {
 public:
  Expr();  // constant 0

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_leaf_symbol() const;  // Parameter/Coordinate/Field/FieldDeriv/ActionDensity
  bool is_zero() const;
  bool is_constant(const Complexq& v) const;

  const Complexq& value() const;                   // Constant
  const std::string& name() const;                 // named leafs; FieldDeriv -> field name
  const std::vector<std::string>& deriv_index() const;  // FieldDeriv multi-index (sorted)
  int action_index() const;                        // ActionDensity component
  int opaque_order() const;                        // Opaque derivative order
  int exponent() const;                            // Power exponent
  const std::vector<Expr>& children() const;       // Sum/Product children; Power base and Opaque argument at [0]
  const Expr& base() const { return children()[0]; }
  const Expr& argument() const { return children()[0]; }

  friend int compare(const Expr& a, const Expr& b);  // structural total order
  friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }

  struct Node;  // defined in expr.cpp; factories build through make_node

 private:
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;

  friend Expr make_node(Node&&);
};

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Leaf constructors.
Expr constant(Complexq v);
Expr constant(long long n);
Expr rational(long long num, long long den);
Expr imaginary_unit();
Expr parameter(std::string name);
Expr coordinate(std::string name);
Expr field(std::string name);
// Multi-index is sorted on construction (mixed partials commute); order must be 1 or 2.
Expr field_deriv(std::string field_name, std::vector<std::string> coords);
Expr action_density(int index);
Expr opaque(std::string name, Expr argument, int deriv_order = 0);

// Canonicalizing composers.
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr power(Expr base, int exponent);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// Rebuilds the canonical form bottom-up; idempotent.
Expr normalize(const Expr& e);
// Distributes products and positive integer powers over sums, producing a
// flat sum of monomial terms.
Expr expand(const Expr& e);

// Exact partial derivative with respect to a leaf symbol; all leaf symbols are
// mutually independent. Opaque functions differentiate by the chain rule,
// bumping their derivative order.
Expr diff_wrt(const Expr& e, const Expr& leaf_symbol);

// Total derivative d/d<coord>: explicit coordinate dependence plus chain-rule
// promotion of fields and first derivatives. Rejects inputs containing
// order-2 derivatives (the output would exceed order 2) or action-density
// symbols.
Expr total_derivative(const Expr& e, const std::string& coord);

Expr substitute(const Expr& e, const Expr& leaf_symbol, const Expr& replacement);

std::string to_string(const Expr& e);

// Leaf inventory helpers.
std::set<Expr, ExprLess> leaf_symbols(const Expr& e);  // excludes constants and opaque calls
std::set<std::pair<std::string, int>> opaque_signatures(const Expr& e);  // (name, order)
int max_field_deriv_order(const Expr& e);
bool contains_action_density(const Expr& e);
bool contains_kind(const Expr& e, Kind k);

// --- parsing -----------------------------------------------------------

struct ParseContext {
  std::vector<std::string> coords;
  std::vector<std::string> fields;
  // When non-empty, identifiers that are not coordinates/fields must appear
  // here; when empty, any such identifier becomes a Parameter.
  std::vector<std::string> params;
  bool action_alias_S = false;  // `S` names s0 (1-D problems with a single action symbol)
};

Expr parse(std::string_view text, const ParseContext& ctx);

// --- evaluation --------------------------------------------------------

// Total map from leaf symbols to complex values. Opaque functions are bound
// by name to a callable of (derivative order, argument value).
struct Bindings {
  std::map<std::string, Cplx> params;
  std::map<std::string, Cplx> coords;
  std::map<std::string, Cplx> fields;
  std::map<std::pair<std::string, std::vector<std::string>>, Cplx> field_derivs;
  std::map<int, Cplx> action;
  std::map<std::string, std::function<Cplx(int order, Cplx arg)>> opaque;
};

Cplx evaluate(const Expr& e, const Bindings& b);

// Randomized equivalence oracle: samples the shared symbol universe from a
// seeded generator over [-2,2]^2 complex boxes and compares values with
// relative tolerance tol at every trial. Deterministic for a fixed seed.
// Domain errors (e.g. division by a sampled zero) trigger a bounded resample.
bool equivalent(const Expr& a, const Expr& b, int trials, std::uint64_t seed,
                double tol);

}  // namespace herglotz::sym
