#include <herglotz/expr.hpp>

#include <algorithm>
#include <cassert>
#include <sstream>

namespace herglotz::sym {

// ---------------------------------------------------------------------------
// Complexq

Complexq Complexq::reciprocal() const {
  Rational n = re * re + im * im;
  if (n == 0) throw Error("symexpr.division_by_zero", "division by exact zero");
  return {re / n, -im / n};
}

Complexq Complexq::pow(int n) const {
  if (n == 0) return integer(1);
  Complexq base = n > 0 ? *this : reciprocal();
  int k = n > 0 ? n : -n;
  Complexq acc = integer(1);
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

int Complexq::cmp(const Complexq& a, const Complexq& b) {
  if (a.re != b.re) return a.re < b.re ? -1 : 1;
  if (a.im != b.im) return a.im < b.im ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Node storage

struct Expr::Node {
  Kind kind{};
  Complexq value{};                 // Constant
  std::string name{};               // named leafs; FieldDeriv field name; Opaque name
  std::vector<std::string> dindex{};  // FieldDeriv multi-index
  int aux = 0;                      // ActionDensity index | Opaque order | Power exponent
  std::vector<Expr> kids{};
};

Expr make_node(Expr::Node&& n) {
  return Expr(std::make_shared<const Expr::Node>(std::move(n)));
}

Expr::Expr() : n_(std::make_shared<const Node>(Node{Kind::Constant, Complexq{}})) {}

Kind Expr::kind() const { return n_->kind; }
const Complexq& Expr::value() const { return n_->value; }
const std::string& Expr::name() const { return n_->name; }
const std::vector<std::string>& Expr::deriv_index() const { return n_->dindex; }
int Expr::action_index() const { return n_->aux; }
int Expr::opaque_order() const { return n_->aux; }
int Expr::exponent() const { return n_->aux; }
const std::vector<Expr>& Expr::children() const { return n_->kids; }

bool Expr::is_leaf_symbol() const {
  switch (kind()) {
    case Kind::Parameter:
    case Kind::Coordinate:
    case Kind::Field:
    case Kind::FieldDeriv:
    case Kind::ActionDensity:
      return true;
    default:
      return false;
  }
}

bool Expr::is_zero() const {
  return kind() == Kind::Constant && value().is_zero();
}

bool Expr::is_constant(const Complexq& v) const {
  return kind() == Kind::Constant && value() == v;
}

// ---------------------------------------------------------------------------
// Structural total order

static int cmp_strings(const std::string& a, const std::string& b) {
  return a < b ? -1 : (a == b ? 0 : 1);
}

static int cmp_index(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    if (int c = cmp_strings(a[i], b[i])) return c;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Constant:
      return Complexq::cmp(a.value(), b.value());
    case Kind::Parameter:
    case Kind::Coordinate:
    case Kind::Field:
      return cmp_strings(a.name(), b.name());
    case Kind::FieldDeriv: {
      if (int c = cmp_strings(a.name(), b.name())) return c;
      return cmp_index(a.deriv_index(), b.deriv_index());
    }
    case Kind::ActionDensity:
      return a.action_index() < b.action_index() ? -1
             : a.action_index() == b.action_index() ? 0 : 1;
    case Kind::Opaque: {
      if (int c = cmp_strings(a.name(), b.name())) return c;
      if (a.opaque_order() != b.opaque_order())
        return a.opaque_order() < b.opaque_order() ? -1 : 1;
      return compare(a.argument(), b.argument());
    }
    case Kind::Power: {
      if (int c = compare(a.base(), b.base())) return c;
      return a.exponent() < b.exponent() ? -1 : a.exponent() == b.exponent() ? 0 : 1;
    }
    case Kind::Product:
    case Kind::Sum: {
      const auto& ka = a.children();
      const auto& kb = b.children();
      size_t n = std::min(ka.size(), kb.size());
      for (size_t i = 0; i < n; ++i)
        if (int c = compare(ka[i], kb[i])) return c;
      if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Leaf constructors

Expr constant(Complexq v) {
  Expr::Node n;
  n.kind = Kind::Constant;
  n.value = std::move(v);
  return make_node(std::move(n));
}

Expr constant(long long v) { return constant(Complexq::integer(v)); }

Expr rational(long long num, long long den) {
  if (den == 0) throw Error("symexpr.division_by_zero", "rational with zero denominator");
  return constant(Complexq::make(Rational(num) / Rational(den), Rational(0)));
}

Expr imaginary_unit() { return constant(Complexq::make(Rational(0), Rational(1))); }

static Expr named(Kind k, std::string name) {
  Expr::Node n;
  n.kind = k;
  n.name = std::move(name);
  return make_node(std::move(n));
}

Expr parameter(std::string name) { return named(Kind::Parameter, std::move(name)); }
Expr coordinate(std::string name) { return named(Kind::Coordinate, std::move(name)); }
Expr field(std::string name) { return named(Kind::Field, std::move(name)); }

Expr field_deriv(std::string field_name, std::vector<std::string> coords) {
  if (coords.empty() || coords.size() > 2)
    throw Error("symexpr.order_overflow",
                "field derivative order must be 1 or 2, got " + std::to_string(coords.size()));
  std::sort(coords.begin(), coords.end());
  Expr::Node n;
  n.kind = Kind::FieldDeriv;
  n.name = std::move(field_name);
  n.dindex = std::move(coords);
  return make_node(std::move(n));
}

Expr action_density(int index) {
  if (index < 0 || index > 3)
    throw Error("symexpr.bad_action_index",
                "action-density index out of range: s" + std::to_string(index));
  Expr::Node n;
  n.kind = Kind::ActionDensity;
  n.aux = index;
  return make_node(std::move(n));
}

Expr opaque(std::string name, Expr argument, int deriv_order) {
  if (deriv_order < 0)
    throw Error("symexpr.bad_opaque_order", "negative opaque derivative order");
  Expr::Node n;
  n.kind = Kind::Opaque;
  n.name = std::move(name);
  n.aux = deriv_order;
  n.kids = {std::move(argument)};
  return make_node(std::move(n));
}

// ---------------------------------------------------------------------------
// Term decomposition and monomial ordering

namespace {

// Splits a (canonical, non-Sum) expression into coefficient and monomial
// factor list. A pure constant yields an empty factor list.
struct TermParts {
  Complexq coef = Complexq::integer(1);
  std::vector<std::pair<Expr, int>> factors;  // (base, exponent), base never Constant/Power
};

TermParts split_term(const Expr& e) {
  TermParts p;
  auto add = [&p](const Expr& f) {
    if (f.kind() == Kind::Power)
      p.factors.emplace_back(f.base(), f.exponent());
    else
      p.factors.emplace_back(f, 1);
  };
  if (e.kind() == Kind::Constant) {
    p.coef = e.value();
  } else if (e.kind() == Kind::Product) {
    for (const Expr& k : e.children()) {
      if (k.kind() == Kind::Constant)
        p.coef = p.coef * k.value();
      else
        add(k);
    }
  } else {
    add(e);
  }
  return p;
}

// Principality rank for ordering sum terms: derivative symbols lead, then
// fields, action densities, opaque calls, coordinates, parameters, composites.
int principal_rank(const Expr& e) {
  switch (e.kind()) {
    case Kind::FieldDeriv: return 0;
    case Kind::Field: return 1;
    case Kind::ActionDensity: return 2;
    case Kind::Opaque: return 3;
    case Kind::Coordinate: return 4;
    case Kind::Parameter: return 5;
    default: return 6;
  }
}

int cmp_principal(const Expr& a, const Expr& b) {
  int ra = principal_rank(a), rb = principal_rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case Kind::FieldDeriv: {
      if (int c = cmp_strings(a.name(), b.name())) return c;
      // Higher derivative order first.
      size_t oa = a.deriv_index().size(), ob = b.deriv_index().size();
      if (oa != ob) return oa > ob ? -1 : 1;
      return cmp_index(a.deriv_index(), b.deriv_index());
    }
    case Kind::Opaque: {
      if (int c = cmp_strings(a.name(), b.name())) return c;
      if (a.opaque_order() != b.opaque_order())
        return a.opaque_order() < b.opaque_order() ? -1 : 1;
      return compare(a.argument(), b.argument());
    }
    default:
      return compare(a, b);
  }
}

// Total order on monomial factor lists: compare by most-principal factors,
// higher exponents first, longer factor list first on common prefix. Pure
// constants (empty lists) sort last.
int cmp_monomials(const std::vector<std::pair<Expr, int>>& a,
                  const std::vector<std::pair<Expr, int>>& b) {
  if (a.empty() || b.empty()) {
    if (a.empty() && b.empty()) return 0;
    return a.empty() ? 1 : -1;
  }
  auto sorted = [](const std::vector<std::pair<Expr, int>>& v) {
    auto s = v;
    std::sort(s.begin(), s.end(), [](const auto& x, const auto& y) {
      if (int c = cmp_principal(x.first, y.first)) return c < 0;
      return x.second > y.second;
    });
    return s;
  };
  auto sa = sorted(a), sb = sorted(b);
  size_t n = std::min(sa.size(), sb.size());
  for (size_t i = 0; i < n; ++i) {
    if (int c = cmp_principal(sa[i].first, sb[i].first)) return c;
    if (sa[i].second != sb[i].second) return sa[i].second > sb[i].second ? -1 : 1;
  }
  if (sa.size() != sb.size()) return sa.size() > sb.size() ? -1 : 1;
  // Equal symbol parts up to structural detail not covered by principality.
  for (size_t i = 0; i < n; ++i)
    if (int c = compare(sa[i].first, sb[i].first)) return c;
  return 0;
}

Expr rebuild_term(const Complexq& coef, const std::vector<std::pair<Expr, int>>& factors);

}  // namespace

// ---------------------------------------------------------------------------
// Canonicalizing composers

Expr power(Expr b, int e) {
  if (e == 0) return constant(1);
  if (e == 1) return b;
  switch (b.kind()) {
    case Kind::Constant:
      return constant(b.value().pow(e));
    case Kind::Power:
      return power(b.base(), b.exponent() * e);
    case Kind::Product: {
      std::vector<Expr> ks;
      ks.reserve(b.children().size());
      for (const Expr& k : b.children()) ks.push_back(power(k, e));
      return product(std::move(ks));
    }
    default: {
      Expr::Node n;
      n.kind = Kind::Power;
      n.aux = e;
      n.kids = {std::move(b)};
      return make_node(std::move(n));
    }
  }
}

Expr product(std::vector<Expr> factors) {
  Complexq coef = Complexq::integer(1);
  std::map<Expr, int, ExprLess> bases;
  // Flatten one level; children of a canonical Product are not Products.
  std::vector<Expr> queue = std::move(factors);
  for (const Expr& f : queue) {
    const std::vector<Expr>* kids = f.kind() == Kind::Product ? &f.children() : nullptr;
    auto absorb = [&](const Expr& g) {
      if (g.kind() == Kind::Constant) {
        coef = coef * g.value();
      } else if (g.kind() == Kind::Power) {
        bases[g.base()] += g.exponent();
      } else {
        bases[g] += 1;
      }
    };
    if (kids)
      for (const Expr& g : *kids) absorb(g);
    else
      absorb(f);
  }
  if (coef.is_zero()) return constant(0);
  std::vector<Expr> out;
  if (!coef.is_one()) out.push_back(constant(coef));
  for (const auto& [b, e] : bases) {
    if (e == 0) continue;
    Expr p = power(b, e);
    // power() may fold (e.g. constant bases introduced via substitution).
    if (p.kind() == Kind::Constant) {
      if (p.value().is_zero()) return constant(0);
      if (!p.value().is_one()) {
        // merge into the leading coefficient
        if (!out.empty() && out[0].kind() == Kind::Constant)
          out[0] = constant(out[0].value() * p.value());
        else
          out.insert(out.begin(), p);
      }
      continue;
    }
    out.push_back(std::move(p));
  }
  if (out.empty()) return constant(coef);
  if (out.size() == 1) return out[0];
  std::sort(out.begin(), out.end(), ExprLess{});
  Expr::Node n;
  n.kind = Kind::Product;
  n.kids = std::move(out);
  return make_node(std::move(n));
}

namespace {

Expr rebuild_term(const Complexq& coef, const std::vector<std::pair<Expr, int>>& factors) {
  std::vector<Expr> ks;
  if (!coef.is_one()) ks.push_back(constant(coef));
  for (const auto& [b, e] : factors) ks.push_back(power(b, e));
  if (ks.empty()) return constant(1);
  return product(std::move(ks));
}

}  // namespace

Expr sum(std::vector<Expr> terms) {
  // Collect like terms keyed by monomial factor list.
  struct Key {
    std::vector<std::pair<Expr, int>> factors;
  };
  struct KeyLess {
    bool operator()(const Key& a, const Key& b) const {
      return cmp_monomials(a.factors, b.factors) < 0;
    }
  };
  std::map<Key, Complexq, KeyLess> acc;
  auto absorb = [&acc](const Expr& t) {
    TermParts p = split_term(t);
    Key k{std::move(p.factors)};
    auto it = acc.find(k);
    if (it == acc.end())
      acc.emplace(std::move(k), p.coef);
    else
      it->second = it->second + p.coef;
  };
  for (const Expr& t : terms) {
    if (t.kind() == Kind::Sum)
      for (const Expr& k : t.children()) absorb(k);
    else
      absorb(t);
  }
  std::vector<Expr> out;
  for (const auto& [key, coef] : acc) {
    if (coef.is_zero()) continue;
    out.push_back(rebuild_term(coef, key.factors));
  }
  if (out.empty()) return constant(0);
  if (out.size() == 1) return out[0];
  Expr::Node n;
  n.kind = Kind::Sum;
  n.kids = std::move(out);
  return make_node(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return sum({a, product({constant(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return product({a, power(b, -1)}); }
Expr operator-(const Expr& a) { return product({constant(-1), a}); }

// ---------------------------------------------------------------------------
// normalize / expand

Expr normalize(const Expr& e) {
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Parameter:
    case Kind::Coordinate:
    case Kind::Field:
    case Kind::ActionDensity:
      return e;
    case Kind::FieldDeriv:
      return field_deriv(e.name(), e.deriv_index());
    case Kind::Opaque:
      return opaque(e.name(), normalize(e.argument()), e.opaque_order());
    case Kind::Power:
      return power(normalize(e.base()), e.exponent());
    case Kind::Product: {
      std::vector<Expr> ks;
      for (const Expr& k : e.children()) ks.push_back(normalize(k));
      return product(std::move(ks));
    }
    case Kind::Sum: {
      std::vector<Expr> ks;
      for (const Expr& k : e.children()) ks.push_back(normalize(k));
      return sum(std::move(ks));
    }
  }
  return e;
}

namespace {

// Distributing multiply of two expanded expressions.
Expr mul_distribute(const Expr& a, const Expr& b) {
  if (a.kind() == Kind::Sum) {
    std::vector<Expr> out;
    for (const Expr& t : a.children()) out.push_back(mul_distribute(t, b));
    return sum(std::move(out));
  }
  if (b.kind() == Kind::Sum) {
    std::vector<Expr> out;
    for (const Expr& t : b.children()) out.push_back(mul_distribute(a, t));
    return sum(std::move(out));
  }
  return product({a, b});
}

}  // namespace

Expr expand(const Expr& e) {
  switch (e.kind()) {
    case Kind::Sum: {
      std::vector<Expr> ks;
      for (const Expr& k : e.children()) ks.push_back(expand(k));
      return sum(std::move(ks));
    }
    case Kind::Product: {
      Expr acc = constant(1);
      for (const Expr& k : e.children()) acc = mul_distribute(acc, expand(k));
      return acc;
    }
    case Kind::Power: {
      Expr b = expand(e.base());
      if (b.kind() == Kind::Sum && e.exponent() > 1) {
        Expr acc = b;
        for (int i = 1; i < e.exponent(); ++i) acc = mul_distribute(acc, b);
        return acc;
      }
      return power(std::move(b), e.exponent());
    }
    case Kind::Opaque:
      return opaque(e.name(), expand(e.argument()), e.opaque_order());
    default:
      return e;
  }
}

// ---------------------------------------------------------------------------
// differentiation / substitution

Expr diff_wrt(const Expr& e, const Expr& leaf) {
  switch (e.kind()) {
    case Kind::Constant:
      return constant(0);
    case Kind::Parameter:
    case Kind::Coordinate:
    case Kind::Field:
    case Kind::FieldDeriv:
    case Kind::ActionDensity:
      return e == leaf ? constant(1) : constant(0);
    case Kind::Opaque: {
      Expr darg = diff_wrt(e.argument(), leaf);
      if (darg.is_zero()) return constant(0);
      return product({opaque(e.name(), e.argument(), e.opaque_order() + 1), darg});
    }
    case Kind::Power: {
      Expr db = diff_wrt(e.base(), leaf);
      if (db.is_zero()) return constant(0);
      return product({constant(e.exponent()), power(e.base(), e.exponent() - 1), db});
    }
    case Kind::Product: {
      std::vector<Expr> terms;
      const auto& ks = e.children();
      for (size_t i = 0; i < ks.size(); ++i) {
        Expr di = diff_wrt(ks[i], leaf);
        if (di.is_zero()) continue;
        std::vector<Expr> fs;
        fs.reserve(ks.size());
        for (size_t j = 0; j < ks.size(); ++j)
          if (j != i) fs.push_back(ks[j]);
        fs.push_back(std::move(di));
        terms.push_back(product(std::move(fs)));
      }
      return sum(std::move(terms));
    }
    case Kind::Sum: {
      std::vector<Expr> terms;
      for (const Expr& k : e.children()) terms.push_back(diff_wrt(k, leaf));
      return sum(std::move(terms));
    }
  }
  return constant(0);
}

namespace {

void walk(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  for (const Expr& k : e.children()) walk(k, fn);
}

}  // namespace

std::set<Expr, ExprLess> leaf_symbols(const Expr& e) {
  std::set<Expr, ExprLess> out;
  walk(e, [&out](const Expr& n) {
    if (n.is_leaf_symbol()) out.insert(n);
  });
  return out;
}

std::set<std::pair<std::string, int>> opaque_signatures(const Expr& e) {
  std::set<std::pair<std::string, int>> out;
  walk(e, [&out](const Expr& n) {
    if (n.kind() == Kind::Opaque) out.emplace(n.name(), n.opaque_order());
  });
  return out;
}

int max_field_deriv_order(const Expr& e) {
  int order = 0;
  walk(e, [&order](const Expr& n) {
    if (n.kind() == Kind::FieldDeriv)
      order = std::max(order, static_cast<int>(n.deriv_index().size()));
  });
  return order;
}

bool contains_action_density(const Expr& e) {
  return contains_kind(e, Kind::ActionDensity);
}

bool contains_kind(const Expr& e, Kind k) {
  bool found = false;
  walk(e, [&found, k](const Expr& n) {
    if (n.kind() == k) found = true;
  });
  return found;
}

Expr total_derivative(const Expr& e, const std::string& coord) {
  if (max_field_deriv_order(e) >= 2)
    throw Error("symexpr.order_overflow",
                "total derivative of an expression already containing order-2 "
                "field derivatives");
  if (contains_action_density(e))
    throw Error("symexpr.s_dependence",
                "total derivative target depends on an action-density symbol");

  std::vector<Expr> terms;
  terms.push_back(diff_wrt(e, coordinate(coord)));
  for (const Expr& leaf : leaf_symbols(e)) {
    if (leaf.kind() == Kind::Field) {
      terms.push_back(product({diff_wrt(e, leaf), field_deriv(leaf.name(), {coord})}));
    } else if (leaf.kind() == Kind::FieldDeriv) {
      std::vector<std::string> idx = leaf.deriv_index();
      idx.push_back(coord);
      terms.push_back(product({diff_wrt(e, leaf), field_deriv(leaf.name(), std::move(idx))}));
    }
  }
  return sum(std::move(terms));
}

Expr substitute(const Expr& e, const Expr& leaf, const Expr& replacement) {
  if (e.is_leaf_symbol()) return e == leaf ? replacement : e;
  switch (e.kind()) {
    case Kind::Constant:
      return e;
    case Kind::Opaque:
      return opaque(e.name(), substitute(e.argument(), leaf, replacement), e.opaque_order());
    case Kind::Power:
      return power(substitute(e.base(), leaf, replacement), e.exponent());
    case Kind::Product: {
      std::vector<Expr> ks;
      for (const Expr& k : e.children()) ks.push_back(substitute(k, leaf, replacement));
      return product(std::move(ks));
    }
    case Kind::Sum: {
      std::vector<Expr> ks;
      for (const Expr& k : e.children()) ks.push_back(substitute(k, leaf, replacement));
      return sum(std::move(ks));
    }
    default:
      return e;
  }
}

// ---------------------------------------------------------------------------
// printing

namespace {

std::string rational_str(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

int display_rank(const Expr& e) {
  switch (e.kind()) {
    case Kind::Parameter: return 0;
    case Kind::Coordinate: return 1;
    case Kind::Opaque: return 2;
    case Kind::Field: return 3;
    case Kind::ActionDensity: return 4;
    case Kind::FieldDeriv: return 5;
    default: return 6;
  }
}

std::string atom_str(const Expr& e);

// Renders a non-Sum term. `coef` must not be printed as negative here; sign
// handling belongs to the caller.
std::string term_str(const Expr& e) {
  TermParts p = split_term(e);
  // Display order groups parameters before field symbols before derivatives.
  std::stable_sort(p.factors.begin(), p.factors.end(), [](const auto& a, const auto& b) {
    int ra = display_rank(a.first), rb = display_rank(b.first);
    if (ra != rb) return ra < rb;
    return compare(a.first, b.first) < 0;
  });

  std::vector<std::string> num, den;
  const Complexq& c = p.coef;
  if (c.is_real()) {
    if (!(c.re == 1)) num.push_back(rational_str(c.re));
  } else if (c.re == 0) {
    if (!(c.im == 1)) num.push_back(rational_str(c.im));
    num.push_back("i");
  } else {
    std::ostringstream os;
    os << "(" << rational_str(c.re);
    if (c.im < 0)
      os << " - " << rational_str(-c.im);
    else
      os << " + " << rational_str(c.im);
    os << "*i)";
    num.push_back(os.str());
  }
  for (const auto& [b, ex] : p.factors) {
    std::string s = atom_str(b);
    int a = ex > 0 ? ex : -ex;
    if (a != 1) s += "^" + std::to_string(a);
    (ex > 0 ? num : den).push_back(std::move(s));
  }
  std::string out;
  if (num.empty()) out = "1";
  for (size_t i = 0; i < num.size(); ++i) {
    if (i) out += "*";
    out += num[i];
  }
  if (!den.empty()) {
    out += "/";
    if (den.size() > 1) out += "(";
    for (size_t i = 0; i < den.size(); ++i) {
      if (i) out += "*";
      out += den[i];
    }
    if (den.size() > 1) out += ")";
  }
  return out;
}

std::string atom_str(const Expr& e) {
  switch (e.kind()) {
    case Kind::Parameter:
    case Kind::Coordinate:
    case Kind::Field:
      return e.name();
    case Kind::FieldDeriv: {
      std::string s = "D(" + e.name();
      for (const auto& c : e.deriv_index()) s += "," + c;
      return s + ")";
    }
    case Kind::ActionDensity:
      return "s" + std::to_string(e.action_index());
    case Kind::Opaque: {
      std::string s = e.name();
      s.append(e.opaque_order(), '\'');
      return s + "(" + to_string(e.argument()) + ")";
    }
    default:
      return "(" + to_string(e) + ")";
  }
}

// Pulls the sign out of a term: returns |term| and sets `negative`.
Expr abs_term(const Expr& e, bool& negative) {
  TermParts p = split_term(e);
  negative = p.coef.sign_negative();
  if (!negative) return e;
  return rebuild_term(p.coef.negated(), p.factors);
}

}  // namespace

std::string to_string(const Expr& e) {
  if (e.kind() != Kind::Sum) {
    bool neg = false;
    Expr t = abs_term(e, neg);
    return (neg ? "-" : "") + term_str(t);
  }
  std::string out;
  bool first = true;
  for (const Expr& raw : e.children()) {
    bool neg = false;
    Expr t = abs_term(raw, neg);
    if (first) {
      out += (neg ? "-" : "") + term_str(t);
      first = false;
    } else {
      out += neg ? " - " : " + ";
      out += term_str(t);
    }
  }
  return out;
}

}  // namespace herglotz::sym
