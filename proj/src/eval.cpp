#include <herglotz/expr.hpp>

#include <cmath>
#include <random>

namespace herglotz::sym {

namespace {

[[noreturn]] void unbound(const std::string& what) {
  throw Error("symexpr.unbound", "no binding for " + what);
}

Cplx int_pow(Cplx z, int n) {
  if (n < 0) {
    if (std::abs(z) < 1e-12)
      throw Error("symexpr.eval_domain", "negative power of a (near-)zero value");
    return 1.0 / int_pow(z, -n);
  }
  Cplx acc = 1.0;
  while (n > 0) {
    if (n & 1) acc *= z;
    z *= z;
    n >>= 1;
  }
  return acc;
}

}  // namespace

Cplx evaluate(const Expr& e, const Bindings& b) {
  switch (e.kind()) {
    case Kind::Constant:
      return e.value().to_complex();
    case Kind::Parameter: {
      auto it = b.params.find(e.name());
      if (it == b.params.end()) unbound("parameter '" + e.name() + "'");
      return it->second;
    }
    case Kind::Coordinate: {
      auto it = b.coords.find(e.name());
      if (it == b.coords.end()) unbound("coordinate '" + e.name() + "'");
      return it->second;
    }
    case Kind::Field: {
      auto it = b.fields.find(e.name());
      if (it == b.fields.end()) unbound("field '" + e.name() + "'");
      return it->second;
    }
    case Kind::FieldDeriv: {
      auto it = b.field_derivs.find({e.name(), e.deriv_index()});
      if (it == b.field_derivs.end()) unbound("derivative " + to_string(e));
      return it->second;
    }
    case Kind::ActionDensity: {
      auto it = b.action.find(e.action_index());
      if (it == b.action.end()) unbound("action density s" + std::to_string(e.action_index()));
      return it->second;
    }
    case Kind::Opaque: {
      auto it = b.opaque.find(e.name());
      if (it == b.opaque.end()) unbound("opaque function '" + e.name() + "'");
      return it->second(e.opaque_order(), evaluate(e.argument(), b));
    }
    case Kind::Power:
      return int_pow(evaluate(e.base(), b), e.exponent());
    case Kind::Product: {
      Cplx acc = 1.0;
      for (const Expr& k : e.children()) acc *= evaluate(k, b);
      return acc;
    }
    case Kind::Sum: {
      Cplx acc = 0.0;
      for (const Expr& k : e.children()) acc += evaluate(k, b);
      return acc;
    }
  }
  return 0.0;
}

bool equivalent(const Expr& a, const Expr& b, int trials, std::uint64_t seed, double tol) {
  if (trials < 16)
    throw Error("symexpr.bad_trials", "equivalence check needs at least 16 trials");

  std::set<Expr, ExprLess> leaves = leaf_symbols(a);
  for (const Expr& l : leaf_symbols(b)) leaves.insert(l);
  std::set<std::pair<std::string, int>> opq = opaque_signatures(a);
  for (const auto& s : opaque_signatures(b)) opq.insert(s);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  auto draw = [&]() { return Cplx(box(rng), box(rng)); };

  constexpr int kMaxResamples = 32;
  for (int trial = 0; trial < trials; ++trial) {
    bool done = false;
    for (int attempt = 0; attempt < kMaxResamples && !done; ++attempt) {
      Bindings bind;
      for (const Expr& l : leaves) {
        switch (l.kind()) {
          case Kind::Parameter: bind.params[l.name()] = draw(); break;
          case Kind::Coordinate: bind.coords[l.name()] = draw(); break;
          case Kind::Field: bind.fields[l.name()] = draw(); break;
          case Kind::FieldDeriv: bind.field_derivs[{l.name(), l.deriv_index()}] = draw(); break;
          case Kind::ActionDensity: bind.action[l.action_index()] = draw(); break;
          default: break;
        }
      }
      // One sampled value per (name, derivative order), independent of the
      // argument, matching the Bindings contract.
      std::map<std::string, std::map<int, Cplx>> table;
      for (const auto& [name, order] : opq) table[name][order] = draw();
      for (auto& [name, orders] : table) {
        auto values = orders;
        bind.opaque[name] = [values](int order, Cplx) {
          auto it = values.find(order);
          if (it == values.end())
            throw Error("symexpr.unbound", "no sampled value for opaque derivative order");
          return it->second;
        };
      }
      try {
        Cplx va = evaluate(a, bind);
        Cplx vb = evaluate(b, bind);
        if (!std::isfinite(va.real()) || !std::isfinite(va.imag()) ||
            !std::isfinite(vb.real()) || !std::isfinite(vb.imag()))
          continue;  // resample
        double scale = 1.0 + std::max(std::abs(va), std::abs(vb));
        if (std::abs(va - vb) > tol * scale) return false;
        done = true;
      } catch (const Error& err) {
        if (err.code() != "symexpr.eval_domain") throw;
        // resample
      }
    }
    if (!done)
      throw Error("symexpr.eval_domain",
                  "equivalence sampling exhausted resample budget (expression is "
                  "singular almost everywhere on the sample box)");
  }
  return true;
}

}  // namespace herglotz::sym
