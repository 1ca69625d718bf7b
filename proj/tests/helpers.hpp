#pragma once

// Test-side oracles and fixtures, kept independent of the library paths they
// check.

#include <herglotz/derive.hpp>
#include <herglotz/expr.hpp>

#include <cmath>
#include <random>
#include <vector>

namespace testutil {

namespace sym = herglotz::sym;

// Classical Euler-Lagrange expression dL/dphi - sum_mu d/dx^mu dL/d(d_mu phi),
// assembled directly from the differentiation primitives without the
// gamma-vector machinery. Oracle for the conservative-reduction property.
inline sym::Expr classical_el(const herglotz::VariationalProblem& p,
                              const std::string& vary) {
  sym::Expr eq = sym::diff_wrt(p.lagrangian, sym::field(vary));
  for (const std::string& c : p.coords) {
    sym::Expr momentum = sym::diff_wrt(p.lagrangian, sym::field_deriv(vary, {c}));
    if (momentum.is_zero()) continue;
    eq = eq - sym::total_derivative(momentum, c);
  }
  return sym::expand(eq);
}

// For a conjugate pair the equation attributed to a field comes from varying
// its partner; mirror that attribution here.
inline std::string vary_partner(const herglotz::VariationalProblem& p,
                                const std::string& field_name) {
  for (const auto& f : p.fields) {
    if (f.name == field_name && f.conjugate_of) return *f.conjugate_of;
    if (f.conjugate_of && *f.conjugate_of == field_name) return f.name;
  }
  return field_name;
}

// Analytic underdamped oscillator solution of m x'' + gamma x' + k x = 0 with
// x(0) = x0, x'(0) = 0.
struct Underdamped {
  double m, k, gamma, x0;
  double lambda() const { return gamma / (2 * m); }
  double omega() const { return std::sqrt(k / m - lambda() * lambda()); }
  double x(double t) const {
    double l = lambda(), w = omega();
    return x0 * std::exp(-l * t) * (std::cos(w * t) + l / w * std::sin(w * t));
  }
  double v(double t) const {
    double l = lambda(), w = omega();
    return -x0 * (k / m) / w * std::exp(-l * t) * std::sin(w * t);
  }
};

// Closed-form tracked action density for the single-mode damped string
// phi = T(t) sin(pi x) on [0,1] with T(0)=1, T'(0) = -lambda:
//   T(t) = e^{-lambda t}(cos(Omega t) + (lambda/Omega) sin(Omega t))
// and s-ODE  ds1/dt = -2 lambda s1 + L|_{s=0},  s1(0,x) = 0.
struct DampedModeString {
  double mu, tension, gamma;
  double lambda() const { return gamma / (2 * mu); }
  double omega0sq() const { return tension / mu * M_PI * M_PI; }
  double omega() const { return std::sqrt(omega0sq() - lambda() * lambda()); }

  double T(double t) const {
    double l = lambda(), W = omega();
    return std::exp(-l * t) * (std::cos(W * t) + l / W * std::sin(W * t));
  }
  double Tdot(double t) const {
    double W = omega();
    return -omega0sq() / W * std::exp(-lambda() * t) * std::sin(W * t);
  }
  double I1(double t) const {
    double W = omega();
    return 0.5 * t - std::sin(2 * W * t) / (4 * W);
  }
  double I2(double t) const {
    double l = lambda(), W = omega();
    double s = std::sin(W * t);
    return 0.5 * t + std::sin(2 * W * t) / (4 * W) + l / (W * W) * s * s +
           l * l / (W * W) * I1(t);
  }
  double s1(double t, double x) const {
    double W = omega();
    double sx = std::sin(M_PI * x), cx = std::cos(M_PI * x);
    double kin = 0.5 * mu * omega0sq() * omega0sq() / (W * W) * I1(t) * sx * sx;
    double ela = 0.5 * tension * M_PI * M_PI * I2(t) * cx * cx;
    return std::exp(-2 * lambda() * t) * (kin - ela);
  }
  // integral of s1(t, .) over [0, 1]
  double action_at(double t) const {
    double W = omega();
    double kin = 0.5 * mu * omega0sq() * omega0sq() / (W * W) * I1(t);
    double ela = 0.5 * tension * M_PI * M_PI * I2(t);
    return std::exp(-2 * lambda() * t) * 0.5 * (kin - ela);
  }
};

// Seeded random expression generator over a small fixed symbol pool.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed, bool with_derivs = true)
      : rng_(seed), with_derivs_(with_derivs) {}

  sym::Expr leaf() {
    std::vector<sym::Expr> pool = {
        sym::parameter("mu"),  sym::parameter("T"), sym::parameter("gamma"),
        sym::coordinate("t"),  sym::coordinate("x"), sym::field("phi"),
        sym::constant(2),      sym::rational(1, 2), sym::imaginary_unit(),
    };
    if (with_derivs_) {
      pool.push_back(sym::field_deriv("phi", {"t"}));
      pool.push_back(sym::field_deriv("phi", {"x"}));
      pool.push_back(sym::action_density(0));
    }
    return pool[rng_() % pool.size()];
  }

  sym::Expr gen(int depth = 3) {
    if (depth <= 0) return leaf();
    switch (rng_() % 6) {
      case 0:
      case 1: {
        std::vector<sym::Expr> kids;
        int n = 2 + rng_() % 2;
        for (int i = 0; i < n; ++i) kids.push_back(gen(depth - 1));
        return sym::sum(std::move(kids));
      }
      case 2:
      case 3: {
        std::vector<sym::Expr> kids;
        int n = 2 + rng_() % 2;
        for (int i = 0; i < n; ++i) kids.push_back(gen(depth - 1));
        return sym::product(std::move(kids));
      }
      case 4: {
        int exps[] = {2, 3, -1};
        return sym::power(gen(depth - 1), exps[rng_() % 3]);
      }
      default:
        return sym::opaque("U", gen(depth - 1), rng_() % 2);
    }
  }

 private:
  std::mt19937_64 rng_;
  bool with_derivs_;
};

inline sym::ParseContext string_ctx() {
  sym::ParseContext ctx;
  ctx.coords = {"t", "x"};
  ctx.fields = {"phi"};
  return ctx;
}

}  // namespace testutil
