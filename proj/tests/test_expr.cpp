#include <doctest.h>

#include <herglotz/expr.hpp>

#include "helpers.hpp"

using namespace herglotz;
using sym::Expr;
using sym::Kind;
namespace tu = testutil;

TEST_CASE("parse: string Lagrangian is a sum of three normalized terms") {
  auto ctx = tu::string_ctx();
  Expr L = sym::parse("mu/2*D(phi,t)^2 - T/2*D(phi,x)^2 - (gamma/mu)*s0", ctx);
  REQUIRE(L.kind() == Kind::Sum);
  CHECK(L.children().size() == 3);
  Expr expected = sym::rational(1, 2) * sym::parameter("mu") *
                      sym::power(sym::field_deriv("phi", {"t"}), 2) -
                  sym::rational(1, 2) * sym::parameter("T") *
                      sym::power(sym::field_deriv("phi", {"x"}), 2) -
                  sym::parameter("gamma") / sym::parameter("mu") * sym::action_density(0);
  CHECK(L == expected);
}

TEST_CASE("parse: mixed partials commute via canonical multi-index") {
  auto ctx = tu::string_ctx();
  CHECK(sym::parse("D(phi,x,t)", ctx) == sym::parse("D(phi,t,x)", ctx));
}

TEST_CASE("parse: complex constants fold exactly") {
  sym::ParseContext ctx;
  ctx.coords = {"t", "x"};
  ctx.fields = {"psi", "psis"};
  Expr e = sym::parse("i*hbar/2*(psis*D(psi,t) - psi*D(psis,t))", ctx);
  Expr half_i = sym::constant(sym::Complexq::make(sym::Rational(0), sym::Rational(1, 2)));
  Expr expected =
      half_i * sym::parameter("hbar") * sym::field("psis") * sym::field_deriv("psi", {"t"}) -
      half_i * sym::parameter("hbar") * sym::field("psi") * sym::field_deriv("psis", {"t"});
  CHECK(e == expected);
}

TEST_CASE("parse: decimal literals are exact rationals") {
  auto ctx = tu::string_ctx();
  CHECK(sym::parse("0.25", ctx) == sym::rational(1, 4));
  CHECK(sym::parse("2.5e-1", ctx) == sym::rational(1, 4));
  CHECK(sym::parse("12.5e2", ctx) == sym::constant(1250));
}

TEST_CASE("parse errors carry positions and codes") {
  auto ctx = tu::string_ctx();
  CHECK_THROWS_WITH_AS(sym::parse("mu*(T+", ctx), doctest::Contains("position"), Error);
  try {
    sym::parse("D(mu,t)", ctx);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "symexpr.nonfield_deriv");
  }
  try {
    sym::parse("D(phi,t,x,t)", ctx);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "symexpr.order_overflow");
  }
  try {
    sym::parse("s3", ctx);  // only two coordinates declared
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "symexpr.syntax");
  }
  try {
    sym::parse("1/0", ctx);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "symexpr.division_by_zero");
  }
  // strict parameter list
  sym::ParseContext strict = ctx;
  strict.params = {"mu", "T"};
  CHECK_NOTHROW(sym::parse("mu*T", strict));
  try {
    sym::parse("mu*zeta", strict);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "symexpr.undeclared");
  }
}

TEST_CASE("diff_wrt golden rules") {
  auto ctx = tu::string_ctx();
  Expr dphit = sym::field_deriv("phi", {"t"});
  CHECK(sym::diff_wrt(sym::parse("mu/2*D(phi,t)^2", ctx), dphit) ==
        sym::parse("mu*D(phi,t)", ctx));
  CHECK(sym::diff_wrt(sym::parse("-(gamma/mu)*s0", ctx), sym::action_density(0)) ==
        sym::parse("-gamma/mu", ctx));
  CHECK(sym::diff_wrt(sym::parse("U(x)", ctx), sym::coordinate("x")) ==
        sym::parse("U'(x)", ctx));
}

TEST_CASE("total_derivative golden rules") {
  auto ctx = tu::string_ctx();
  CHECK(sym::total_derivative(sym::parse("mu*D(phi,t)", ctx), "t") ==
        sym::parse("mu*D(phi,t,t)", ctx));
  CHECK(sym::total_derivative(sym::parse("-T*D(phi,x)", ctx), "x") ==
        sym::parse("-T*D(phi,x,x)", ctx));
  // coordinates are mutually independent: no dx/dt term
  CHECK(sym::total_derivative(sym::parse("x*D(phi,t)", ctx), "t") ==
        sym::parse("x*D(phi,t,t)", ctx));
  // chain rule through fields and opaque potentials
  CHECK(sym::total_derivative(sym::parse("U(phi)", ctx), "t") ==
        sym::parse("U'(phi)*D(phi,t)", ctx));
}

TEST_CASE("total_derivative rejects order overflow and s-dependence") {
  auto ctx = tu::string_ctx();
  try {
    sym::total_derivative(sym::parse("D(phi,t,t)", ctx), "t");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "symexpr.order_overflow");
  }
  try {
    sym::total_derivative(sym::parse("s0*D(phi,t)", ctx), "t");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "symexpr.s_dependence");
  }
}

TEST_CASE("equivalent: golden cases") {
  auto ctx = tu::string_ctx();
  CHECK(sym::equivalent(sym::parse("D(phi,t)^2-1", ctx),
                        sym::parse("(D(phi,t)-1)*(D(phi,t)+1)", ctx), 64, 1234, 1e-9));
  CHECK_FALSE(sym::equivalent(sym::parse("mu*D(phi,t)", ctx),
                              sym::parse("T*D(phi,t)", ctx), 64, 1234, 1e-9));
}

TEST_CASE("equivalent: requires at least 16 trials") {
  auto ctx = tu::string_ctx();
  CHECK_THROWS_AS(
      sym::equivalent(sym::parse("mu", ctx), sym::parse("mu", ctx), 8, 1, 1e-9), Error);
}

TEST_CASE("property: normalize is idempotent") {
  tu::ExprGen gen(2024);
  for (int i = 0; i < 200; ++i) {
    Expr e = gen.gen(3);
    Expr n1 = sym::normalize(e);
    CHECK(sym::normalize(n1) == n1);
    CHECK(n1 == e);  // construction already canonicalizes
  }
}

TEST_CASE("property: expand preserves value") {
  tu::ExprGen gen(77);
  for (int i = 0; i < 40; ++i) {
    Expr e = gen.gen(3);
    CHECK(sym::equivalent(e, sym::expand(e), 16, 900 + i, 1e-8));
  }
}

TEST_CASE("property: diff_wrt is linear") {
  tu::ExprGen gen(11);
  Expr dphit = sym::field_deriv("phi", {"t"});
  for (int i = 0; i < 40; ++i) {
    Expr a = gen.gen(2), b = gen.gen(2);
    Expr lhs = sym::diff_wrt(a + b, dphit);
    Expr rhs = sym::diff_wrt(a, dphit) + sym::diff_wrt(b, dphit);
    CHECK(sym::equivalent(lhs, rhs, 16, 5000 + i, 1e-8));
  }
}

TEST_CASE("property: total derivatives commute on order-0 inputs") {
  tu::ExprGen gen(13, /*with_derivs=*/false);
  for (int i = 0; i < 40; ++i) {
    Expr e = gen.gen(2);
    Expr ab = sym::total_derivative(sym::total_derivative(e, "x"), "t");
    Expr ba = sym::total_derivative(sym::total_derivative(e, "t"), "x");
    CHECK(sym::equivalent(ab, ba, 16, 7000 + i, 1e-8));
  }
}

TEST_CASE("property: print/parse round trip is structural identity") {
  auto ctx = tu::string_ctx();
  tu::ExprGen gen(17);
  for (int i = 0; i < 200; ++i) {
    Expr e = gen.gen(3);
    Expr back = sym::parse(sym::to_string(e), ctx);
    CHECK(back == e);
  }
}

TEST_CASE("property: equivalent is reflexive and symmetric for fixed seed") {
  tu::ExprGen gen(19);
  for (int i = 0; i < 20; ++i) {
    Expr a = gen.gen(2), b = gen.gen(2);
    CHECK(sym::equivalent(a, sym::normalize(a), 16, 31 + i, 1e-9));
    CHECK(sym::equivalent(a, b, 16, 100 + i, 1e-6) ==
          sym::equivalent(b, a, 16, 100 + i, 1e-6));
  }
}

TEST_CASE("evaluation reports unbound symbols") {
  auto ctx = tu::string_ctx();
  sym::Bindings empty;
  try {
    sym::evaluate(sym::parse("mu", ctx), empty);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "symexpr.unbound");
  }
}

TEST_CASE("substitute replaces leaf symbols") {
  auto ctx = tu::string_ctx();
  Expr L = sym::parse("mu/2*D(phi,t)^2 - gamma/mu*s0", ctx);
  Expr zeroed = sym::substitute(L, sym::parameter("gamma"), sym::constant(0));
  CHECK(zeroed == sym::parse("mu/2*D(phi,t)^2", ctx));
  Expr s_gone = sym::substitute(L, sym::action_density(0), sym::constant(0));
  CHECK(s_gone == zeroed);
}
