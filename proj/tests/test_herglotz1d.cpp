#include <doctest.h>

#include <herglotz/herglotz1d.hpp>

#include <cmath>

#include "helpers.hpp"

using namespace herglotz;
namespace tu = testutil;

TEST_CASE("conservative oscillator reproduces cos t and S = -sin(2t)/4") {
  auto sys = oscillator_ode(1.0, 1.0, 0.0);
  auto traj = integrate_ivp(sys, 1.0, 0.0, 0.0, 0.0, 2 * M_PI, 4096);
  double ex = 0, eS = 0;
  for (int i = 0; i < traj.nodes(); ++i) {
    ex = std::max(ex, std::abs(traj.x[i] - std::cos(traj.t[i])));
    eS = std::max(eS, std::abs(traj.S[i] + std::sin(2 * traj.t[i]) / 4));
  }
  CHECK(ex <= 1e-8);
  CHECK(eS <= 1e-8);
}

TEST_CASE("canonical quantities at the initial point") {
  auto sys = oscillator_ode(1.0, 1.0, 0.0);
  auto traj = integrate_ivp(sys, 1.0, 0.0, 0.0, 0.0, 1.0, 16);
  CHECK(traj.p[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(traj.H[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("damped oscillator matches the analytic underdamped solution") {
  tu::Underdamped exact{1.0, 1.0, 0.1, 1.0};
  auto sys = oscillator_ode(1.0, 1.0, 0.1);
  auto traj = integrate_ivp(sys, 1.0, 0.0, 0.0, 0.0, 20.0, 4096);
  double worst = 0;
  for (int i = 0; i < traj.nodes(); ++i)
    worst = std::max(worst, std::abs(traj.x[i] - exact.x(traj.t[i])));
  CHECK(worst <= 1e-6);
}

TEST_CASE("identity: H = T + U + (gamma/m) S and p = m v along trajectories") {
  const double m = 1.3, k = 0.8, gamma = 0.25;
  auto sys = oscillator_ode(m, k, gamma);
  auto traj = integrate_ivp(sys, 0.7, -0.2, 0.1, 0.0, 5.0, 512);
  for (int i = 0; i < traj.nodes(); i += 50) {
    double expect =
        0.5 * m * traj.v[i] * traj.v[i] + 0.5 * k * traj.x[i] * traj.x[i] +
        gamma / m * traj.S[i];
    CHECK(std::abs(traj.H[i] - expect) <= 1e-12);
    CHECK(std::abs(traj.p[i] - m * traj.v[i]) <= 1e-14);
  }
}

TEST_CASE("conservative runs conserve H to integrator order") {
  auto sys = oscillator_ode(1.0, 1.0, 0.0);
  auto traj = integrate_ivp(sys, 1.0, 0.0, 0.0, 0.0, 2 * M_PI, 2048);
  double drift = 0;
  for (int i = 0; i < traj.nodes(); ++i)
    drift = std::max(drift, std::abs(traj.H[i] - traj.H[0]));
  CHECK(drift <= 1e-9);
}

TEST_CASE("dissipation identity d(T+U)/dt = -gamma v^2") {
  SUBCASE("conservative run is pure discretization error") {
    auto sys = oscillator_ode(1.0, 1.0, 0.0);
    auto traj = integrate_ivp(sys, 1.0, 0.0, 0.0, 0.0, 20.0, 4096);
    CHECK(dissipation_rate_check(traj, 0.0, 1.0, 1.0) <= 1e-6);
  }
  SUBCASE("damped run meets the h^2 contract and halves by ~4x") {
    auto sys = oscillator_ode(1.0, 1.0, 0.1);
    auto coarse = integrate_ivp(sys, 1.0, 0.0, 0.0, 0.0, 20.0, 2048);
    auto fine = integrate_ivp(sys, 1.0, 0.0, 0.0, 0.0, 20.0, 4096);
    double rc = dissipation_rate_check(coarse, 0.1, 1.0, 1.0);
    double rf = dissipation_rate_check(fine, 0.1, 1.0, 1.0);
    CHECK(rf <= 1e-4);
    CHECK(rc / rf > 3.0);
    CHECK(rc / rf < 5.0);
  }
}

TEST_CASE("shooting recovers the conservative boundary problem") {
  auto sys = oscillator_ode(1.0, 1.0, 0.0);
  auto traj = solve_bvp_shooting(sys, 1.0, std::cos(1.0), 0.0, 0.0, 1.0, 2048);
  CHECK(std::abs(traj.x[traj.nodes() - 1] - std::cos(1.0)) <= 1e-8);
  CHECK(std::abs(traj.v[0]) <= 1e-7);
}

TEST_CASE("shooting round-trips an IVP-generated boundary value (damped)") {
  auto sys = oscillator_ode(1.0, 1.0, 0.1);
  const double v0_true = 0.3;
  auto fwd = integrate_ivp(sys, 1.0, v0_true, 0.0, 0.0, 2.0, 2048);
  double xb = fwd.x[fwd.nodes() - 1];
  auto back = solve_bvp_shooting(sys, 1.0, xb, 0.0, 0.0, 2.0, 2048);
  CHECK(std::abs(back.v[0] - v0_true) <= 1e-6);
}

TEST_CASE("degenerate span collapses to a constant trajectory") {
  auto sys = oscillator_ode(1.0, 1.0, 0.0);
  auto traj = solve_bvp_shooting(sys, 1.0, 1.0, 0.0, 0.0, 1e-6, 16);
  CHECK(std::abs(traj.v[0]) <= 1e-3);
  for (int i = 0; i < traj.nodes(); ++i) CHECK(std::abs(traj.x[i] - 1.0) <= 1e-9);
}

TEST_CASE("unreachable boundary value reports the best residual") {
  auto sys = oscillator_ode(1.0, 1.0, 0.0);
  try {
    solve_bvp_shooting(sys, 1.0, 50.0, 0.0, 0.0, 1.0, 128);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK((e.code() == "herglotz1d.no_bracket" || e.code() == "herglotz1d.max_iter"));
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_CASE("finite-time blow-up is reported with the offending step") {
  OdeRight sys;
  sys.accel = [](double, double x, double, double) { return x * x * x; };
  sys.lagrangian = [](double, double, double v, double) { return 0.5 * v * v; };
  sys.momentum = [](double, double, double v, double) { return v; };
  try {
    integrate_ivp(sys, 5.0, 5.0, 0.0, 0.0, 10.0, 64);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == "herglotz1d.nonfinite");
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("symbolically derived oscillator matches the closed-form right-hand side") {
  auto p = preset("oscillator");
  const double k = 1.0;
  std::map<std::string, double> params{{"m", 1.0}, {"gamma", 0.1}};
  std::map<std::string, OpaqueRealFn> opaques{{"U", [k](int order, double x) {
                                                 switch (order) {
                                                   case 0: return 0.5 * k * x * x;
                                                   case 1: return k * x;
                                                   default: return order == 2 ? k : 0.0;
                                                 }
                                               }}};
  auto symbolic = ode_from_problem(p, params, opaques);
  auto direct = oscillator_ode(1.0, 1.0, 0.1);
  auto ta = integrate_ivp(symbolic, 1.0, 0.0, 0.0, 0.0, 5.0, 256);
  auto tb = integrate_ivp(direct, 1.0, 0.0, 0.0, 0.0, 5.0, 256);
  for (int i = 0; i < ta.nodes(); i += 16) {
    CHECK(ta.x[i] == doctest::Approx(tb.x[i]).epsilon(1e-12));
    CHECK(ta.S[i] == doctest::Approx(tb.S[i]).epsilon(1e-12));
    CHECK(ta.H[i] == doctest::Approx(tb.H[i]).epsilon(1e-12));
  }
}

TEST_CASE("ivp requires at least 16 steps") {
  auto sys = oscillator_ode(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(integrate_ivp(sys, 1, 0, 0, 0, 1, 8), Error);
}
