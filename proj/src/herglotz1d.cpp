#include <herglotz/herglotz1d.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace herglotz {

OdeRight oscillator_ode(double m, double k, double gamma) {
  OdeRight sys;
  sys.accel = [m, k, gamma](double, double x, double v, double) {
    return -(k * x + gamma * v) / m;
  };
  sys.lagrangian = [m, k, gamma](double, double x, double v, double S) {
    return 0.5 * m * v * v - 0.5 * k * x * x - (gamma / m) * S;
  };
  sys.momentum = [m](double, double, double v, double) { return m * v; };
  return sys;
}

OdeRight ode_from_problem(const VariationalProblem& p,
                          const std::map<std::string, double>& params,
                          const std::map<std::string, OpaqueRealFn>& opaques) {
  FieldEquation eq = derive_herglotz_ode(p);
  const std::string& tname = p.coords[0];
  const std::string& xname = p.fields[0].name;
  sym::Expr acc_sym = sym::field_deriv(xname, {tname, tname});
  sym::Expr lead = sym::diff_wrt(eq.lhs, acc_sym);
  if (sym::contains_kind(lead, sym::Kind::FieldDeriv))
    throw Error("herglotz1d.nonlinear_accel",
                "equation is not linear in the second time derivative");
  sym::Expr rest = sym::substitute(eq.lhs, acc_sym, sym::constant(0));
  sym::Expr momentum_sym =
      sym::diff_wrt(p.lagrangian, sym::field_deriv(xname, {tname}));
  sym::Expr lagrangian_sym = p.lagrangian;

  auto bind = [params, opaques, tname, xname](double t, double x, double v, double S) {
    sym::Bindings b;
    for (const auto& [k, val] : params) b.params[k] = val;
    b.coords[tname] = t;
    b.fields[xname] = x;
    b.field_derivs[{xname, {tname}}] = v;
    b.action[0] = S;
    for (const auto& [k, fn] : opaques) {
      OpaqueRealFn f = fn;
      b.opaque[k] = [f](int order, sym::Cplx arg) { return sym::Cplx(f(order, arg.real())); };
    }
    return b;
  };
  auto real_eval = [](const sym::Expr& e, const sym::Bindings& b) {
    sym::Cplx z = sym::evaluate(e, b);
    return z.real();
  };

  OdeRight sys;
  sys.accel = [=](double t, double x, double v, double S) {
    sym::Bindings b = bind(t, x, v, S);
    double a = real_eval(lead, b);
    if (std::abs(a) < 1e-14)
      throw Error("herglotz1d.singular", "degenerate second-derivative coefficient");
    return -real_eval(rest, b) / a;
  };
  sys.lagrangian = [=](double t, double x, double v, double S) {
    sym::Bindings b = bind(t, x, v, S);
    return real_eval(lagrangian_sym, b);
  };
  sys.momentum = [=](double t, double x, double v, double S) {
    sym::Bindings b = bind(t, x, v, S);
    return real_eval(momentum_sym, b);
  };
  return sys;
}

HerglotzTrajectory integrate_ivp(const OdeRight& sys, double x0, double v0, double S0,
                                 double a, double b, int steps) {
  if (steps < 16) throw Error("herglotz1d.bad_steps", "at least 16 steps required");
  const double h = (b - a) / steps;
  HerglotzTrajectory tr;
  const int n = steps + 1;
  tr.t.resize(n);
  tr.x.resize(n);
  tr.v.resize(n);
  tr.S.resize(n);
  tr.p.resize(n);
  tr.H.resize(n);

  double x = x0, v = v0, S = S0;
  auto record = [&](int idx, double t) {
    tr.t[idx] = t;
    tr.x[idx] = x;
    tr.v[idx] = v;
    tr.S[idx] = S;
    double p = sys.momentum(t, x, v, S);
    tr.p[idx] = p;
    tr.H[idx] = v * p - sys.lagrangian(t, x, v, S);
  };
  record(0, a);
  for (int i = 0; i < steps; ++i) {
    const double t = a + i * h;
    auto f = [&sys](double tt, double xx, double vv, double SS, double out[3]) {
      out[0] = vv;
      out[1] = sys.accel(tt, xx, vv, SS);
      out[2] = sys.lagrangian(tt, xx, vv, SS);
    };
    double k1[3], k2[3], k3[3], k4[3];
    f(t, x, v, S, k1);
    f(t + h / 2, x + h / 2 * k1[0], v + h / 2 * k1[1], S + h / 2 * k1[2], k2);
    f(t + h / 2, x + h / 2 * k2[0], v + h / 2 * k2[1], S + h / 2 * k2[2], k3);
    f(t + h, x + h * k3[0], v + h * k3[1], S + h * k3[2], k4);
    x += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    v += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    S += h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
    if (!std::isfinite(x) || !std::isfinite(v) || !std::isfinite(S))
      throw Error("herglotz1d.nonfinite",
                  "state became non-finite at step " + std::to_string(i + 1) + " (t = " +
                      std::to_string(t + h) + ")");
    record(i + 1, a + (i + 1) * h);
  }
  return tr;
}

HerglotzTrajectory solve_bvp_shooting(const OdeRight& sys, double xa, double xb, double S0,
                                      double a, double b, int steps,
                                      const ShootingOptions& opt) {
  auto miss = [&](double v0) {
    HerglotzTrajectory tr = integrate_ivp(sys, xa, v0, S0, a, b, steps);
    return tr.x[tr.nodes() - 1] - xb;
  };

  double best_v = 0.0, best_res = std::numeric_limits<double>::infinity();
  auto consider = [&](double v0, double r) {
    if (std::abs(r) < best_res) {
      best_res = std::abs(r);
      best_v = v0;
    }
  };

  // Coarse scan for a sign change.
  double lo = opt.v_lo, hi = opt.v_hi;
  double prev_v = lo, prev_m = miss(lo);
  consider(lo, prev_m);
  bool bracketed = false;
  double bl = 0, bh = 0, ml = 0, mh = 0;
  for (int i = 1; i < opt.scan_points; ++i) {
    double v0 = lo + (hi - lo) * i / (opt.scan_points - 1);
    double m = miss(v0);
    consider(v0, m);
    if (prev_m == 0.0 || (prev_m < 0) != (m < 0)) {
      bracketed = true;
      bl = prev_v;
      bh = v0;
      ml = prev_m;
      mh = m;
      break;
    }
    prev_v = v0;
    prev_m = m;
  }

  double v0 = best_v;
  if (bracketed) {
    for (int it = 0; it < opt.max_iter; ++it) {
      double mid = 0.5 * (bl + bh);
      double mm = miss(mid);
      consider(mid, mm);
      if (std::abs(mm) <= opt.tol) {
        v0 = mid;
        break;
      }
      if ((mm < 0) == (ml < 0)) {
        bl = mid;
        ml = mm;
      } else {
        bh = mid;
        mh = mm;
      }
      v0 = mid;
    }
    (void)mh;
  } else {
    // Secant iteration from the two best scan candidates.
    double v1 = best_v, m1 = miss(v1);
    double v2 = v1 + std::max(1e-3, 1e-3 * std::abs(v1)), m2 = miss(v2);
    consider(v2, m2);
    bool converged = false;
    for (int it = 0; it < opt.max_iter; ++it) {
      if (std::abs(m2) <= opt.tol) {
        v0 = v2;
        converged = true;
        break;
      }
      double denom = m2 - m1;
      if (denom == 0.0 || !std::isfinite(denom)) break;
      double v3 = v2 - m2 * (v2 - v1) / denom;
      if (!std::isfinite(v3)) break;
      v1 = v2;
      m1 = m2;
      v2 = v3;
      m2 = miss(v2);
      consider(v2, m2);
    }
    if (!converged) {
      if (best_res > opt.tol)
        throw Error("herglotz1d.no_bracket",
                    "no bracketing initial velocity found and secant iteration did not "
                    "converge; best terminal residual " +
                        std::to_string(best_res) + " at v0 = " + std::to_string(best_v));
      v0 = best_v;
    }
  }

  HerglotzTrajectory tr = integrate_ivp(sys, xa, v0, S0, a, b, steps);
  double res = std::abs(tr.x[tr.nodes() - 1] - xb);
  if (res > opt.tol * 10 && res > 1e-8)
    throw Error("herglotz1d.max_iter",
                "shooting did not reach the target boundary value; best residual " +
                    std::to_string(res) + " at v0 = " + std::to_string(v0));
  return tr;
}

double dissipation_rate_check(const HerglotzTrajectory& traj, double gamma, double m,
                              double k) {
  const int n = traj.nodes();
  if (n < 3) return 0.0;
  double worst = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    double h = traj.t[i + 1] - traj.t[i];
    auto energy = [&](int j) {
      return 0.5 * m * traj.v[j] * traj.v[j] + 0.5 * k * traj.x[j] * traj.x[j];
    };
    double dEdt = (energy(i + 1) - energy(i - 1)) / (2 * h);
    worst = std::max(worst, std::abs(dEdt + gamma * traj.v[i] * traj.v[i]));
  }
  return worst;
}

void write_csv(const HerglotzTrajectory& traj, std::ostream& os) {
  os << "t,x,v,S,p,H\n";
  char buf[256];
  for (int i = 0; i < traj.nodes(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.t[i],
                  traj.x[i], traj.v[i], traj.S[i], traj.p[i], traj.H[i]);
    os << buf;
  }
}

}  // namespace herglotz
