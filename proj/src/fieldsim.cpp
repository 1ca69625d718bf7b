#include <herglotz/fieldsim.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

namespace herglotz {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Cplx = std::complex<double>;

Grid1P1D Grid1P1D::make(double length, double t_end, int nx, int nt, double x0) {
  if (nx < 8 || nt < 8)
    throw Error("fieldsim.bad_grid", "grid needs nx >= 8 and nt >= 8");
  Grid1P1D g;
  g.nx = nx;
  g.nt = nt;
  g.dx = length / (nx - 1);
  g.dt = t_end / (nt - 1);
  g.x0 = x0;
  return g;
}

namespace {

void check_finite(const VectorXd& u, int step) {
  if (!u.allFinite())
    throw Error("fieldsim.nonfinite",
                "field became non-finite at time step " + std::to_string(step));
}

VectorXd laplacian(const VectorXd& u, double dx, BoundaryKind bc) {
  const int nx = static_cast<int>(u.size());
  VectorXd out = VectorXd::Zero(nx);
  const double inv = 1.0 / (dx * dx);
  for (int j = 1; j + 1 < nx; ++j)
    out[j] = (u[j + 1] - 2 * u[j] + u[j - 1]) * inv;
  if (bc == BoundaryKind::Periodic) {
    out[0] = (u[1] - 2 * u[0] + u[nx - 1]) * inv;
    out[nx - 1] = (u[0] - 2 * u[nx - 1] + u[nx - 2]) * inv;
  }
  return out;
}

}  // namespace

RealFieldSeries simulate_damped_wave(const DampedWaveParams& p, const VectorXd& u0,
                                     const VectorXd& v0, BoundaryKind bc,
                                     const Grid1P1D& grid) {
  if (u0.size() != grid.nx || v0.size() != grid.nx)
    throw Error("fieldsim.bad_grid", "initial profiles do not match nx");
  const double courant = std::sqrt(p.c2) * grid.dt / grid.dx;
  if (courant > 1.0 + 1e-12)
    throw Error("fieldsim.courant",
                "Courant number " + std::to_string(courant) + " exceeds 1");

  RealFieldSeries out;
  out.grid = grid;
  out.values.resize(grid.nt, grid.nx);

  VectorXd prev = u0;
  // Second-order Taylor start.
  VectorXd lap = laplacian(u0, grid.dx, bc);
  VectorXd cur =
      u0 + grid.dt * v0 +
      0.5 * grid.dt * grid.dt * (p.c2 * lap - p.a * v0 - p.b * u0).eval();
  if (bc == BoundaryKind::Dirichlet) {
    cur[0] = u0[0];
    cur[grid.nx - 1] = u0[grid.nx - 1];
  }
  out.values.row(0) = prev;
  if (grid.nt > 1) out.values.row(1) = cur;

  const double dt2 = grid.dt * grid.dt;
  const double damp = 0.5 * p.a * grid.dt;
  for (int n = 2; n < grid.nt; ++n) {
    VectorXd lapc = laplacian(cur, grid.dx, bc);
    VectorXd next =
        (2.0 * cur - (1.0 - damp) * prev + dt2 * (p.c2 * lapc - p.b * cur)) / (1.0 + damp);
    if (bc == BoundaryKind::Dirichlet) {
      next[0] = u0[0];
      next[grid.nx - 1] = u0[grid.nx - 1];
    }
    check_finite(next, n);
    out.values.row(n) = next;
    prev.swap(cur);
    cur.swap(next);
  }
  return out;
}

ComplexFieldSeries simulate_schrodinger(const VectorXd& potential, double gamma0,
                                        double gamma1, const VectorXcd& psi0,
                                        const Grid1P1D& grid, double hbar, double mass) {
  const int nx = grid.nx;
  if (potential.size() != nx || psi0.size() != nx)
    throw Error("fieldsim.bad_grid", "potential/initial profiles do not match nx");

  ComplexFieldSeries out;
  out.grid = grid;
  out.values.resize(grid.nt, nx);
  out.values.row(0) = psi0;

  // H psi = -(hbar^2/2m) psi_xx + V psi - (hbar^2/2m) gamma1 psi_x
  const double alpha = hbar * hbar / (2.0 * mass * grid.dx * grid.dx);
  const double beta = hbar * hbar * gamma1 / (4.0 * mass * grid.dx);
  const Cplx mu = Cplx(0, 1) * grid.dt / (2.0 * hbar);  // i dt / (2 hbar)
  const double decay = std::exp(-0.5 * gamma0 * grid.dt);

  // Tridiagonal coefficients of H over interior nodes.
  const int m = nx - 2;
  if (m < 2) throw Error("fieldsim.bad_grid", "grid too small for interior solve");
  std::vector<Cplx> dlo(m), dia(m), dup(m);
  for (int j = 0; j < m; ++j) {
    dlo[j] = -alpha + beta;
    dia[j] = 2.0 * alpha + potential[j + 1];
    dup[j] = -alpha - beta;
  }

  VectorXcd cur = psi0;
  std::vector<Cplx> a(m), b(m), c(m), rhs(m), work(m);
  for (int n = 1; n < grid.nt; ++n) {
    // rhs = (I - mu H) cur  restricted to the interior
    for (int j = 0; j < m; ++j) {
      Cplx h = dia[j] * cur[j + 1];
      h += dlo[j] * cur[j];      // cur[j] is psi_{j-1} for interior index j
      h += dup[j] * cur[j + 2];
      rhs[j] = cur[j + 1] - mu * h;
      a[j] = mu * dlo[j];
      b[j] = 1.0 + mu * dia[j];
      c[j] = mu * dup[j];
    }
    // Thomas solve of (I + mu H) psi' = rhs
    Cplx piv = b[0];
    if (std::abs(piv) < 1e-300)
      throw Error("fieldsim.singular", "tridiagonal pivot vanished");
    work[0] = c[0] / piv;
    rhs[0] = rhs[0] / piv;
    for (int j = 1; j < m; ++j) {
      piv = b[j] - a[j] * work[j - 1];
      if (std::abs(piv) < 1e-300)
        throw Error("fieldsim.singular", "tridiagonal pivot vanished");
      work[j] = c[j] / piv;
      rhs[j] = (rhs[j] - a[j] * rhs[j - 1]) / piv;
    }
    for (int j = m - 2; j >= 0; --j) rhs[j] -= work[j] * rhs[j + 1];

    VectorXcd next = VectorXcd::Zero(nx);
    for (int j = 0; j < m; ++j) next[j + 1] = rhs[j] * decay;
    if (!next.allFinite())
      throw Error("fieldsim.nonfinite",
                  "field became non-finite at time step " + std::to_string(n));
    out.values.row(n) = next;
    cur.swap(next);
  }
  return out;
}

double continuity_residual(const ComplexFieldSeries& series, double gamma0, double gamma1,
                           double hbar, double mass) {
  const Grid1P1D& g = series.grid;
  const MatrixXcd& psi = series.values;
  MatrixXd rho = psi.cwiseAbs2();
  // J = (hbar/2mi)(psi* psi_x - psi psi_x*)  = (hbar/m) Im(psi* psi_x)
  MatrixXd J(g.nt, g.nx);
  J.setZero();
  const double fac = hbar / mass;
  for (int n = 0; n < g.nt; ++n)
    for (int j = 1; j + 1 < g.nx; ++j) {
      Cplx dpsi = (psi(n, j + 1) - psi(n, j - 1)) / (2.0 * g.dx);
      J(n, j) = fac * std::imag(std::conj(psi(n, j)) * dpsi);
    }
  double worst = 0.0;
  for (int n = 1; n + 1 < g.nt; ++n)
    for (int j = 2; j + 2 < g.nx; ++j) {
      double drho = (rho(n + 1, j) - rho(n - 1, j)) / (2.0 * g.dt);
      double dJ = (J(n, j + 1) - J(n, j - 1)) / (2.0 * g.dx);
      double r = drho + dJ + gamma1 * J(n, j) + gamma0 * rho(n, j);
      worst = std::max(worst, std::abs(r));
    }
  return worst;
}

Eigen::MatrixXd track_action_density(const MatrixXd& density0, double s_coeff,
                                     const Grid1P1D& grid, const VectorXd& s1_init) {
  if (density0.rows() != grid.nt || density0.cols() != grid.nx)
    throw Error("fieldsim.bad_grid", "density samples do not match the grid");
  if (s1_init.size() != grid.nx)
    throw Error("fieldsim.bad_grid", "s1 initial profile does not match nx");
  MatrixXd s1(grid.nt, grid.nx);
  s1.row(0) = s1_init;
  const double E = std::exp(s_coeff * grid.dt);
  for (int n = 0; n + 1 < grid.nt; ++n)
    for (int j = 0; j < grid.nx; ++j)
      s1(n + 1, j) =
          E * s1(n, j) + 0.5 * grid.dt * (E * density0(n, j) + density0(n + 1, j));
  return s1;
}

Eigen::MatrixXd string_density0(const RealFieldSeries& series, double mu, double tension) {
  const Grid1P1D& g = series.grid;
  const MatrixXd& u = series.values;
  MatrixXd ut(g.nt, g.nx), ux(g.nt, g.nx);
  for (int j = 0; j < g.nx; ++j) {
    ut(0, j) = (-3 * u(0, j) + 4 * u(1, j) - u(2, j)) / (2 * g.dt);
    for (int n = 1; n + 1 < g.nt; ++n) ut(n, j) = (u(n + 1, j) - u(n - 1, j)) / (2 * g.dt);
    ut(g.nt - 1, j) =
        (3 * u(g.nt - 1, j) - 4 * u(g.nt - 2, j) + u(g.nt - 3, j)) / (2 * g.dt);
  }
  for (int n = 0; n < g.nt; ++n) {
    ux(n, 0) = (-3 * u(n, 0) + 4 * u(n, 1) - u(n, 2)) / (2 * g.dx);
    for (int j = 1; j + 1 < g.nx; ++j) ux(n, j) = (u(n, j + 1) - u(n, j - 1)) / (2 * g.dx);
    ux(n, g.nx - 1) =
        (3 * u(n, g.nx - 1) - 4 * u(n, g.nx - 2) + u(n, g.nx - 3)) / (2 * g.dx);
  }
  return 0.5 * mu * ut.array().square().matrix() -
         0.5 * tension * ux.array().square().matrix();
}

ExpFit fit_exponential_decay(const VectorXd& values, const VectorXd& t) {
  const int n = static_cast<int>(values.size());
  if (n < 2 || t.size() != n)
    throw Error("fieldsim.bad_fit", "need at least two samples with matching times");
  VectorXd logy(n);
  for (int i = 0; i < n; ++i) {
    if (!(values[i] > 0.0))
      throw Error("fieldsim.nonpositive_sample",
                  "exponential fit requires strictly positive samples (sample " +
                      std::to_string(i) + ")");
    logy[i] = std::log(values[i]);
  }
  const double tbar = t.mean(), ybar = logy.mean();
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (t[i] - tbar) * (t[i] - tbar);
    sxy += (t[i] - tbar) * (logy[i] - ybar);
  }
  double slope = sxx > 0 ? sxy / sxx : 0.0;
  double ss_res = 0, ss_tot = 0;
  for (int i = 0; i < n; ++i) {
    double fit = ybar + slope * (t[i] - tbar);
    ss_res += (logy[i] - fit) * (logy[i] - fit);
    ss_tot += (logy[i] - ybar) * (logy[i] - ybar);
  }
  ExpFit f;
  f.rate = -slope;
  f.r2 = ss_tot > 1e-300 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

Eigen::VectorXd mode_amplitude(const RealFieldSeries& series, int mode) {
  const Grid1P1D& g = series.grid;
  const double L = g.length();
  VectorXd shape(g.nx);
  for (int j = 0; j < g.nx; ++j)
    shape[j] = std::sin(mode * M_PI * (g.x(j) - g.x0) / L);
  VectorXd out(g.nt);
  for (int n = 0; n < g.nt; ++n) {
    // trapezoidal projection, 2/L normalization
    double acc = 0;
    for (int j = 0; j + 1 < g.nx; ++j)
      acc += 0.5 * (series.values(n, j) * shape[j] + series.values(n, j + 1) * shape[j + 1]);
    out[n] = 2.0 / L * acc * g.dx;
  }
  return out;
}

ModeDecayFit fit_mode_decay(const VectorXd& A, const VectorXd& t) {
  const int n = static_cast<int>(A.size());
  ModeDecayFit fit;
  // Envelope samples: parabola-refined local maxima of |A|.
  std::vector<double> pt, pv;
  for (int i = 1; i + 1 < n; ++i) {
    double a0 = std::abs(A[i - 1]), a1 = std::abs(A[i]), a2 = std::abs(A[i + 1]);
    if (a1 >= a0 && a1 >= a2 && a1 > 0) {
      double denom = a0 - 2 * a1 + a2;
      double delta = denom != 0 ? 0.5 * (a0 - a2) / denom : 0.0;
      delta = std::clamp(delta, -0.5, 0.5);
      double h = t[i + 1] - t[i];
      pt.push_back(t[i] + delta * h);
      pv.push_back(a1 - 0.25 * (a0 - a2) * delta);
    }
  }
  if (pt.size() >= 3) {
    VectorXd vt = Eigen::Map<VectorXd>(pt.data(), pt.size());
    VectorXd vv = Eigen::Map<VectorXd>(pv.data(), pv.size());
    fit.rate = fit_exponential_decay(vv, vt).rate;
  } else if (n >= 2 && A.minCoeff() > 0) {
    fit.rate = fit_exponential_decay(A.cwiseAbs(), t).rate;
  }
  // Frequency from mean zero-crossing spacing (half period each).
  std::vector<double> zeros;
  for (int i = 0; i + 1 < n; ++i) {
    if ((A[i] < 0) != (A[i + 1] < 0) && A[i] != A[i + 1]) {
      double frac = A[i] / (A[i] - A[i + 1]);
      zeros.push_back(t[i] + frac * (t[i + 1] - t[i]));
    }
  }
  if (zeros.size() >= 2) {
    double span = zeros.back() - zeros.front();
    fit.omega = M_PI * (zeros.size() - 1) / span;
  }
  return fit;
}

double leapfrog_energy(const RealFieldSeries& series, const DampedWaveParams& p, int n) {
  const Grid1P1D& g = series.grid;
  const MatrixXd& u = series.values;
  double kin = 0, ela = 0, mass_term = 0;
  for (int j = 0; j < g.nx; ++j) {
    double du = (u(n + 1, j) - u(n, j)) / g.dt;
    kin += du * du;
    mass_term += u(n + 1, j) * u(n, j);
  }
  for (int j = 0; j + 1 < g.nx; ++j) {
    double da = (u(n + 1, j + 1) - u(n + 1, j)) / g.dx;
    double db = (u(n, j + 1) - u(n, j)) / g.dx;
    ela += da * db;
  }
  return 0.5 * g.dx * (kin + p.c2 * ela + p.b * mass_term);
}

namespace {

template <class Scalar>
void write_csv_impl(const FieldStateSeries<Scalar>& series, std::ostream& os, bool wide);

void print_value(std::ostream& os, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

void print_cell(std::ostream& os, double v) { print_value(os, v); }
void print_cell(std::ostream& os, Cplx v) {
  print_value(os, v.real());
  os << ",";
  print_value(os, v.imag());
}

template <class Scalar>
void write_csv_impl(const FieldStateSeries<Scalar>& series, std::ostream& os, bool wide) {
  const Grid1P1D& g = series.grid;
  constexpr bool complex_valued = !std::is_same_v<Scalar, double>;
  if (wide) {
    os << "t";
    for (int j = 0; j < g.nx; ++j) {
      os << ",";
      if (complex_valued) {
        os << "re_x";
        print_value(os, g.x(j));
        os << ",im_x";
        print_value(os, g.x(j));
      } else {
        os << "x";
        print_value(os, g.x(j));
      }
    }
    os << "\n";
    for (int n = 0; n < g.nt; ++n) {
      print_value(os, g.t(n));
      for (int j = 0; j < g.nx; ++j) {
        os << ",";
        print_cell(os, series.values(n, j));
      }
      os << "\n";
    }
  } else {
    os << (complex_valued ? "t,x,re,im\n" : "t,x,value\n");
    for (int n = 0; n < g.nt; ++n)
      for (int j = 0; j < g.nx; ++j) {
        print_value(os, g.t(n));
        os << ",";
        print_value(os, g.x(j));
        os << ",";
        print_cell(os, series.values(n, j));
        os << "\n";
      }
  }
}

}  // namespace

void write_csv(const RealFieldSeries& series, std::ostream& os, bool wide) {
  write_csv_impl(series, os, wide);
}

void write_csv(const ComplexFieldSeries& series, std::ostream& os, bool wide) {
  write_csv_impl(series, os, wide);
}

}  // namespace herglotz
