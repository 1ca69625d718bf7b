#pragma once

#include <herglotz/errors.hpp>

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <optional>

// Finite-difference solvers for the dissipative field equations on a 1+1-D
// space-time rectangle, plus action-density tracking and decay-rate fitting.
namespace herglotz {

struct Grid1P1D {
  int nx = 0, nt = 0;
  double dx = 0, dt = 0;
  double x0 = 0;

  // Dirichlet-style node layout: x_j = x0 + j*dx covers [x0, x0+length] with
  // nx nodes, t_n = n*dt covers [0, t_end] with nt nodes.
  static Grid1P1D make(double length, double t_end, int nx, int nt, double x0 = 0.0);

  double x(int j) const { return x0 + j * dx; }
  double t(int n) const { return n * dt; }
  double length() const { return dx * (nx - 1); }
  double t_end() const { return dt * (nt - 1); }
};

enum class BoundaryKind { Dirichlet, Periodic };

template <class Scalar>
struct FieldStateSeries {
  Grid1P1D grid;
  // One row per time node.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;
  std::optional<Eigen::MatrixXd> s1;  // tracked temporal action-density component
};

using RealFieldSeries = FieldStateSeries<double>;
using ComplexFieldSeries = FieldStateSeries<std::complex<double>>;

// u_tt = c2 u_xx - a u_t - b u
struct DampedWaveParams {
  double c2 = 1.0;
  double a = 0.0;
  double b = 0.0;
};

// Leapfrog, second order in space and time; the damping term is centered
// across the step so it does not degrade the order. Requires the Courant
// condition sqrt(c2) dt/dx <= 1.
RealFieldSeries simulate_damped_wave(const DampedWaveParams& p, const Eigen::VectorXd& u0,
                                     const Eigen::VectorXd& v0, BoundaryKind bc,
                                     const Grid1P1D& grid);

// i hbar dPsi/dt = -(hbar^2/2m) Psi_xx + V Psi - i hbar (gamma0/2) Psi
//                  - (hbar^2/2m) gamma1 Psi_x
// Crank-Nicolson on the gamma0-free part (gamma1 as a centered first
// derivative inside the implicit matrix); the gamma0 term is applied as the
// exact per-step factor exp(-gamma0 dt/2), which commutes with the rest.
// Dirichlet boundaries.
ComplexFieldSeries simulate_schrodinger(const Eigen::VectorXd& potential, double gamma0,
                                        double gamma1, const Eigen::VectorXcd& psi0,
                                        const Grid1P1D& grid, double hbar = 1.0,
                                        double mass = 1.0);

// Max discrete residual of d rho/dt + dJ/dx + gamma1 J + gamma0 rho over
// interior nodes; O(dx^2 + dt^2) on smooth solutions.
double continuity_residual(const ComplexFieldSeries& series, double gamma0, double gamma1,
                           double hbar = 1.0, double mass = 1.0);

// Integrates ds1/dt = s_coeff * s1 + density0(t,x) column-wise with the exact
// integrating factor for the linear part and trapezoidal forcing.
Eigen::MatrixXd track_action_density(const Eigen::MatrixXd& density0, double s_coeff,
                                     const Grid1P1D& grid, const Eigen::VectorXd& s1_init);

// s-free part of the string Lagrangian density mu/2 phi_t^2 - T/2 phi_x^2
// sampled on the grid with second-order differences.
Eigen::MatrixXd string_density0(const RealFieldSeries& series, double mu, double tension);

struct ExpFit {
  double rate = 0.0;  // decay rate: samples ~ C exp(-rate t)
  double r2 = 1.0;
};

// Least-squares fit of log-values against time; samples must be positive.
ExpFit fit_exponential_decay(const Eigen::VectorXd& values, const Eigen::VectorXd& t);

// Projection of each time slice onto the Dirichlet mode sin(n pi (x-x0)/L).
Eigen::VectorXd mode_amplitude(const RealFieldSeries& series, int mode);

struct ModeDecayFit {
  double rate = 0.0;   // envelope decay rate
  double omega = 0.0;  // oscillation angular frequency
};

// Envelope rate from the local extrema of |A|, frequency from the mean
// zero-crossing spacing.
ModeDecayFit fit_mode_decay(const Eigen::VectorXd& amplitude, const Eigen::VectorXd& t);

// Exactly conserved discrete energy of the undamped leapfrog scheme,
// evaluated between steps n and n+1.
double leapfrog_energy(const RealFieldSeries& series, const DampedWaveParams& p, int n);

void write_csv(const RealFieldSeries& series, std::ostream& os, bool wide = false);
void write_csv(const ComplexFieldSeries& series, std::ostream& os, bool wide = false);

}  // namespace herglotz
