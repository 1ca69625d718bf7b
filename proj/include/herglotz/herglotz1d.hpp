#pragma once

#include <herglotz/derive.hpp>

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <map>

// 1-D Herglotz problem: integrate the coupled system
//   x' = v,  v' = accel(t, x, v, S),  S' = L(t, x, v, S)
// and track the canonical momentum p = dL/dv and Hamiltonian H = v*p - L.
namespace herglotz {

using StateFn = std::function<double(double t, double x, double v, double S)>;

struct OdeRight {
  StateFn accel;
  StateFn lagrangian;
  StateFn momentum;
};

struct HerglotzTrajectory {
  Eigen::VectorXd t, x, v, S, p, H;
  int nodes() const { return static_cast<int>(t.size()); }
};

// Damped harmonic oscillator family: L = m v^2/2 - k x^2/2 - (gamma/m) S.
OdeRight oscillator_ode(double m, double k, double gamma);

// Closes a derived second-order equation (linear in the second time
// derivative) into an acceleration function, with parameters and opaque
// potentials bound to numeric values.
using OpaqueRealFn = std::function<double(int order, double arg)>;
OdeRight ode_from_problem(const VariationalProblem& p,
                          const std::map<std::string, double>& params,
                          const std::map<std::string, OpaqueRealFn>& opaques);

// Classical fixed-step 4th-order integration; global error O(h^4).
HerglotzTrajectory integrate_ivp(const OdeRight& sys, double x0, double v0, double S0,
                                 double a, double b, int steps);

struct ShootingOptions {
  double tol = 1e-10;
  int max_iter = 200;
  double v_lo = -16.0, v_hi = 16.0;  // bracket scan window for the initial velocity
  int scan_points = 33;
};

// Two-point boundary value problem x(a) = xa, x(b) = xb with S(a) = S0 fixed
// at the left endpoint. Bisection when the scan finds a bracketing pair,
// secant iteration otherwise.
HerglotzTrajectory solve_bvp_shooting(const OdeRight& sys, double xa, double xb, double S0,
                                      double a, double b, int steps,
                                      const ShootingOptions& opt = {});

// Max over interior nodes of |d(T+U)/dt + gamma v^2| via centered differences,
// for the oscillator family with U = k x^2/2. Second order in the step size.
double dissipation_rate_check(const HerglotzTrajectory& traj, double gamma, double m,
                              double k = 1.0);

void write_csv(const HerglotzTrajectory& traj, std::ostream& os);

}  // namespace herglotz
