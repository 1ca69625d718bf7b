#pragma once

#include <herglotz/fieldsim.hpp>
#include <herglotz/herglotz1d.hpp>

#include <Eigen/Dense>

#include <functional>
#include <optional>

// Brute-force verification of the variational principle: compute the Action
// from the action-density field and check that the first variation in a
// compactly supported bump direction vanishes on Euler-Lagrange solutions.
// Deliberately independent of the symbolic derivation machinery.
namespace herglotz {

// C^1 bump ((1+cos(pi u))/2)^2, compactly supported on |u| < 1; optionally a
// product of a time bump and a space bump.
struct BumpPerturbation {
  double center_t = 0.0;
  double width_t = 1.0;
  double amplitude = 1.0;
  std::optional<double> center_x;
  std::optional<double> width_x;

  double shape(double u) const;
  double at(double t) const;
  double at(double t, double x) const;
};

// Integrates S' = L(t, x, x', S) with a 4th-order one-step method on cubic
// Hermite interpolation of the sampled path (node derivatives from 4th-order
// differences). Returns S at the right endpoint.
double action_1d(const StateFn& lagrangian, const Eigen::VectorXd& t,
                 const Eigen::VectorXd& x, double s_a);

using DensityBuilder = std::function<Eigen::MatrixXd(const RealFieldSeries&)>;

// Boundary-flux action of a 1+1-D rectangle with action density (s1, 0):
// tracks s1 through its linear ODE and returns the difference of the two
// time-boundary integrals.
double action_field_1p1(const DensityBuilder& density0, double s_coeff,
                        const RealFieldSeries& series, const Eigen::VectorXd& s1_init);

struct VariationReport {
  double S0 = 0.0;      // action at the unperturbed field
  double dS = 0.0;      // central-difference dS/deps at the solution
  double ref_dS = 0.0;  // same at solution + offset * bump
  double ratio = 0.0;   // |ref_dS| / |dS|
};

VariationReport stationarity_test_1d(const StateFn& lagrangian, const Eigen::VectorXd& t,
                                     const Eigen::VectorXd& x_solution, double s_a,
                                     const BumpPerturbation& bump, double eps,
                                     double nonsolution_offset);

VariationReport stationarity_test_field(const DensityBuilder& density0, double s_coeff,
                                        const RealFieldSeries& solution,
                                        const Eigen::VectorXd& s1_init,
                                        const BumpPerturbation& bump, double eps,
                                        double nonsolution_offset);

}  // namespace herglotz
