#include <herglotz/stationarity.hpp>

#include <cmath>

namespace herglotz {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double BumpPerturbation::shape(double u) const {
  if (std::abs(u) >= 1.0) return 0.0;
  double c = 0.5 * (1.0 + std::cos(M_PI * u));
  return c * c;
}

double BumpPerturbation::at(double t) const {
  return amplitude * shape((t - center_t) / width_t);
}

double BumpPerturbation::at(double t, double x) const {
  double v = amplitude * shape((t - center_t) / width_t);
  if (center_x && width_x) v *= shape((x - *center_x) / *width_x);
  return v;
}

namespace {

// 4th-order finite-difference derivatives on a uniform grid.
VectorXd node_derivatives(const VectorXd& y, double h) {
  const int n = static_cast<int>(y.size());
  if (n < 5) throw Error("stationarity.bad_grid", "need at least 5 nodes");
  VectorXd d(n);
  d[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12 * h);
  d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12 * h);
  for (int i = 2; i + 2 < n; ++i)
    d[i] = (y[i - 2] - 8 * y[i - 1] + 8 * y[i + 1] - y[i + 2]) / (12 * h);
  d[n - 2] = (3 * y[n - 1] + 10 * y[n - 2] - 18 * y[n - 3] + 6 * y[n - 4] - y[n - 5]) / (12 * h);
  d[n - 1] = (25 * y[n - 1] - 48 * y[n - 2] + 36 * y[n - 3] - 16 * y[n - 4] + 3 * y[n - 5]) / (12 * h);
  return d;
}

struct Hermite {
  double x0, x1, d0, d1, h;
  // value and derivative at fraction s in [0,1]
  void eval(double s, double& x, double& v) const {
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    x = h00 * x0 + h10 * h * d0 + h01 * x1 + h11 * h * d1;
    double g00 = 6 * s2 - 6 * s, g10 = 3 * s2 - 4 * s + 1;
    double g01 = -6 * s2 + 6 * s, g11 = 3 * s2 - 2 * s;
    v = (g00 * x0 + g01 * x1) / h + g10 * d0 + g11 * d1;
  }
};

}  // namespace

double action_1d(const StateFn& lagrangian, const VectorXd& t, const VectorXd& x,
                 double s_a) {
  const int n = static_cast<int>(t.size());
  if (x.size() != n) throw Error("stationarity.bad_grid", "t/x size mismatch");
  const double h = t[1] - t[0];
  VectorXd d = node_derivatives(x, h);
  double S = s_a;
  for (int i = 0; i + 1 < n; ++i) {
    Hermite seg{x[i], x[i + 1], d[i], d[i + 1], h};
    double xm, vm;
    seg.eval(0.5, xm, vm);
    const double tm = t[i] + 0.5 * h;
    double k1 = lagrangian(t[i], x[i], d[i], S);
    double k2 = lagrangian(tm, xm, vm, S + 0.5 * h * k1);
    double k3 = lagrangian(tm, xm, vm, S + 0.5 * h * k2);
    double k4 = lagrangian(t[i + 1], x[i + 1], d[i + 1], S + h * k3);
    S += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!std::isfinite(S))
      throw Error("stationarity.nonfinite", "action became non-finite");
  }
  return S;
}

double action_field_1p1(const DensityBuilder& density0, double s_coeff,
                        const RealFieldSeries& series, const VectorXd& s1_init) {
  const Grid1P1D& g = series.grid;
  MatrixXd f = density0(series);
  MatrixXd s1 = track_action_density(f, s_coeff, g, s1_init);
  auto trapz = [&](const Eigen::RowVectorXd& row) {
    double acc = 0;
    for (int j = 0; j + 1 < g.nx; ++j) acc += 0.5 * (row[j] + row[j + 1]);
    return acc * g.dx;
  };
  return trapz(s1.row(g.nt - 1)) - trapz(s1.row(0));
}

VariationReport stationarity_test_1d(const StateFn& lagrangian, const VectorXd& t,
                                     const VectorXd& x_solution, double s_a,
                                     const BumpPerturbation& bump, double eps,
                                     double nonsolution_offset) {
  const int n = static_cast<int>(t.size());
  VectorXd eta(n);
  for (int i = 0; i < n; ++i) eta[i] = bump.at(t[i]);
  if (eta.cwiseAbs().maxCoeff() == 0.0)
    throw Error("stationarity.degenerate_bump", "bump has no overlap with the grid");

  auto S = [&](const VectorXd& xs) { return action_1d(lagrangian, t, xs, s_a); };
  VariationReport r;
  r.S0 = S(x_solution);
  r.dS = (S(x_solution + eps * eta) - S(x_solution - eps * eta)) / (2 * eps);
  VectorXd x_ref = x_solution + nonsolution_offset * eta;
  r.ref_dS = (S(x_ref + eps * eta) - S(x_ref - eps * eta)) / (2 * eps);
  r.ratio = std::abs(r.ref_dS) / std::max(std::abs(r.dS), 1e-300);
  return r;
}

VariationReport stationarity_test_field(const DensityBuilder& density0, double s_coeff,
                                        const RealFieldSeries& solution,
                                        const VectorXd& s1_init,
                                        const BumpPerturbation& bump, double eps,
                                        double nonsolution_offset) {
  const Grid1P1D& g = solution.grid;
  MatrixXd eta(g.nt, g.nx);
  for (int n = 0; n < g.nt; ++n)
    for (int j = 0; j < g.nx; ++j) eta(n, j) = bump.at(g.t(n), g.x(j));
  if (eta.cwiseAbs().maxCoeff() == 0.0)
    throw Error("stationarity.degenerate_bump", "bump has no overlap with the grid");
  // The bump must vanish on the rectangle boundary (weak variation).
  for (int n = 0; n < g.nt; ++n)
    if (eta(n, 0) != 0.0 || eta(n, g.nx - 1) != 0.0)
      throw Error("stationarity.degenerate_bump", "bump support touches the spatial boundary");
  if (eta.row(0).cwiseAbs().maxCoeff() != 0.0 ||
      eta.row(g.nt - 1).cwiseAbs().maxCoeff() != 0.0)
    throw Error("stationarity.degenerate_bump", "bump support touches the time boundary");

  auto S = [&](const MatrixXd& values) {
    RealFieldSeries s;
    s.grid = g;
    s.values = values;
    return action_field_1p1(density0, s_coeff, s, s1_init);
  };
  VariationReport r;
  r.S0 = S(solution.values);
  r.dS = (S(solution.values + eps * eta) - S(solution.values - eps * eta)) / (2 * eps);
  MatrixXd ref = solution.values + nonsolution_offset * eta;
  r.ref_dS = (S(ref + eps * eta) - S(ref - eps * eta)) / (2 * eps);
  r.ratio = std::abs(r.ref_dS) / std::max(std::abs(r.dS), 1e-300);
  return r;
}

}  // namespace herglotz
