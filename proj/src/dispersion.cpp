#include <herglotz/dispersion.hpp>

#include <cmath>

namespace herglotz {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Overdamped: return "overdamped";
    case Regime::Critical: return "critical";
    case Regime::Underdamped: return "underdamped";
  }
  return "?";
}

RegimeResult classify(double gamma0, double k) {
  if (!(k > 0)) throw Error("dispersion.nonpositive_k", "wavenumber k must be positive");
  RegimeResult r;
  const double disc = gamma0 * gamma0 - 4.0 * (k * k);
  r.gamma_prime = std::sqrt(std::abs(disc));
  if (disc > 0.0) {
    r.regime = Regime::Overdamped;
    r.lambda_plus = {0.5 * (-gamma0 + r.gamma_prime), 0.0};
    r.lambda_minus = {0.5 * (-gamma0 - r.gamma_prime), 0.0};
  } else if (disc == 0.0) {
    r.regime = Regime::Critical;
    r.lambda_plus = r.lambda_minus = {-0.5 * gamma0, 0.0};
  } else {
    r.regime = Regime::Underdamped;
    r.lambda_plus = {-0.5 * gamma0, 0.5 * r.gamma_prime};
    r.lambda_minus = {-0.5 * gamma0, -0.5 * r.gamma_prime};
    r.speed = r.gamma_prime / (2.0 * k);
  }
  return r;
}

std::complex<double> dispersion_residual(const std::array<std::complex<double>, 4>& k4,
                                         const std::array<double, 4>& gamma4) {
  using C = std::complex<double>;
  C kk = k4[0] * k4[0] - k4[1] * k4[1] - k4[2] * k4[2] - k4[3] * k4[3];
  C gk = gamma4[0] * k4[0] - gamma4[1] * k4[1] - gamma4[2] * k4[2] - gamma4[3] * k4[3];
  return kk - C(0, 1) * gk;
}

std::complex<double> exponent_in_time_units(std::complex<double> lambda_ct, double c) {
  return lambda_ct * c;
}

}  // namespace herglotz
