#pragma once

#include <herglotz/errors.hpp>

#include <array>
#include <complex>
#include <optional>

// Damping regimes and dispersion relation of the source-free non-conservative
// electromagnetic wave: temporal exponents solve lambda^2 + gamma0 lambda +
// k^2 = 0 (in ct units), and a plane wave e^{i k_sigma x^sigma} must satisfy
// k.k - i gamma.k = 0 in the (+,-,-,-) metric.
namespace herglotz {

enum class Regime { Overdamped, Critical, Underdamped };

const char* regime_name(Regime r);

struct RegimeResult {
  Regime regime = Regime::Underdamped;
  double gamma_prime = 0.0;  // sqrt(|gamma0^2 - 4 k^2|)
  std::complex<double> lambda_plus, lambda_minus;  // exponents in ct units
  std::optional<double> speed;  // phase speed / c, underdamped only
};

RegimeResult classify(double gamma0, double k);

// k0^2 - k1^2 - k2^2 - k3^2 - i (gamma0 k0 - gamma1 k1 - gamma2 k2 - gamma3 k3)
std::complex<double> dispersion_residual(const std::array<std::complex<double>, 4>& k4,
                                         const std::array<double, 4>& gamma4);

// Exponent per unit t given an exponent per unit ct.
std::complex<double> exponent_in_time_units(std::complex<double> lambda_ct, double c);

}  // namespace herglotz
