#include "splinegen/special.hpp"

#include <array>
#include <numbers>
#include <stdexcept>

namespace splinegen {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993228,  676.52036812188509857,  -1259.1392167224028705,
    771.32342877765307885,   -176.61502916214059907, 12.507343278686904814,
    -0.1385710952657201169,  9.9843695780195708596e-6, 1.5056327351493115583e-7};

bool near_nonpositive_integer(Complex z) {
  const double nearest = std::round(z.real());
  if (nearest > 0.0) return false;
  return std::abs(z - Complex(nearest, 0.0)) < kGammaPoleTolerance;
}

Complex lanczos(Complex z) {
  // Gamma(z) for Re z >= 1/2.
  z -= 1.0;
  Complex series = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i)
    series += kLanczosCoefficients[i] / (z + static_cast<double>(i));
  const Complex t = z + kLanczosG + 0.5;
  const double sqrt_two_pi = std::sqrt(2.0 * std::numbers::pi);
  return sqrt_two_pi * std::exp((z + 0.5) * std::log(t) - t) * series;
}

}  // namespace

Complex gamma(Complex z) {
  if (near_nonpositive_integer(z))
    throw std::domain_error("gamma: argument at a pole (nonpositive integer)");
  if (z.real() < 0.5) {
    const double pi = std::numbers::pi;
    return pi / (std::sin(pi * z) * lanczos(1.0 - z));
  }
  return lanczos(z);
}

Complex binomial(Complex z, unsigned k) {
  if (k == 0) return {1.0, 0.0};
  if (k <= 64) {
    Complex product{1.0, 0.0};
    for (unsigned j = 0; j < k; ++j)
      product = product * (z - static_cast<double>(j)) / static_cast<double>(j + 1);
    return product;
  }
  CompensatedSum<double> log_magnitude;
  CompensatedSum<double> argument;
  for (unsigned j = 0; j < k; ++j) {
    const Complex factor = (z - static_cast<double>(j)) / static_cast<double>(j + 1);
    if (factor == Complex(0.0, 0.0)) return {0.0, 0.0};
    log_magnitude += std::log(std::abs(factor));
    argument += std::arg(factor);
  }
  return std::polar(std::exp(log_magnitude.value()), argument.value());
}

Complex power_plus(double x, Complex w) {
  if (!(x > 0.0)) return {0.0, 0.0};
  return std::exp(w * std::log(x));
}

Complex principal_power(Complex base, Complex w) {
  if (base == Complex(0.0, 0.0))
    throw std::domain_error("principal_power: zero base");
  return std::exp(w * std::log(base));
}

}  // namespace splinegen
