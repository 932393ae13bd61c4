#include "splinegen/fourier.hpp"

#include <cmath>
#include <stdexcept>

#include "splinegen/quadrature.hpp"

namespace splinegen {

namespace {

// 1 - e^{-s} without cancellation in the real part for small Re s.
Complex one_minus_exp_neg(Complex s) {
  const double a = s.real();
  const double b = s.imag();
  const double decay = std::exp(-a);
  const double half_sin = std::sin(0.5 * b);
  return {-std::expm1(-a) + decay * 2.0 * half_sin * half_sin, decay * std::sin(b)};
}

}  // namespace

Complex exp_difference_kernel(Complex s) {
  if (std::abs(s) < kKernelSeriesRadius)
    return 1.0 + s * (-0.5 + s * (1.0 / 6.0 + s * (-1.0 / 24.0)));
  return one_minus_exp_neg(s) / s;
}

Complex omega_kernel(double omega) { return exp_difference_kernel({0.0, omega}); }

Complex omega_kernel_exp(double a, double omega) {
  if (!(a > 0.0)) throw std::domain_error("omega_kernel_exp: rate must be positive");
  return exp_difference_kernel({a, omega});
}

Complex ft_bspline(IntegerOrder n, double omega) {
  const Complex kernel = omega_kernel(omega);
  Complex result{1.0, 0.0};
  for (int i = 0; i < n.value(); ++i) result *= kernel;
  return result;
}

PhaseDecomposition ft_bspline(ComplexOrder z, double omega) {
  const Complex kernel = omega_kernel(omega);
  PhaseDecomposition out;
  if (kernel == Complex{}) {
    out.smoothness = {};
    return out;
  }
  const double log_modulus = std::log(std::abs(kernel));
  const double argument = std::arg(kernel);
  out.smoothness = std::exp(z.real() * Complex(log_modulus, argument));
  out.phase = std::polar(1.0, z.imag() * log_modulus);
  out.modulation = {std::exp(-z.imag() * argument), 0.0};
  return out;
}

Complex ft_exp_bspline(const RateTuple& rates, double omega) {
  Complex product{1.0, 0.0};
  for (double a : rates.values()) product *= exp_difference_kernel({a, omega});
  return product;
}

Complex ft_exp_bspline(ComplexOrder z, double a, double omega) {
  return principal_power(omega_kernel_exp(a, omega), z.value());
}

double power_tail_bound(const std::function<Complex(double)>& f, double upper, DecayModel decay) {
  const double m = decay.exponent;
  if (!(m > 1.0)) return 0.0;
  double constant = 0.0;
  constexpr int kSamples = 64;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = upper * (0.5 + 0.5 * i / kSamples);
    constant = std::max(constant, std::abs(f(x)) * std::pow(x, m));
  }
  return constant * std::pow(upper, 1.0 - m) / (m - 1.0);
}

FourierIntegral numeric_ft(const std::function<Complex(double)>& f, double omega, double upper,
                           double tol, DecayModel decay) {
  if (!(upper > 0.0)) throw std::invalid_argument("numeric_ft: upper limit must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("numeric_ft: tolerance must be positive");
  const auto integrand = [&](double x) { return f(x) * std::polar(1.0, -omega * x); };
  const int panels = static_cast<int>(std::ceil(upper));
  const double panel_tol = tol / panels;
  FourierIntegral out;
  CompensatedSum<Complex> sum;
  for (int p = 0; p < panels; ++p) {
    const double lo = p;
    const double hi = std::min(upper, p + 1.0);
    QuadratureResult<Complex> r;
    if (decay.knot_singular) {
      const double width = hi - lo;
      const auto mapped = [&](double u) {
        const double u2 = u * u;
        return 4.0 * width * u2 * u * integrand(lo + width * u2 * u2);
      };
      r = adaptive_simpson<Complex>(mapped, 0.0, 1.0, panel_tol);
    } else {
      r = adaptive_gauss<Complex>(integrand, lo, hi, panel_tol);
    }
    if (!r.converged)
      throw QuadratureError("numeric_ft: panel [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "] did not converge");
    sum += r.value;
    out.quadrature_error += r.error;
    out.evaluations += r.evaluations;
  }
  out.value = sum.value();
  out.tail_bound = power_tail_bound(f, upper, decay);
  return out;
}

}  // namespace splinegen
