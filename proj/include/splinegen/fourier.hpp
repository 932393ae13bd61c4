#ifndef SPLINEGEN_FOURIER_HPP
#define SPLINEGEN_FOURIER_HPP

#include <functional>

#include "splinegen/bspline.hpp"
#include "splinegen/expspline.hpp"
#include "splinegen/special.hpp"

namespace splinegen {

/// Below this |s| the kernel (1 - e^{-s})/s switches to its Taylor series.
inline constexpr double kKernelSeriesRadius = 1e-4;

/// (1 - e^{-s}) / s, entire, with the removable singularity at s = 0 filled.
Complex exp_difference_kernel(Complex s);

/// Omega(w) = (1 - e^{-iw}) / (iw); Omega(0) = 1.
Complex omega_kernel(double omega);

/// Omega_a(w) = (1 - e^{-(a+iw)}) / (a + iw), a > 0.
Complex omega_kernel_exp(double a, double omega);

/// Omega(w)^n by repeated multiplication.
Complex ft_bspline(IntegerOrder n, double omega);

/// The transform of B_z split into a real-order part, a phase and a real
/// damping factor:
///   smoothness = Omega^{Re z}, phase = e^{i Im z ln|Omega|},
///   modulation = e^{-Im z arg Omega}.
struct PhaseDecomposition {
  Complex smoothness{1.0, 0.0};
  Complex phase{1.0, 0.0};
  Complex modulation{1.0, 0.0};

  Complex value() const { return smoothness * phase * modulation; }
};

PhaseDecomposition ft_bspline(ComplexOrder z, double omega);

/// prod_k (1 - e^{-a_k} e^{-iw}) / (iw + a_k): the transform of the
/// convolution of e^{-a_k x} chi_[0,1]. For exp_bspline(rates) use
/// rates.negated().
Complex ft_exp_bspline(const RateTuple& rates, double omega);

/// Omega_a(w)^z on the principal branch, a > 0.
Complex ft_exp_bspline(ComplexOrder z, double a, double omega);

/// Power-law tail model |f(x)| <= C x^{-exponent}; exponent <= 1 means the
/// integrand is taken as vanishing beyond the upper limit. `knot_singular`
/// marks terms (x - k)_+^p with small p at the integer knots; panels are then
/// integrated in u with x = k + u^4, which removes the endpoint singularity.
struct DecayModel {
  double exponent = 0.0;
  bool knot_singular = false;
};

struct FourierIntegral {
  Complex value;
  double quadrature_error = 0.0;  // adaptive-Simpson estimate
  double tail_bound = 0.0;        // bound on the neglected integral past `upper`
  long evaluations = 0;

  double error_bound() const { return quadrature_error + tail_bound; }
};

/// int_0^upper f(x) e^{-iwx} dx by adaptive Simpson on unit panels (the
/// families' knots are integers). Throws QuadratureError if a panel fails to
/// reach its share of `tol`.
FourierIntegral numeric_ft(const std::function<Complex(double)>& f, double omega, double upper,
                           double tol, DecayModel decay = {});

/// C * upper^{1-m} / (m-1) with C estimated from samples of |f| on
/// [upper/2, upper]; zero when m <= 1.
double power_tail_bound(const std::function<Complex(double)>& f, double upper, DecayModel decay);

}  // namespace splinegen

#endif  // SPLINEGEN_FOURIER_HPP
