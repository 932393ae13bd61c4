#ifndef SPLINEGEN_SPECIAL_HPP
#define SPLINEGEN_SPECIAL_HPP

#include <cmath>
#include <complex>
#include <type_traits>

namespace splinegen {

using Complex = std::complex<double>;

/// Neumaier-compensated accumulator. Works for real and std::complex scalars
/// (components are compensated independently).
template <typename Scalar>
class CompensatedSum {
 public:
  void add(const Scalar& term) {
    if constexpr (std::is_floating_point_v<Scalar>) {
      add_real(sum_, carry_, term);
    } else {
      using Real = typename Scalar::value_type;
      Real sr = sum_.real(), si = sum_.imag();
      Real cr = carry_.real(), ci = carry_.imag();
      add_real(sr, cr, term.real());
      add_real(si, ci, term.imag());
      sum_ = Scalar(sr, si);
      carry_ = Scalar(cr, ci);
    }
  }
  CompensatedSum& operator+=(const Scalar& term) {
    add(term);
    return *this;
  }
  Scalar value() const { return sum_ + carry_; }

 private:
  template <typename Real>
  static void add_real(Real& sum, Real& carry, Real term) {
    const Real t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      carry += (sum - t) + term;
    else
      carry += (term - t) + sum;
    sum = t;
  }

  Scalar sum_{};
  Scalar carry_{};
};

/// Distance below which an argument counts as sitting on a gamma pole.
inline constexpr double kGammaPoleTolerance = 1e-12;

/// Complex gamma function (Lanczos, g = 7, nine coefficients) with the
/// reflection formula for Re z < 1/2. Throws std::domain_error within
/// kGammaPoleTolerance of a nonpositive integer.
Complex gamma(Complex z);

/// Generalized binomial coefficient z(z-1)...(z-k+1)/k!, always built as a
/// falling-factorial product. Beyond k = 64 the product is accumulated in
/// log-magnitude/argument form with compensated sums.
Complex binomial(Complex z, unsigned k);

/// Truncated power x_+^w. Zero for x <= 0, including x = 0 for every w.
Complex power_plus(double x, Complex w);

/// exp(w * Log base) on the principal branch, arg in (-pi, pi].
/// Throws std::domain_error for a zero base.
Complex principal_power(Complex base, Complex w);

}  // namespace splinegen

#endif  // SPLINEGEN_SPECIAL_HPP
