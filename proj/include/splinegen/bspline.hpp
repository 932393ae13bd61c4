#ifndef SPLINEGEN_BSPLINE_HPP
#define SPLINEGEN_BSPLINE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include <Eigen/Core>

#include "splinegen/sampled.hpp"
#include "splinegen/special.hpp"

namespace splinegen {

/// Beyond this abscissa the alternating complex-order series is not trusted
/// and the spline is reported as zero (with a truncation flag).
inline constexpr double kStabilityHorizon = 40.0;

class IntegerOrder {
 public:
  explicit IntegerOrder(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("IntegerOrder: order must be >= 1");
  }
  int value() const { return n_; }

 private:
  int n_;
};

class ComplexOrder {
 public:
  explicit ComplexOrder(Complex z) : z_(z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("ComplexOrder: non-finite order");
    if (!(z.real() > 1.0)) throw std::invalid_argument("ComplexOrder: Re z must exceed 1");
  }
  Complex value() const { return z_; }
  double real() const { return z_.real(); }
  double imag() const { return z_.imag(); }

 private:
  Complex z_;
};

/// Cardinal B-spline of integer order n from the truncated-power sum.
/// B_1 is the indicator of [0, 1); every order vanishes outside [0, n).
/// The sum is taken on the nearer half of the support (B_n is symmetric
/// about n/2), which keeps the alternating terms small.
template <typename Scalar>
Scalar bspline(int n, Scalar x) {
  if (n < 1) throw std::invalid_argument("bspline: order must be >= 1");
  if (!(x >= Scalar(0)) || !(x < Scalar(n))) return Scalar(0);
  if (n == 1) return Scalar(1);
  const Scalar y = std::min(x, Scalar(n) - x);
  const int last = static_cast<int>(std::floor(y));
  Scalar factorial(1);
  for (int i = 2; i < n; ++i) factorial *= Scalar(i);
  Scalar sum(0);
  Scalar binom(1);
  for (int k = 0; k <= last && k <= n; ++k) {
    const Scalar base = y - Scalar(k);
    Scalar power(1);
    for (int i = 1; i < n; ++i) power *= base;
    sum += (k % 2 == 0 ? binom : -binom) * power;
    binom = binom * Scalar(n - k) / Scalar(k + 1);
  }
  return sum / factorial;
}

/// Same spline through the two-term recursion down to the indicator.
template <typename Scalar>
Scalar bspline_recursive(int n, Scalar x) {
  if (n < 1) throw std::invalid_argument("bspline_recursive: order must be >= 1");
  if (n == 1) return (x >= Scalar(0) && x < Scalar(1)) ? Scalar(1) : Scalar(0);
  const Scalar m(n - 1);
  return (x * bspline_recursive(n - 1, x) +
          (Scalar(n) - x) * bspline_recursive(n - 1, x - Scalar(1))) /
         m;
}

struct SplineValue {
  Complex value;
  bool truncated = false;  // x lay beyond the stability horizon
};

/// B-spline of complex order z, Re z > 1, via the time-domain series
///   B_z(x) = 1/Gamma(z) sum_k (-1)^k binom(z, k) (x - k)_+^{z-1}.
/// Coefficients are cached at construction.
class ComplexBSpline {
 public:
  explicit ComplexBSpline(ComplexOrder z, double horizon = kStabilityHorizon);

  SplineValue evaluate(double x) const;
  Complex operator()(double x) const { return evaluate(x).value; }

  ComplexOrder order() const { return order_; }
  double horizon() const { return horizon_; }

 private:
  ComplexOrder order_;
  double horizon_;
  Complex inverse_gamma_;
  Eigen::VectorXcd signed_binomials_;  // (-1)^k binom(z, k)
  std::optional<double> support_end_;  // n for integer-valued z
};

inline Complex bspline(ComplexOrder z, double x) { return ComplexBSpline(z)(x); }

SampledFunction sample(IntegerOrder n, const GridSpec& grid);

/// Samples B_z; when Re z < 2 and the grid has no offset, nodes are shifted
/// by half a step so that no node lands on an integer knot.
SampledFunction sample(ComplexOrder z, const GridSpec& grid);

}  // namespace splinegen

#endif  // SPLINEGEN_BSPLINE_HPP
