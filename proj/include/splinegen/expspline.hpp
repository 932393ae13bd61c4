#ifndef SPLINEGEN_EXPSPLINE_HPP
#define SPLINEGEN_EXPSPLINE_HPP

#include <vector>

#include "splinegen/bspline.hpp"
#include "splinegen/special.hpp"

namespace splinegen {

/// coeff * t^power * exp(rate * t), with t the offset from the piece's left knot.
struct ExpPolyTerm {
  double coeff = 0.0;
  int power = 0;
  double rate = 0.0;

  friend bool operator==(const ExpPolyTerm&, const ExpPolyTerm&) = default;
};

using ExpPolyPiece = std::vector<ExpPolyTerm>;

/// Rates below this separation (but not equal) produce large cancelling
/// coefficients; such constructions are flagged as ill-conditioned.
inline constexpr double kRateConditioningThreshold = 1e-8;

/// Piecewise exponential polynomial supported on [0, N] with unit knots.
/// Piece j is valid on [j, j+1) and is written in the local variable
/// t = x - j. Terms are kept sorted by (rate, power) with like terms merged.
class PiecewiseExpPoly {
 public:
  PiecewiseExpPoly(std::vector<ExpPolyPiece> pieces, bool ill_conditioned = false);

  int order() const { return static_cast<int>(pieces_.size()); }
  const ExpPolyPiece& piece(int j) const { return pieces_.at(static_cast<std::size_t>(j)); }
  const std::vector<ExpPolyPiece>& pieces() const { return pieces_; }
  bool ill_conditioned() const { return ill_conditioned_; }

  double operator()(double x) const;

  /// Value of piece j at local offset t (no support check).
  double piece_value(int j, double t) const;

 private:
  std::vector<ExpPolyPiece> pieces_;
  bool ill_conditioned_;
};

/// Sorts by (rate, power), merges equal keys and drops exact zeros.
ExpPolyPiece canonicalize(ExpPolyPiece terms);

/// The N-tuple of rates (a_1, ..., a_N); at least one must be nonzero.
class RateTuple {
 public:
  explicit RateTuple(std::vector<double> rates);
  const std::vector<double>& values() const { return rates_; }
  std::size_t size() const { return rates_.size(); }
  RateTuple negated() const;

 private:
  RateTuple(std::vector<double> rates, bool /*unchecked*/) : rates_(std::move(rates)) {}
  std::vector<double> rates_;
};

/// exp(a t) on [0, 1): an order-one piecewise object.
PiecewiseExpPoly exp_kernel(double a);

/// Exact convolution with exp(a t) chi_[0,1), one order higher.
PiecewiseExpPoly convolve_with_kernel(const PiecewiseExpPoly& p, double a);

/// E_{N,a}: left fold of convolve_with_kernel over a_1..a_N. Note the kernel
/// convention exp(+a_k x); its Fourier transform is the product formula
/// evaluated at the negated rates.
PiecewiseExpPoly exp_bspline(const RateTuple& rates);

/// E_{z,a}(x) = 1/Gamma(z) sum_k (-1)^k binom(z,k) e^{-ka} e^{-a(x-k)} (x-k)_+^{z-1}
/// for a > 0. Since e^{-ka} e^{-a(x-k)} = e^{-ax}, this is e^{-ax} B_z(x).
class ComplexExpBSpline {
 public:
  ComplexExpBSpline(ComplexOrder z, double a, double horizon = kStabilityHorizon);

  SplineValue evaluate(double x) const;
  Complex operator()(double x) const { return evaluate(x).value; }

  ComplexOrder order() const { return spline_.order(); }
  double rate() const { return rate_; }
  double horizon() const { return spline_.horizon(); }

 private:
  ComplexBSpline spline_;
  double rate_;
};

inline Complex exp_bspline(ComplexOrder z, double a, double x) {
  return ComplexExpBSpline(z, a)(x);
}

}  // namespace splinegen

#endif  // SPLINEGEN_EXPSPLINE_HPP
