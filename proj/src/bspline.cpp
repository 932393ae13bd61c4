#include "splinegen/bspline.hpp"

namespace splinegen {

ComplexBSpline::ComplexBSpline(ComplexOrder z, double horizon)
    : order_(z), horizon_(horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("ComplexBSpline: horizon must be positive");
  inverse_gamma_ = 1.0 / gamma(z.value());
  if (z.imag() == 0.0 && z.real() == std::floor(z.real())) support_end_ = z.real();
  const auto terms = static_cast<Eigen::Index>(std::floor(horizon)) + 1;
  signed_binomials_.resize(terms);
  for (Eigen::Index k = 0; k < terms; ++k) {
    const Complex b = binomial(z.value(), static_cast<unsigned>(k));
    signed_binomials_[k] = (k % 2 == 0) ? b : -b;
  }
}

SplineValue ComplexBSpline::evaluate(double x) const {
  if (!(x > 0.0)) return {};
  // Integer orders: the series terminates and the spline vanishes past n.
  if (support_end_ && x >= *support_end_) return {};
  if (x > horizon_) return {Complex{}, true};
  const Complex exponent = order_.value() - 1.0;
  const auto last = static_cast<Eigen::Index>(std::floor(x));
  CompensatedSum<Complex> sum;
  for (Eigen::Index k = 0; k <= last; ++k) {
    if (signed_binomials_[k] == Complex{}) continue;
    sum += signed_binomials_[k] * power_plus(x - static_cast<double>(k), exponent);
  }
  return {inverse_gamma_ * sum.value(), false};
}

SampledFunction sample(IntegerOrder n, const GridSpec& grid) {
  const int order = n.value();
  return sample([order](double x) { return Complex(bspline(order, x), 0.0); }, grid);
}

SampledFunction sample(ComplexOrder z, const GridSpec& grid) {
  GridSpec shifted = grid;
  if (z.real() < 2.0 && grid.offset == 0.0) shifted.offset = 0.5 * grid.step;
  const ComplexBSpline spline(z);
  return sample([&spline](double x) { return spline(x); }, shifted);
}

}  // namespace splinegen
