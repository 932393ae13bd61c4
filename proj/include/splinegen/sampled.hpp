#ifndef SPLINEGEN_SAMPLED_HPP
#define SPLINEGEN_SAMPLED_HPP

#include <functional>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "splinegen/special.hpp"

namespace splinegen {

/// Uniform grid start + offset + i*step for i >= 0, up to and including stop.
/// The offset shifts nodes off the integer knots.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
  double offset = 0.0;

  /// Throws std::invalid_argument unless step > 0, stop >= start,
  /// offset in [0, step) and every field is finite.
  void validate() const;
  Eigen::Index size() const;
  Eigen::VectorXd nodes() const;

  /// Parses "start:stop:step" or "start:stop:step:offset".
  static GridSpec parse(const std::string& text);
};

/// Grid abscissae with complex values; the interchange format between
/// sampling, grid iteration and file output.
struct SampledFunction {
  Eigen::VectorXd x;
  Eigen::VectorXcd values;

  Eigen::Index size() const { return x.size(); }
  bool empty() const { return x.size() == 0; }
};

using Evaluator = std::function<Complex(double)>;

SampledFunction sample(const Evaluator& f, const GridSpec& grid);
SampledFunction sample(const Evaluator& f, const Eigen::VectorXd& x);

/// Writes "x,re,im" rows with 17 significant digits, '\n' line endings.
void write_csv(std::ostream& out, const SampledFunction& samples);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double value);

}  // namespace splinegen

#endif  // SPLINEGEN_SAMPLED_HPP
