#include "splinegen/sampled.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace splinegen {

void GridSpec::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) ||
      !std::isfinite(offset))
    throw std::invalid_argument("grid: non-finite field");
  if (!(step > 0.0)) throw std::invalid_argument("grid: step must be positive");
  if (stop < start) throw std::invalid_argument("grid: stop must not precede start");
  if (offset < 0.0 || offset >= step)
    throw std::invalid_argument("grid: offset must lie in [0, step)");
}

Eigen::Index GridSpec::size() const {
  validate();
  const double first = start + offset;
  if (first > stop + 1e-9 * step) return 0;
  return static_cast<Eigen::Index>(std::floor((stop - first) / step + 1e-9)) + 1;
}

Eigen::VectorXd GridSpec::nodes() const {
  const Eigen::Index n = size();
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = start + offset + static_cast<double>(i) * step;
  return x;
}

GridSpec GridSpec::parse(const std::string& text) {
  std::vector<double> fields;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ':')) {
    double value = 0.0;
    const char* begin = item.data();
    const char* end = begin + item.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
      throw std::invalid_argument("grid: cannot parse '" + item + "'");
    fields.push_back(value);
  }
  if (fields.size() != 3 && fields.size() != 4)
    throw std::invalid_argument("grid: expected start:stop:step[:offset]");
  GridSpec grid{fields[0], fields[1], fields[2], fields.size() == 4 ? fields[3] : 0.0};
  grid.validate();
  return grid;
}

SampledFunction sample(const Evaluator& f, const Eigen::VectorXd& x) {
  SampledFunction out;
  out.x = x;
  out.values.resize(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out.values[i] = f(x[i]);
  return out;
}

SampledFunction sample(const Evaluator& f, const GridSpec& grid) {
  return sample(f, grid.nodes());
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value == 0.0 ? 0.0 : value);
  return buffer;
}

void write_csv(std::ostream& out, const SampledFunction& samples) {
  out << "x,re,im\n";
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    out << format_double(samples.x[i]) << ',' << format_double(samples.values[i].real())
        << ',' << format_double(samples.values[i].imag()) << '\n';
  }
}

}  // namespace splinegen
