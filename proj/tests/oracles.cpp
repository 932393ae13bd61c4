#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace oracle {

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr double kNodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                              -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                              0.7966664774136267,  0.9602898564975363};
constexpr double kWeights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                0.2223810344533745, 0.1012285362903763};

// int_0^1 k(t) g(x - t) dt where g is piecewise smooth with integer knots.
template <typename Kernel, typename Inner>
double convolve_unit(double x, Kernel kernel, Inner inner) {
  std::vector<double> cuts{0.0, 1.0};
  const double frac = x - std::floor(x);
  if (frac > 0.0 && frac < 1.0) cuts.insert(cuts.begin() + 1, frac);
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    // Panels no wider than 1/2: a unit panel leaves ~1e-9 on e^{7t}.
    const int parts = static_cast<int>(std::ceil(2.0 * (cuts[c + 1] - cuts[c])));
    const double width = (cuts[c + 1] - cuts[c]) / parts;
    for (int p = 0; p < parts; ++p) {
      const double half = 0.5 * width;
      const double mid = cuts[c] + (p + 0.5) * width;
      for (int i = 0; i < 8; ++i) {
        const double t = mid + half * kNodes[i];
        total += half * kWeights[i] * kernel(t) * inner(x - t);
      }
    }
  }
  return total;
}

double exp_fold(const std::vector<double>& rates, std::size_t count, double x) {
  const double a = rates[count - 1];
  if (count == 1) return (x >= 0.0 && x < 1.0) ? std::exp(a * x) : 0.0;
  if (x <= 0.0 || x >= static_cast<double>(count)) return 0.0;
  return convolve_unit(
      x, [a](double t) { return std::exp(a * t); },
      [&](double y) { return exp_fold(rates, count - 1, y); });
}

double hat(double x) { return std::max(0.0, 1.0 - std::abs(x - 1.0)); }

}  // namespace

Complex gamma_integral(Complex z) {
  const double s_max = std::pow(90.0, 0.25);
  const int intervals = 40000;
  const double h = s_max / intervals;
  const auto f = [z](double s) -> Complex {
    if (s == 0.0) return {};
    const double t = s * s * s * s;
    return 4.0 * std::exp((4.0 * z - 1.0) * std::log(s) - t);
  };
  Complex sum = f(0.0) + f(s_max);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return sum * h / 3.0;
}

double chi_convolution(int n, double x) {
  return exp_fold(std::vector<double>(static_cast<std::size_t>(n), 0.0), static_cast<std::size_t>(n), x);
}

double exp_convolution(const std::vector<double>& rates, double x) {
  return exp_fold(rates, rates.size(), x);
}

double hat_symbol(double omega) {
  double total = 0.0;
  for (int n = -2; n <= 2; ++n) {
    double a = 0.0;
    for (int piece = -3; piece < 3; ++piece) {
      const double lo = piece;
      const double mid = piece + 0.5;
      const double hi = piece + 1.0;
      const auto g = [n](double x) { return hat(x) * hat(x + n); };
      a += (g(lo) + 4.0 * g(mid) + g(hi)) / 6.0;
    }
    total += a * std::cos(omega * n);
  }
  return total;
}

std::vector<double> uniform(std::uint64_t seed, std::size_t count, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(count);
  for (auto& v : out) v = dist(rng);
  return out;
}

}  // namespace oracle
