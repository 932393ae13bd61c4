#include "splinegen/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/LU>

#include "splinegen/quadrature.hpp"

namespace splinegen {

namespace {

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

std::string format_complex(Complex z) { return format_double(z.real()) + "," + format_double(z.imag()); }

bool integer_valued(ComplexOrder z) {
  return z.imag() == 0.0 && z.real() == std::floor(z.real());
}

// C sup_{x in [lo, hi]} |f(x)| x^m, from samples.
double decay_constant(const Evaluator& f, double lo, double hi, double m) {
  double constant = 0.0;
  constexpr int kSamples = 64;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = lo + (hi - lo) * i / kSamples;
    constant = std::max(constant, std::abs(f(x)) * std::pow(x, m));
  }
  return constant;
}

}  // namespace

// ---------------------------------------------------------------------------
// SplineFamily

SplineFamily SplineFamily::poly(int n) {
  const IntegerOrder order(n);
  SplineFamily f;
  f.kind_ = Kind::Poly;
  f.order_int_ = n;
  f.order_re_ = n;
  f.upper_ = n;
  f.time_ = [n](double x) { return Complex(bspline(n, x), 0.0); };
  f.frequency_ = [order](double w) { return ft_bspline(order, w); };
  return f;
}

SplineFamily SplineFamily::complex_poly(ComplexOrder z) {
  SplineFamily f;
  f.kind_ = Kind::ComplexPoly;
  f.z_ = z.value();
  f.order_re_ = z.real();
  const ComplexBSpline spline(z);
  f.upper_ = spline.horizon();
  f.decay_ = {z.real() + 1.0, true};
  f.time_ = [spline](double x) { return spline(x); };
  f.frequency_ = [z](double w) { return ft_bspline(z, w).value(); };
  return f;
}

SplineFamily SplineFamily::exp(const RateTuple& rates) {
  SplineFamily f;
  f.kind_ = Kind::Exp;
  f.rates_ = rates.values();
  f.order_int_ = static_cast<int>(rates.size());
  f.order_re_ = f.order_int_;
  f.upper_ = f.order_int_;
  f.time_ = [spline = exp_bspline(rates)](double x) { return Complex(spline(x), 0.0); };
  f.frequency_ = [negated = rates.negated()](double w) { return ft_exp_bspline(negated, w); };
  return f;
}

SplineFamily SplineFamily::complex_exp(ComplexOrder z, double a) {
  SplineFamily f;
  f.kind_ = Kind::ComplexExp;
  f.z_ = z.value();
  f.rate_ = a;
  f.order_re_ = z.real();
  const ComplexExpBSpline spline(z, a);
  f.upper_ = spline.horizon();
  f.decay_ = {z.real() + 1.0, true};
  f.time_ = [spline](double x) { return spline(x); };
  f.frequency_ = [z, a](double w) { return ft_exp_bspline(z, a, w); };
  return f;
}

std::string SplineFamily::name() const {
  switch (kind_) {
    case Kind::Poly: return "poly";
    case Kind::ComplexPoly: return "complex-poly";
    case Kind::Exp: return "exp";
    case Kind::ComplexExp: return "complex-exp";
  }
  return "unknown";
}

FixedPointHandle SplineFamily::fractal(const ScalingVector& alphas, double tol,
                                       std::optional<Partition> partition,
                                       bool enforce_smoothness) const {
  if (!unbounded()) {
    if (partition && !partition->bounded())
      throw std::invalid_argument("bounded families need the uniform partition");
    if (kind_ == Kind::Poly) return make_fractal_poly(order_int_, alphas, tol, enforce_smoothness);
    return make_fractal_exp(RateTuple(rates_), alphas, tol);
  }
  if (!partition) {
    std::vector<double> knots(static_cast<std::size_t>(alphas.size()));
    for (std::size_t i = 0; i < knots.size(); ++i) knots[i] = static_cast<double>(i);
    partition = Partition::arctan_shift(std::move(knots));
  }
  if (kind_ == Kind::ComplexPoly)
    return make_fractal_complex_poly(ComplexOrder(z_), alphas, *partition, tol);
  return make_fractal_complex_exp(ComplexOrder(z_), rate_, alphas, *partition, tol);
}

// ---------------------------------------------------------------------------
// StudyReport

void StudyReport::check(const std::string& metric, double value, double limit, Bound bound) {
  metrics[metric] = value;
  metrics[metric + ".limit"] = limit;
  bool ok = false;
  switch (bound) {
    case Bound::AtMost: ok = value <= limit; break;
    case Bound::AtLeast: ok = value >= limit; break;
    case Bound::Below: ok = value < limit; break;
    case Bound::Above: ok = value > limit; break;
  }
  pass = pass && ok;
}

std::vector<double> uniform_points(std::uint64_t seed, std::size_t count, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(count);
  for (auto& x : out) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x = lo + (hi - lo) * u;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Studies

StudyReport integral_check(const SplineFamily& family, double tol) {
  StudyReport r;
  r.name = "integral";
  r.tolerance = tol;
  r.inputs["family"] = family.name();
  r.inputs["upper"] = format_double(family.upper());
  const Complex target = family.transform(0.0);
  const auto integral = numeric_ft(family.evaluator(), 0.0, family.upper(),
                                   1e-2 * tol, family.decay());
  r.record("integral.re", integral.value.real());
  r.record("integral.im", integral.value.imag());
  r.record("target.re", target.real());
  r.record("target.im", target.imag());
  r.record("quadrature_error", integral.quadrature_error);
  r.record("tail_bound", integral.tail_bound);
  r.check("abs_error", std::abs(integral.value - target), tol);
  r.check("error_bound", integral.error_bound(), tol);
  return r;
}

StudyReport convolution_check(int m, int n, double tol) {
  if (m < 1 || n < 1 || m > 6 || n > 6)
    throw std::invalid_argument("convolution_check: orders must lie in 1..6");
  StudyReport r;
  r.name = "convolution";
  r.tolerance = tol;
  r.inputs["m"] = std::to_string(m);
  r.inputs["n"] = std::to_string(n);
  const int total = m + n;
  double worst = 0.0;
  double estimate = 0.0;
  const QuadratureRule rule = gauss_legendre(total / 2 + 1);
  const QuadratureRule check_rule = gauss_legendre(total / 2 + 3);
  constexpr int kPoints = 200;
  for (int i = 0; i <= kPoints; ++i) {
    // Off-knot abscissae plus the knots themselves every tenth node.
    const double x = (i % 10 == 0) ? total * static_cast<double>(i) / kPoints
                                   : total * (i + 0.37) / (kPoints + 1);
    std::vector<double> cuts{0.0, static_cast<double>(m)};
    for (int k = 1; k < m; ++k) cuts.push_back(k);
    for (int k = 0; k <= n; ++k) {
      const double c = x - k;
      if (c > 0.0 && c < m) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const auto integrand = [&](double t) { return bspline(m, t) * bspline(n, x - t); };
    // Each piece between cuts is a polynomial of degree m + n - 2; the open
    // rule never samples the jumps of B_1 at the cuts.
    CompensatedSum<double> sum;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      if (cuts[c + 1] - cuts[c] <= 0.0) continue;
      const double value = integrate<double>(rule, integrand, cuts[c], cuts[c + 1]);
      const double check = integrate<double>(check_rule, integrand, cuts[c], cuts[c + 1]);
      estimate = std::max(estimate, std::abs(value - check));
      sum += value;
    }
    worst = std::max(worst, std::abs(sum.value() - bspline(total, x)));
  }
  r.record("quadrature_estimate", estimate);
  r.check("max_abs_error", worst, tol);
  return r;
}

StudyReport gaussian_limit(const std::vector<int>& orders) {
  if (orders.empty()) throw std::invalid_argument("gaussian_limit: no orders given");
  for (int n : orders)
    if (n < 4) throw std::invalid_argument("gaussian_limit: orders must be >= 4");
  StudyReport r;
  r.name = "gaussian-limit";
  r.tolerance = 0.05;
  std::string list;
  for (int n : orders) list += (list.empty() ? "" : ",") + std::to_string(n);
  r.inputs["orders"] = list;
  constexpr int kSamples = 4000;
  double previous = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  double last = 0.0;
  for (int n : orders) {
    const double mean = 0.5 * n;
    const double variance = n / 12.0;
    double diff = 0.0;
    double peak = 0.0;
    for (int i = 0; i <= kSamples; ++i) {
      const double x = n * static_cast<double>(i) / kSamples;
      const double b = bspline(n, x);
      const double g = std::exp(-(x - mean) * (x - mean) / (2.0 * variance)) /
                       std::sqrt(2.0 * std::numbers::pi * variance);
      diff = std::max(diff, std::abs(b - g));
      peak = std::max(peak, b);
    }
    const double distance = diff / peak;
    r.record("distance." + std::to_string(n), distance);
    if (!(distance < previous)) decreasing = false;
    previous = distance;
    last = distance;
  }
  r.check("strictly_decreasing", decreasing ? 1.0 : 0.0, 1.0, StudyReport::Bound::AtLeast);
  r.check("final_distance", last, 0.05, StudyReport::Bound::Below);
  return r;
}

std::vector<double> default_decay_points(ComplexOrder z) {
  std::vector<double> xs;
  if (integer_valued(z)) {
    // Compact support: sample the last support interval where the spline
    // still exceeds the noise floor.
    const double n = z.real();
    for (int i = 0; i < 8; ++i) xs.push_back(n - 1.0 + 0.98 * (0.5 + 0.5 * i / 7.0));
    return xs;
  }
  constexpr int kPoints = 8;
  for (int i = 0; i < kPoints; ++i)
    xs.push_back(10.0 * std::pow(3.5, static_cast<double>(i) / (kPoints - 1)));
  return xs;
}

StudyReport decay_exponent(ComplexOrder z, const std::vector<double>& xs) {
  if (xs.size() < 5) throw std::invalid_argument("decay_exponent: need at least 5 points");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || xs[i] > kStabilityHorizon)
      throw std::invalid_argument("decay_exponent: points must lie in (0, horizon]");
    if (i && !(xs[i] > xs[i - 1]))
      throw std::invalid_argument("decay_exponent: points must increase");
  }
  constexpr double kNoiseFloor = 1e-13;
  StudyReport r;
  r.name = "decay";
  r.inputs["z"] = format_complex(z.value());
  r.inputs["x_list"] = join(xs);
  const ComplexBSpline spline(z);
  std::vector<double> lx;
  std::vector<double> ly;
  for (double x : xs) {
    const double v = std::abs(spline(x));
    if (v < kNoiseFloor) continue;
    lx.push_back(std::log(x));
    ly.push_back(std::log(v));
  }
  if (lx.size() < 3) throw std::runtime_error("decay_exponent: fewer than 3 points above the noise floor");
  const auto k = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const double limit = -(z.real() + 1.0) + 0.5;
  r.tolerance = 0.5;
  r.record("usable_points", k);
  r.check("slope", slope, limit);
  return r;
}

double periodic_interpolation_error(int order, const std::function<double(double)>& target,
                                    double mesh) {
  if (order < 2 || order > 4) throw std::invalid_argument("interpolation: order must be 2, 3 or 4");
  const long count = std::lround(1.0 / mesh);
  if (count < 2 * order || std::abs(count * mesh - 1.0) > 1e-12)
    throw std::invalid_argument("interpolation: mesh must be 1/K with K >= 2N");
  const auto k = static_cast<int>(count);
  const auto periodic_b = [&](double u) {
    double r = std::fmod(u, static_cast<double>(k));
    if (r < 0.0) r += k;
    return bspline(order, r);
  };
  Eigen::MatrixXd system(k, k);
  Eigen::VectorXd rhs(k);
  for (int i = 0; i < k; ++i) {
    rhs[i] = target(mesh * (i + 0.5 * order));
    for (int j = 0; j < k; ++j) system(i, j) = periodic_b(i + 0.5 * order - j);
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  if (!(std::abs(lu.determinant()) > 1e-300))
    throw std::runtime_error("interpolation: singular collocation system");
  const Eigen::VectorXd coeffs = lu.solve(rhs);
  constexpr int kEval = 4096;
  double worst = 0.0;
  for (int e = 0; e < kEval; ++e) {
    const double x = (e + 0.5) / kEval;
    const double u = x / mesh;
    const int base = static_cast<int>(std::floor(u));
    double s = 0.0;
    for (int d = 0; d < order; ++d) {
      const int j = ((base - d) % k + k) % k;
      s += coeffs[j] * periodic_b(u - j);
    }
    worst = std::max(worst, std::abs(s - target(x)));
  }
  return worst;
}

StudyReport interpolation_order(int order, const std::function<double(double)>& target,
                                const std::vector<double>& meshes) {
  if (meshes.size() < 2) throw std::invalid_argument("interpolation_order: need at least two meshes");
  StudyReport r;
  r.name = "interp-order";
  r.tolerance = 0.3;
  r.inputs["N"] = std::to_string(order);
  r.inputs["meshes"] = join(meshes);
  std::vector<double> errors;
  for (double h : meshes) {
    errors.push_back(periodic_interpolation_error(order, target, h));
    r.record("error.h=" + format_double(h), errors.back());
  }
  const std::size_t last = errors.size() - 1;
  const double ratio = meshes[last - 1] / meshes[last];
  const double p = std::log(errors[last - 1] / errors[last]) / std::log(ratio);
  r.record("empirical_order", p);
  r.check("order_deviation", std::abs(p - order), 0.3);
  return r;
}

Eigen::VectorXd default_riesz_grid(int points) {
  Eigen::VectorXd w(points);
  for (int i = 0; i < points; ++i) w[i] = 2.0 * std::numbers::pi * i / points;
  return w;
}

double riesz_tail_bound(ComplexOrder z, int terms) {
  // |B^_z(w)| <= (2/|w|)^{Re z} e^{pi |Im z|}; for w in [0, 2 pi) and |k| > K,
  // |w + 2 pi k| >= 2 pi (|k| - 1), so each side sums below
  // pi^{-2 Re z} int_{K-1}^inf t^{-2 Re z} dt.
  const double s = 2.0 * z.real();
  const double damping = std::exp(2.0 * std::numbers::pi * std::abs(z.imag()));
  return 2.0 * damping * std::pow(std::numbers::pi, -s) * std::pow(terms - 1.0, 1.0 - s) / (s - 1.0);
}

StudyReport riesz_bounds(ComplexOrder z, const Eigen::VectorXd& omegas, int terms) {
  if (terms < 50) throw std::invalid_argument("riesz_bounds: K must be >= 50");
  if (omegas.size() == 0) throw std::invalid_argument("riesz_bounds: empty frequency grid");
  StudyReport r;
  r.name = "riesz";
  r.inputs["z"] = format_complex(z.value());
  r.inputs["K"] = std::to_string(terms);
  r.inputs["omega_points"] = std::to_string(omegas.size());
  double lower = std::numeric_limits<double>::infinity();
  double upper = 0.0;
  double zero_term = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index i = 0; i < omegas.size(); ++i) {
    const double w = omegas[i];
    CompensatedSum<double> sum;
    for (int k = -terms; k <= terms; ++k) {
      const double v = std::norm(ft_bspline(z, w + 2.0 * std::numbers::pi * k).value());
      sum += v;
      if (k == 0 && w == 0.0) zero_term = v;
    }
    lower = std::min(lower, sum.value());
    upper = std::max(upper, sum.value());
  }
  const double tail = riesz_tail_bound(z, terms);
  r.tolerance = tail;
  r.record("A", lower);
  r.record("B", upper);
  r.record("tail_bound", tail);
  r.check("A_minus_tail", lower - tail, 0.0, StudyReport::Bound::Above);
  r.check("B_plus_tail", upper + tail, std::numeric_limits<double>::max(), StudyReport::Bound::Below);
  if (!std::isnan(zero_term)) r.check("zero_frequency_term_error", std::abs(zero_term - 1.0), 1e-12);
  return r;
}

StudyReport partition_of_unity(ComplexOrder z, double window_lo, double window_hi, int span) {
  if (!(window_hi >= window_lo)) throw std::invalid_argument("partition_of_unity: empty window");
  if (span < 1) throw std::invalid_argument("partition_of_unity: J must be positive");
  const ComplexBSpline spline(z);
  // Terms with x - j beyond the horizon (or beyond j = -J) are dropped.
  const double reach = std::min(window_lo + span, spline.horizon());
  if (!(reach > 2.0)) throw std::invalid_argument("partition_of_unity: window leaves no margin");
  if (window_hi - span > 0.0) throw std::invalid_argument("partition_of_unity: window exceeds J");
  StudyReport r;
  r.name = "partition-unity";
  r.inputs["z"] = format_complex(z.value());
  r.inputs["window"] = format_double(window_lo) + ":" + format_double(window_hi);
  r.inputs["J"] = std::to_string(span);

  const double m = z.real() + 1.0;
  const Evaluator f = [&spline](double x) { return spline(x); };
  const double constant = integer_valued(z) ? 0.0 : decay_constant(f, 0.5 * reach, reach, m);
  // sum_{y > Y, y - Y in Z} C y^{-m} <= C (Y^{-m} + Y^{1-m}/(m-1)).
  const double budget = constant * (std::pow(reach, -m) + std::pow(reach, 1.0 - m) / (m - 1.0));
  const double linear_budget =
      constant * (std::pow(reach, 1.0 - m) + std::pow(reach, 2.0 - m) / (m - 2.0)) +
      std::abs(window_hi) * budget;

  constexpr int kPoints = 101;
  const bool real_order = z.imag() == 0.0;
  double worst = 0.0;
  double worst_linear = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    // Knot-avoiding abscissae.
    const double x = window_lo + (window_hi - window_lo) * (i + 0.5) / kPoints;
    CompensatedSum<Complex> sum;
    CompensatedSum<Complex> first;
    for (int j = -span; j <= span; ++j) {
      const Complex v = spline(x - j);
      sum += v;
      first += static_cast<double>(j) * v;
    }
    worst = std::max(worst, std::abs(sum.value() - 1.0));
    if (real_order) worst_linear = std::max(worst_linear, std::abs(first.value() - (x - 0.5 * z.real())));
  }
  r.tolerance = budget + 1e-6;
  r.record("truncation_budget", budget);
  r.check("max_deviation", worst, budget + 1e-6);
  if (real_order && m > 2.0) {
    r.record("linear_budget", linear_budget);
    r.check("linear_max_deviation", worst_linear, linear_budget + 1e-6);
  }
  return r;
}

StudyReport residual_study(const std::string& label, const FixedPointHandle& handle, double tol,
                           std::uint64_t seed, std::size_t count) {
  const auto& partition = handle.system().partition();
  const double hi = partition.bounded() ? partition.upper() : 10.0;
  const auto xs = uniform_points(seed, count, 0.0, hi);
  StudyReport r;
  r.name = "residual";
  r.seed = seed;
  r.tolerance = tol;
  r.inputs["system"] = label;
  r.inputs["points"] = std::to_string(count);
  r.inputs["domain"] = "0:" + format_double(hi);
  r.check("max_residual", residual(handle, xs, tol), 3.0 * tol);
  return r;
}

StudyReport contraction_study(const std::string& label, const FixedPointHandle& handle,
                              int points_per_unit, double tol) {
  const auto result = fixed_point_grid(handle.system(), points_per_unit, tol);
  const double alpha = handle.system().scaling().max_abs();
  StudyReport r;
  r.name = "contraction";
  r.tolerance = tol;
  r.inputs["system"] = label;
  r.inputs["M"] = std::to_string(points_per_unit);
  r.record("alpha", alpha);
  r.record("iterations", result.iterations);
  r.check("observed_rate", result.observed_rate, alpha + 0.05);
  r.check("observed_rate_floor", result.observed_rate, alpha - 0.1, StudyReport::Bound::AtLeast);
  return r;
}

StudyReport joinup_study(const std::string& label, const FixedPointHandle& handle, int max_order,
                         int points_per_unit, double tol) {
  const auto& system = handle.system();
  const auto grid = closed_grid(system, points_per_unit);
  SampledFunction seed = grid;
  for (Eigen::Index i = 0; i < grid.x.size(); ++i) seed.values[i] = system.seed(grid.x[i]);
  const auto report = check_joinup(system, seed, max_order);
  StudyReport r;
  r.name = "joinup";
  r.tolerance = tol;
  r.inputs["system"] = label;
  r.inputs["max_order"] = std::to_string(max_order);
  r.inputs["M"] = std::to_string(points_per_unit);
  for (int nu = 0; nu <= max_order; ++nu)
    r.check("mismatch.order" + std::to_string(nu), report.max_mismatch(nu), tol);
  const auto growth = derivative_growth(system, points_per_unit, 8);
  if (growth.front() > 0.0) r.record("derivative_growth", growth.back() / growth.front());
  return r;
}

}  // namespace splinegen
