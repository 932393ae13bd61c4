#ifndef SPLINEGEN_ANALYSIS_HPP
#define SPLINEGEN_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "splinegen/bspline.hpp"
#include "splinegen/expspline.hpp"
#include "splinegen/fourier.hpp"
#include "splinegen/selfref.hpp"

namespace splinegen {

/// One of the four spline families with its time- and frequency-domain
/// evaluators.
class SplineFamily {
 public:
  enum class Kind { Poly, ComplexPoly, Exp, ComplexExp };

  static SplineFamily poly(int n);
  static SplineFamily complex_poly(ComplexOrder z);
  static SplineFamily exp(const RateTuple& rates);
  static SplineFamily complex_exp(ComplexOrder z, double a);

  Kind kind() const { return kind_; }
  std::string name() const;
  /// True for the complex-order families (support [0, inf)).
  bool unbounded() const { return kind_ == Kind::ComplexPoly || kind_ == Kind::ComplexExp; }
  /// Support end (N), or the stability horizon for complex orders.
  double upper() const { return upper_; }
  DecayModel decay() const { return decay_; }
  /// Real part of the order (n, Re z, or N).
  double order_real_part() const { return order_re_; }

  Complex operator()(double x) const { return time_(x); }
  const Evaluator& evaluator() const { return time_; }
  Complex transform(double omega) const { return frequency_(omega); }

  /// Seed-compatible fractal extension. Bounded families use the uniform
  /// partition; complex families default to arctan/shift with knots 0..N-1.
  FixedPointHandle fractal(const ScalingVector& alphas, double tol,
                           std::optional<Partition> partition = std::nullopt,
                           bool enforce_smoothness = false) const;

  int order_int() const { return order_int_; }
  Complex order_complex() const { return z_; }
  const std::vector<double>& rates() const { return rates_; }
  double rate() const { return rate_; }

 private:
  SplineFamily() = default;

  Kind kind_ = Kind::Poly;
  Evaluator time_;
  std::function<Complex(double)> frequency_;
  double upper_ = 0.0;
  DecayModel decay_{};
  double order_re_ = 0.0;
  int order_int_ = 0;
  Complex z_{};
  std::vector<double> rates_;
  double rate_ = 0.0;
};

/// Outcome of a verification study. Every checked metric is stored under its
/// name with its limit under "<name>.limit"; pass holds iff every check does.
struct StudyReport {
  std::string name;
  std::map<std::string, std::string> inputs;
  std::map<std::string, double> metrics;
  double tolerance = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;

  enum class Bound { AtMost, AtLeast, Below, Above };
  void check(const std::string& metric, double value, double limit, Bound bound = Bound::AtMost);
  void record(const std::string& metric, double value) { metrics[metric] = value; }
};

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Uniform doubles in [lo, hi) from a seeded 64-bit Mersenne twister, with a
/// fixed mantissa construction so sequences are identical across platforms.
std::vector<double> uniform_points(std::uint64_t seed, std::size_t count, double lo, double hi);

/// |int f - target| over [0, upper] plus the decay tail bound.
StudyReport integral_check(const SplineFamily& family, double tol);

/// sup |B_m * B_n - B_{m+n}| on a test grid; the convolution integral is
/// split at every knot of the integrand and each piece integrated by
/// Gauss-Legendre of sufficient degree.
StudyReport convolution_check(int m, int n, double tol = 1e-8);

/// Relative sup-distance of B_n to the normal density with mean n/2 and
/// variance n/12 for each n >= 4; must decrease strictly and end below 0.05.
StudyReport gaussian_limit(const std::vector<int>& orders);

/// Least-squares slope of log|B_z| against log x over points above the noise
/// floor 1e-13; must not exceed -(Re z + 1) + 0.5. Throws if fewer than three
/// points remain.
StudyReport decay_exponent(ComplexOrder z, const std::vector<double>& xs);
/// Log-spaced points in [10, 35] for genuinely complex or fractional orders;
/// for integer orders (compact support) points in the last support interval.
std::vector<double> default_decay_points(ComplexOrder z);

/// Periodic cardinal interpolation of order N on mesh h with collocation at
/// h (i + N/2); reports the empirical order from the two finest meshes.
StudyReport interpolation_order(int order, const std::function<double(double)>& target,
                                const std::vector<double>& meshes);

/// Result of one periodic interpolation run, exposed for testing.
double periodic_interpolation_error(int order, const std::function<double(double)>& target,
                                    double mesh);

/// A = min, B = max over the omega grid of sum_{|k|<=K} |B^_z(w + 2 pi k)|^2,
/// with a tail bound for |k| > K.
StudyReport riesz_bounds(ComplexOrder z, const Eigen::VectorXd& omegas, int terms);
double riesz_tail_bound(ComplexOrder z, int terms);
Eigen::VectorXd default_riesz_grid(int points = 256);

/// max over the window of |sum_{|j|<=J} B_z(x - j) - 1| against a truncation
/// budget from the decay bound (plus linear reproduction for real orders).
StudyReport partition_of_unity(ComplexOrder z, double window_lo, double window_hi, int span);

/// Self-referential residual on `count` seeded random points.
StudyReport residual_study(const std::string& label, const FixedPointHandle& handle, double tol,
                           std::uint64_t seed, std::size_t count = 200);

/// Observed grid-iteration ratio against [a - 0.1, a + 0.05], a = max|alpha_n|.
StudyReport contraction_study(const std::string& label, const FixedPointHandle& handle,
                              int points_per_unit = 256, double tol = 1e-10);

/// Join-up mismatches of T(seed) at the interior knots, plus the growth of
/// the first derivative along the iteration (reported only).
StudyReport joinup_study(const std::string& label, const FixedPointHandle& handle, int max_order,
                         int points_per_unit = 256, double tol = 1e-6);

}  // namespace splinegen

#endif  // SPLINEGEN_ANALYSIS_HPP
