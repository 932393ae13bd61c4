#ifndef SPLINEGEN_SELFREF_HPP
#define SPLINEGEN_SELFREF_HPP

#include <limits>
#include <vector>

#include <Eigen/Core>

#include "splinegen/bspline.hpp"
#include "splinegen/expspline.hpp"
#include "splinegen/sampled.hpp"

namespace splinegen {

/// A family of bijections L_1..L_N whose images partition the domain.
///
/// BoundedUniform(N): domain [0, N], L_n(x) = x/N + (n - 1), image [n-1, n)
/// (the last one closed).
/// UnboundedArctanShift(x_0 = 0 < ... < x_{N-1}): domain [0, inf),
/// L_n(x) = x_{n-1} + (x_n - x_{n-1}) (2/pi) arctan x for n < N and
/// L_N(x) = x + x_{N-1}.
class Partition {
 public:
  enum class Kind { BoundedUniform, UnboundedArctanShift };

  static Partition bounded_uniform(int maps);
  /// `knots` lists x_0 = 0 < x_1 < ... < x_{N-1}.
  static Partition arctan_shift(std::vector<double> knots);

  Kind kind() const { return kind_; }
  bool bounded() const { return kind_ == Kind::BoundedUniform; }
  int size() const { return maps_; }
  /// Right end of the domain: N, or +inf.
  double upper() const;
  /// Left endpoints L_n(0) of the cells, n = 1..N.
  const std::vector<double>& knots() const { return knots_; }

  /// 1-based index of the cell containing x (x inside the domain).
  int cell(double x) const;
  double map(int n, double x) const;
  double inverse(int n, double y) const;

 private:
  Partition(Kind kind, int maps, std::vector<double> knots)
      : kind_(kind), maps_(maps), knots_(std::move(knots)) {}

  Kind kind_;
  int maps_;
  std::vector<double> knots_;
};

/// Vertical scaling factors alpha_1..alpha_N with max |alpha_n| < 1.
class ScalingVector {
 public:
  explicit ScalingVector(Eigen::VectorXd alphas);
  ScalingVector(std::initializer_list<double> alphas);

  const Eigen::VectorXd& values() const { return alphas_; }
  int size() const { return static_cast<int>(alphas_.size()); }
  /// 1-based access, matching the cell numbering.
  double operator()(int n) const { return alphas_[n - 1]; }
  double max_abs() const { return alphas_.cwiseAbs().maxCoeff(); }

 private:
  Eigen::VectorXd alphas_;
};

/// Seed f, base b, scaling and partition of the operator
///   (Tg)(x) = f(x) + alpha_n (g - b)(L_n^{-1} x),  x in L_n(I).
/// An empty base means b = 0. For unbounded partitions the seed must vanish
/// at 0 and at infinity; `seed_support` (if finite) is a point beyond which
/// the seed is identically zero.
class RBSystem {
 public:
  RBSystem(Evaluator seed, ScalingVector scaling, Partition partition, Evaluator base = {},
           double seed_support = std::numeric_limits<double>::infinity());

  Complex seed(double x) const { return seed_(x); }
  Complex base(double x) const { return base_ ? base_(x) : Complex{}; }
  bool has_base() const { return static_cast<bool>(base_); }
  const ScalingVector& scaling() const { return scaling_; }
  const Partition& partition() const { return partition_; }
  double seed_support() const { return seed_support_; }

 private:
  Evaluator seed_;
  Evaluator base_;
  ScalingVector scaling_;
  Partition partition_;
  double seed_support_;
};

/// The fixed point f* of an RB operator, evaluated pointwise by unrolling
///   f*(x) = f(x) + alpha_n (f* - b)(L_n^{-1} x)
/// along the (single) orbit of x until the accumulated weight times a bound
/// on sup|f*| drops below the tolerance.
class FixedPointHandle {
 public:
  FixedPointHandle(RBSystem system, double tolerance);

  Complex operator()(double x) const { return evaluate(x, tolerance_); }
  Complex evaluate(double x, double tolerance) const;

  const RBSystem& system() const { return system_; }
  double tolerance() const { return tolerance_; }
  /// Upper bound on sup|f*| used for truncation: (sup|f| + alpha sup|b|)/(1 - alpha).
  double bound() const { return bound_; }

 private:
  RBSystem system_;
  double tolerance_;
  double bound_;
};

/// One application of T on the uniform grid {i/M : 0 <= i <= N M}. The grid
/// is closed under every L_n^{-1}, so no interpolation is involved.
SampledFunction rb_apply(const RBSystem& system, const SampledFunction& g);

/// Uniform grid with M points per unit on [0, N].
SampledFunction closed_grid(const RBSystem& system, int points_per_unit);

struct GridFixedPoint {
  SampledFunction values;
  /// Largest one-step ratio |g_{k+1} - g_k| / |g_k - g_{k-1}| over the last
  /// few iterations. On a node grid the single-step ratio can alternate when
  /// the alpha_n differ, so a window maximum is reported.
  double observed_rate = 0.0;
  int iterations = 0;
  std::vector<double> increments;  // sup-norm of g_{k+1} - g_k
};

/// Banach iteration from g_0 = seed until |g_{k+1} - g_k| <= tol (1 - a) / a,
/// a = max|alpha_n|, which puts g_{k+1} within tol of the fixed point.
/// Throws std::runtime_error after max_iterations.
GridFixedPoint fixed_point_grid(const RBSystem& system, int points_per_unit, double tol,
                                int max_iterations = 10000);

/// max over xs of |f*(x) - f(x) - alpha_n (f* - b)(L_n^{-1} x)|.
double residual(const FixedPointHandle& handle, const std::vector<double>& xs, double tol);

struct JoinupEntry {
  int knot = 0;   // interior knot m
  int order = 0;  // derivative order nu
  Complex left;
  Complex right;
  double mismatch = 0.0;
};

struct JoinupReport {
  std::vector<JoinupEntry> entries;
  double max_mismatch() const;
  double max_mismatch(int order) const;
};

/// One-sided values (order 0, exact) and one-sided finite-difference
/// derivatives (orders 1..max_order) of Tg at the interior knots.
JoinupReport check_joinup(const RBSystem& system, const SampledFunction& g, int max_order);

/// sup-norm of the central-difference first derivative of T^k(seed),
/// k = 0..iterations, on a closed grid.
std::vector<double> derivative_growth(const RBSystem& system, int points_per_unit, int iterations);

/// 𝔅_N: seed B_N on [0, N]. With `enforce_smoothness`, requires
/// |alpha_n| N^{N-2} < 1 so derivatives up to N-2 also contract.
FixedPointHandle make_fractal_poly(int order, const ScalingVector& alphas, double tol,
                                   bool enforce_smoothness = false);
/// 𝔈_{N,a}: seed E_{N,a} on [0, N].
FixedPointHandle make_fractal_exp(const RateTuple& rates, const ScalingVector& alphas, double tol);
/// 𝔅_z on [0, inf) with an unbounded partition.
FixedPointHandle make_fractal_complex_poly(ComplexOrder z, const ScalingVector& alphas,
                                           const Partition& partition, double tol);
/// 𝔈_{z,a} on [0, inf) with an unbounded partition.
FixedPointHandle make_fractal_complex_exp(ComplexOrder z, double a, const ScalingVector& alphas,
                                          const Partition& partition, double tol);

}  // namespace splinegen

#endif  // SPLINEGEN_SELFREF_HPP
