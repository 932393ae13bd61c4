#include "splinegen/selfref.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace splinegen {

namespace {

constexpr int kRateWindow = 4;
constexpr long kMaxOrbitSteps = 10'000'000;

// Fornberg weights for the derivative of order `order` at 0 from `offsets`.
Eigen::VectorXd fornberg_weights(const Eigen::VectorXd& offsets, int order) {
  const Eigen::Index n = offsets.size();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, order + 1);
  double c1 = 1.0;
  double c4 = offsets[0];
  c(0, 0) = 1.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const int mn = static_cast<int>(std::min<Eigen::Index>(i, order));
    double c2 = 1.0;
    const double c5 = c4;
    c4 = offsets[i];
    for (Eigen::Index j = 0; j < i; ++j) {
      const double c3 = offsets[i] - offsets[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(order);
}

double sampled_sup(const Evaluator& f, double lo, double hi, int samples) {
  double sup = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    sup = std::max(sup, std::abs(f(x)));
  }
  return sup;
}

int points_per_unit_of(const RBSystem& system, const SampledFunction& g) {
  const int maps = system.partition().size();
  const Eigen::Index nodes = g.size();
  if (nodes < 2 || (nodes - 1) % maps != 0)
    throw std::invalid_argument("rb_apply: grid not closed under the partition maps");
  const auto m = static_cast<int>((nodes - 1) / maps);
  for (Eigen::Index i = 0; i < nodes; ++i) {
    if (std::abs(g.x[i] - static_cast<double>(i) / m) > 1e-12 * maps)
      throw std::invalid_argument("rb_apply: grid not closed under the partition maps");
  }
  return m;
}

// Index of L_n^{-1}(x_i) on the closed grid.
Eigen::Index source_index(Eigen::Index i, int m, int maps) {
  const Eigen::Index last = static_cast<Eigen::Index>(m) * maps;
  if (i >= last) return last;
  return maps * (i % m);
}

struct GridOperator {
  Eigen::VectorXcd seed;
  Eigen::VectorXcd scaled_base;  // alpha_n b(L_n^{-1} x_i)
  Eigen::VectorXd alpha;         // alpha_{n(i)}
  std::vector<Eigen::Index> source;

  GridOperator(const RBSystem& system, const Eigen::VectorXd& x, int m) {
    const int maps = system.partition().size();
    const Eigen::Index nodes = x.size();
    seed.resize(nodes);
    scaled_base = Eigen::VectorXcd::Zero(nodes);
    alpha.resize(nodes);
    source.resize(static_cast<std::size_t>(nodes));
    for (Eigen::Index i = 0; i < nodes; ++i) {
      const int n = std::min<int>(static_cast<int>(i / m) + 1, maps);
      seed[i] = system.seed(x[i]);
      alpha[i] = system.scaling()(n);
      source[static_cast<std::size_t>(i)] = source_index(i, m, maps);
      if (system.has_base())
        scaled_base[i] = alpha[i] * system.base(x[source[static_cast<std::size_t>(i)]]);
    }
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& g) const {
    Eigen::VectorXcd out(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i)
      out[i] = seed[i] + alpha[i] * g[source[static_cast<std::size_t>(i)]] - scaled_base[i];
    return out;
  }
};

void require_bounded(const RBSystem& system, const char* who) {
  if (!system.partition().bounded())
    throw std::invalid_argument(std::string(who) + ": requires a bounded partition");
}

}  // namespace

// ---------------------------------------------------------------------------
// Partition

Partition Partition::bounded_uniform(int maps) {
  if (maps < 2) throw std::invalid_argument("Partition: need at least two maps");
  std::vector<double> knots(static_cast<std::size_t>(maps));
  for (int n = 0; n < maps; ++n) knots[static_cast<std::size_t>(n)] = n;
  return Partition(Kind::BoundedUniform, maps, std::move(knots));
}

Partition Partition::arctan_shift(std::vector<double> knots) {
  if (knots.size() < 2) throw std::invalid_argument("Partition: need at least two maps");
  if (knots.front() != 0.0) throw std::invalid_argument("Partition: first knot must be 0");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i]) || !(knots[i] > knots[i - 1]))
      throw std::invalid_argument("Partition: knots must be finite and increasing");
  }
  const int maps = static_cast<int>(knots.size());
  return Partition(Kind::UnboundedArctanShift, maps, std::move(knots));
}

double Partition::upper() const {
  return bounded() ? static_cast<double>(maps_) : std::numeric_limits<double>::infinity();
}

int Partition::cell(double x) const {
  if (!(x >= 0.0) || x > upper()) throw std::domain_error("Partition: point outside the domain");
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  return static_cast<int>(it - knots_.begin());
}

double Partition::map(int n, double x) const {
  if (n < 1 || n > maps_) throw std::out_of_range("Partition: map index");
  const double left = knots_[static_cast<std::size_t>(n - 1)];
  if (bounded()) return x / maps_ + left;
  if (n == maps_) return x + left;
  const double width = knots_[static_cast<std::size_t>(n)] - left;
  return left + width * (2.0 / std::numbers::pi) * std::atan(x);
}

double Partition::inverse(int n, double y) const {
  if (n < 1 || n > maps_) throw std::out_of_range("Partition: map index");
  const double left = knots_[static_cast<std::size_t>(n - 1)];
  if (bounded()) return maps_ * (y - left);
  if (n == maps_) return y - left;
  const double right = knots_[static_cast<std::size_t>(n)];
  const double width = right - left;
  const double u = (y - left) / width;
  if (u <= 0.5) return std::tan(0.5 * std::numbers::pi * u);
  // tan(pi u / 2) = cot(pi (1 - u) / 2), with 1 - u formed from the right end.
  const double complement = (right - y) / width;
  if (complement <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / std::tan(0.5 * std::numbers::pi * complement);
}

// ---------------------------------------------------------------------------
// ScalingVector / RBSystem

ScalingVector::ScalingVector(Eigen::VectorXd alphas) : alphas_(std::move(alphas)) {
  if (alphas_.size() < 1) throw std::invalid_argument("ScalingVector: empty");
  if (!alphas_.allFinite()) throw std::invalid_argument("ScalingVector: non-finite entry");
  if (!(max_abs() < 1.0)) throw std::invalid_argument("ScalingVector: need max|alpha_n| < 1");
}

ScalingVector::ScalingVector(std::initializer_list<double> alphas)
    : ScalingVector(Eigen::Map<const Eigen::VectorXd>(alphas.begin(),
                                                      static_cast<Eigen::Index>(alphas.size()))) {}

RBSystem::RBSystem(Evaluator seed, ScalingVector scaling, Partition partition, Evaluator base,
                   double seed_support)
    : seed_(std::move(seed)),
      base_(std::move(base)),
      scaling_(std::move(scaling)),
      partition_(std::move(partition)),
      seed_support_(seed_support) {
  if (!seed_) throw std::invalid_argument("RBSystem: missing seed");
  if (scaling_.size() != partition_.size())
    throw std::invalid_argument("RBSystem: one scaling factor per partition map required");
  if (!partition_.bounded()) {
    if (std::abs(seed_(0.0)) > 1e-12)
      throw std::invalid_argument("RBSystem: seed must vanish at 0 on an unbounded domain");
    const double far = std::isfinite(seed_support_) ? 2.0 * seed_support_ + 1.0 : 1e6;
    if (std::abs(seed_(far)) > 1e-6)
      throw std::invalid_argument("RBSystem: seed must vanish at infinity");
  }
}

// ---------------------------------------------------------------------------
// FixedPointHandle

FixedPointHandle::FixedPointHandle(RBSystem system, double tolerance)
    : system_(std::move(system)), tolerance_(tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("FixedPointHandle: tolerance must be positive");
  const Partition& p = system_.partition();
  double hi = p.upper();
  if (!std::isfinite(hi)) {
    hi = std::isfinite(system_.seed_support()) ? system_.seed_support() : 200.0;
    hi = std::max(hi, p.knots().back() + 1.0);
  }
  const int samples = std::max(4096, static_cast<int>(hi * 200.0));
  const Evaluator seed = [this](double x) { return system_.seed(x); };
  double sup = sampled_sup(seed, 0.0, hi, samples);
  if (system_.has_base()) {
    const Evaluator base = [this](double x) { return system_.base(x); };
    sup += system_.scaling().max_abs() * sampled_sup(base, 0.0, hi, samples);
  }
  bound_ = 1.05 * sup / (1.0 - system_.scaling().max_abs()) + 1e-300;
}

Complex FixedPointHandle::evaluate(double x, double tolerance) const {
  if (!(x >= 0.0)) throw std::domain_error("FixedPointHandle: x must be nonnegative");
  if (x > system_.partition().upper())
    throw std::domain_error("FixedPointHandle: x lies beyond the domain");
  if (!(tolerance > 0.0)) throw std::invalid_argument("FixedPointHandle: tolerance must be positive");
  const Partition& p = system_.partition();
  const ScalingVector& alpha = system_.scaling();
  const int last = p.size();
  const double shift = p.knots().back();
  const bool skip_far = !p.bounded() && !system_.has_base() && std::isfinite(system_.seed_support());

  CompensatedSum<Complex> sum;
  double weight = 1.0;
  double y = x;
  for (long step = 0; step < kMaxOrbitSteps; ++step) {
    if (std::abs(weight) * bound_ <= tolerance || !std::isfinite(y)) break;
    int n = p.cell(y);
    if (skip_far && n == last && y > system_.seed_support() + shift) {
      // The seed vanishes along this stretch of the shift orbit.
      const double jumps = std::ceil((y - system_.seed_support()) / shift);
      weight *= std::pow(alpha(last), jumps);
      y -= jumps * shift;
      if (std::abs(weight) * bound_ <= tolerance) break;
      n = p.cell(y);
    }
    const double next = p.inverse(n, y);
    Complex term = system_.seed(y);
    if (system_.has_base() && std::isfinite(next)) term -= alpha(n) * system_.base(next);
    sum += weight * term;
    weight *= alpha(n);
    y = next;
  }
  return sum.value();
}

// ---------------------------------------------------------------------------
// Grid iteration

SampledFunction closed_grid(const RBSystem& system, int points_per_unit) {
  require_bounded(system, "closed_grid");
  if (points_per_unit < 1) throw std::invalid_argument("closed_grid: need M >= 1");
  const Eigen::Index nodes = static_cast<Eigen::Index>(points_per_unit) * system.partition().size() + 1;
  SampledFunction g;
  g.x.resize(nodes);
  for (Eigen::Index i = 0; i < nodes; ++i) g.x[i] = static_cast<double>(i) / points_per_unit;
  g.values = Eigen::VectorXcd::Zero(nodes);
  return g;
}

SampledFunction rb_apply(const RBSystem& system, const SampledFunction& g) {
  require_bounded(system, "rb_apply");
  const int m = points_per_unit_of(system, g);
  const GridOperator op(system, g.x, m);
  return {g.x, op.apply(g.values)};
}

GridFixedPoint fixed_point_grid(const RBSystem& system, int points_per_unit, double tol,
                                int max_iterations) {
  require_bounded(system, "fixed_point_grid");
  if (!(tol > 0.0)) throw std::invalid_argument("fixed_point_grid: tolerance must be positive");
  SampledFunction g = closed_grid(system, points_per_unit);
  const GridOperator op(system, g.x, points_per_unit);
  g.values = op.seed;
  const double a = system.scaling().max_abs();
  const double stop = a > 0.0 ? tol * (1.0 - a) / a : std::numeric_limits<double>::infinity();

  GridFixedPoint out;
  for (int k = 0; k < max_iterations; ++k) {
    Eigen::VectorXcd next = op.apply(g.values);
    const double increment = (next - g.values).cwiseAbs().maxCoeff();
    g.values = std::move(next);
    out.increments.push_back(increment);
    out.iterations = k + 1;
    if (increment <= stop) break;
  }
  if (out.increments.back() > stop)
    throw std::runtime_error("fixed_point_grid: iteration limit reached before convergence");

  const auto& inc = out.increments;
  const std::size_t first = inc.size() > kRateWindow + 1 ? inc.size() - kRateWindow : 1;
  for (std::size_t k = first; k < inc.size(); ++k) {
    if (inc[k - 1] > 0.0) out.observed_rate = std::max(out.observed_rate, inc[k] / inc[k - 1]);
  }
  out.values = std::move(g);
  return out;
}

double residual(const FixedPointHandle& handle, const std::vector<double>& xs, double tol) {
  const RBSystem& system = handle.system();
  const Partition& p = system.partition();
  double worst = 0.0;
  for (double x : xs) {
    const int n = p.cell(x);
    const double y = p.inverse(n, x);
    Complex image{};
    if (std::isfinite(y)) image = handle.evaluate(y, tol) - system.base(y);
    const Complex r = handle.evaluate(x, tol) - system.seed(x) - system.scaling()(n) * image;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Join-up

double JoinupReport::max_mismatch() const {
  double worst = 0.0;
  for (const auto& e : entries) worst = std::max(worst, e.mismatch);
  return worst;
}

double JoinupReport::max_mismatch(int order) const {
  double worst = 0.0;
  for (const auto& e : entries)
    if (e.order == order) worst = std::max(worst, e.mismatch);
  return worst;
}

JoinupReport check_joinup(const RBSystem& system, const SampledFunction& g, int max_order) {
  require_bounded(system, "check_joinup");
  if (max_order < 0) throw std::invalid_argument("check_joinup: negative derivative order");
  const int m = points_per_unit_of(system, g);
  const int maps = system.partition().size();
  const SampledFunction tg = rb_apply(system, g);
  const double h = 1.0 / m;
  const Complex g_right_end = g.values[g.size() - 1];

  JoinupReport report;
  for (int knot = 1; knot < maps; ++knot) {
    const Eigen::Index centre = static_cast<Eigen::Index>(knot) * m;
    const double alpha_left = system.scaling()(knot);
    const Complex left_limit = system.seed(knot) + alpha_left * (g_right_end - system.base(maps));
    for (int order = 0; order <= max_order; ++order) {
      JoinupEntry e{knot, order, {}, {}, 0.0};
      if (order == 0) {
        e.left = left_limit;
        e.right = tg.values[centre];
      } else {
        const int points = order + 3;
        if (points > m) throw std::invalid_argument("check_joinup: grid too coarse for stencil");
        Eigen::VectorXd offsets(points);
        for (int k = 0; k < points; ++k) offsets[k] = k;
        const Eigen::VectorXd w_right = fornberg_weights(offsets, order);
        const Eigen::VectorXd w_left = fornberg_weights(-offsets, order);
        const double scale = std::pow(h, -order);
        for (int k = 0; k < points; ++k) {
          const Complex lv = k == 0 ? left_limit : tg.values[centre - k];
          e.left += w_left[k] * lv;
          e.right += w_right[k] * tg.values[centre + k];
        }
        e.left *= scale;
        e.right *= scale;
      }
      e.mismatch = std::abs(e.left - e.right);
      report.entries.push_back(e);
    }
  }
  return report;
}

std::vector<double> derivative_growth(const RBSystem& system, int points_per_unit, int iterations) {
  SampledFunction g = closed_grid(system, points_per_unit);
  const GridOperator op(system, g.x, points_per_unit);
  g.values = op.seed;
  std::vector<double> sups;
  const double h = 1.0 / points_per_unit;
  for (int k = 0; k <= iterations; ++k) {
    double sup = 0.0;
    for (Eigen::Index i = 1; i + 1 < g.size(); ++i)
      sup = std::max(sup, std::abs(g.values[i + 1] - g.values[i - 1]) / (2.0 * h));
    sups.push_back(sup);
    g.values = op.apply(g.values);
  }
  return sups;
}

// ---------------------------------------------------------------------------
// Named families

FixedPointHandle make_fractal_poly(int order, const ScalingVector& alphas, double tol,
                                   bool enforce_smoothness) {
  if (order < 2) throw std::invalid_argument("make_fractal_poly: order must be >= 2");
  if (enforce_smoothness &&
      !(alphas.max_abs() * std::pow(static_cast<double>(order), order - 2) < 1.0))
    throw std::invalid_argument("make_fractal_poly: |alpha_n| N^(N-2) must stay below 1");
  Evaluator seed = [order](double x) { return Complex(bspline(order, x), 0.0); };
  return FixedPointHandle(RBSystem(std::move(seed), alphas, Partition::bounded_uniform(order)), tol);
}

FixedPointHandle make_fractal_exp(const RateTuple& rates, const ScalingVector& alphas, double tol) {
  if (rates.size() < 2) throw std::invalid_argument("make_fractal_exp: order must be >= 2");
  const auto order = static_cast<int>(rates.size());
  Evaluator seed = [spline = exp_bspline(rates)](double x) { return Complex(spline(x), 0.0); };
  return FixedPointHandle(RBSystem(std::move(seed), alphas, Partition::bounded_uniform(order)), tol);
}

FixedPointHandle make_fractal_complex_poly(ComplexOrder z, const ScalingVector& alphas,
                                           const Partition& partition, double tol) {
  if (partition.bounded())
    throw std::invalid_argument("make_fractal_complex_poly: needs an unbounded partition");
  const ComplexBSpline spline(z);
  Evaluator seed = [spline](double x) { return spline(x); };
  return FixedPointHandle(RBSystem(std::move(seed), alphas, partition, {}, spline.horizon()), tol);
}

FixedPointHandle make_fractal_complex_exp(ComplexOrder z, double a, const ScalingVector& alphas,
                                          const Partition& partition, double tol) {
  if (partition.bounded())
    throw std::invalid_argument("make_fractal_complex_exp: needs an unbounded partition");
  const ComplexExpBSpline spline(z, a);
  Evaluator seed = [spline](double x) { return spline(x); };
  return FixedPointHandle(RBSystem(std::move(seed), alphas, partition, {}, spline.horizon()), tol);
}

}  // namespace splinegen
