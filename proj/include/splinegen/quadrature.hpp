#ifndef SPLINEGEN_QUADRATURE_HPP
#define SPLINEGEN_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace splinegen {

class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

template <typename Scalar>
struct QuadratureResult {
  Scalar value{};
  double error = 0.0;      // estimated absolute error
  bool converged = true;   // false if some panel hit the depth limit
  long evaluations = 0;
};

namespace detail {

template <typename Scalar, typename F>
Scalar simpson_panel(F& f, double a, double b, const Scalar& fa, const Scalar& fm,
                     const Scalar& fb, QuadratureResult<Scalar>& out, double tol,
                     const Scalar& whole, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const Scalar flm = f(lm);
  const Scalar frm = f(rm);
  out.evaluations += 2;
  const Scalar left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Scalar right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Scalar delta = left + right - whole;
  const double err = std::abs(delta) / 15.0;
  if (err <= tol || depth <= 0 || m <= a || b <= m) {
    if (err > tol) out.converged = false;
    out.error += err;
    return left + right + delta / 15.0;
  }
  return simpson_panel(f, a, m, fa, flm, fm, out, 0.5 * tol, left, depth - 1) +
         simpson_panel(f, m, b, fm, frm, fb, out, 0.5 * tol, right, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] with Richardson correction.
/// Scalar may be real or complex; the error estimate is absolute.
template <typename Scalar, typename F>
QuadratureResult<Scalar> adaptive_simpson(F&& f, double a, double b, double tol,
                                          int max_depth = 48) {
  QuadratureResult<Scalar> out;
  if (!(b > a)) return out;
  const double m = 0.5 * (a + b);
  const Scalar fa = f(a);
  const Scalar fm = f(m);
  const Scalar fb = f(b);
  out.evaluations = 3;
  const Scalar whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  out.value = detail::simpson_panel(f, a, b, fa, fm, fb, out, tol, whole, max_depth);
  return out;
}

/// Nodes and weights of an n-point rule on [-1, 1].
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Gauss-Legendre rule from the eigen-decomposition of the Jacobi matrix.
QuadratureRule gauss_legendre(int points);

/// Applies a rule to f on [a, b].
template <typename Scalar, typename F>
Scalar integrate(const QuadratureRule& rule, F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Scalar sum{};
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

namespace detail {

template <typename Scalar, typename F>
Scalar gauss_panel(const QuadratureRule& rule, F& f, double a, double b, const Scalar& whole,
                   QuadratureResult<Scalar>& out, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const Scalar left = integrate<Scalar>(rule, f, a, m);
  const Scalar right = integrate<Scalar>(rule, f, m, b);
  out.evaluations += 2 * rule.nodes.size();
  const double err = std::abs(left + right - whole);
  if (err <= tol || depth <= 0 || m <= a || b <= m) {
    if (err > tol) out.converged = false;
    out.error += err;
    return left + right;
  }
  return gauss_panel(rule, f, a, m, left, out, 0.5 * tol, depth - 1) +
         gauss_panel(rule, f, m, b, right, out, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive bisection with a fixed Gauss-Legendre rule. The rule is open, so
/// f is never evaluated at a or b (useful when f jumps at the ends).
template <typename Scalar, typename F>
QuadratureResult<Scalar> adaptive_gauss(F&& f, double a, double b, double tol, int points = 10,
                                        int max_depth = 40) {
  QuadratureResult<Scalar> out;
  if (!(b > a)) return out;
  const QuadratureRule rule = gauss_legendre(points);
  const Scalar whole = integrate<Scalar>(rule, f, a, b);
  out.evaluations = rule.nodes.size();
  out.value = detail::gauss_panel(rule, f, a, b, whole, out, tol, max_depth);
  return out;
}

}  // namespace splinegen

#endif  // SPLINEGEN_QUADRATURE_HPP
