#include "splinegen/expspline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splinegen {

namespace {

struct Antiderivative {
  ExpPolyPiece terms;  // e^{a t} * F(t), as terms in t
  bool ill_conditioned = false;
};

// F is an antiderivative of coeff * s^m * e^{(rate - a) s}. Returns the terms
// of e^{a t} F(t), whose rates are back at `rate`.
Antiderivative antiderivative_times_kernel(const ExpPolyTerm& term, double a) {
  Antiderivative out;
  const double c = term.rate - a;
  const int m = term.power;
  if (c == 0.0) {
    out.terms.push_back({term.coeff / (m + 1), m + 1, term.rate});
    return out;
  }
  out.ill_conditioned = std::abs(c) < kRateConditioningThreshold;
  double falling = 1.0;  // m!/(m-i)!
  double inverse_power = 1.0 / c;
  for (int i = 0; i <= m; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    out.terms.push_back({term.coeff * sign * falling * inverse_power, m - i, term.rate});
    falling *= (m - i);
    inverse_power /= c;
  }
  return out;
}

// Value of the antiderivative F itself (without the e^{a t} factor) at s.
double antiderivative_value(const ExpPolyPiece& piece, double a, double s) {
  CompensatedSum<double> sum;
  for (const auto& term : piece) {
    for (const auto& t : antiderivative_times_kernel(term, a).terms)
      sum += t.coeff * std::pow(s, t.power) * std::exp((t.rate - a) * s);
  }
  return sum.value();
}

}  // namespace

ExpPolyPiece canonicalize(ExpPolyPiece terms) {
  std::sort(terms.begin(), terms.end(), [](const ExpPolyTerm& l, const ExpPolyTerm& r) {
    return l.rate != r.rate ? l.rate < r.rate : l.power < r.power;
  });
  ExpPolyPiece merged;
  for (const auto& term : terms) {
    if (!merged.empty() && merged.back().rate == term.rate && merged.back().power == term.power)
      merged.back().coeff += term.coeff;
    else
      merged.push_back(term);
  }
  std::erase_if(merged, [](const ExpPolyTerm& t) { return t.coeff == 0.0; });
  return merged;
}

PiecewiseExpPoly::PiecewiseExpPoly(std::vector<ExpPolyPiece> pieces, bool ill_conditioned)
    : pieces_(std::move(pieces)), ill_conditioned_(ill_conditioned) {
  if (pieces_.empty()) throw std::invalid_argument("PiecewiseExpPoly: order must be >= 1");
  for (auto& piece : pieces_) {
    for (const auto& term : piece) {
      if (!std::isfinite(term.coeff) || !std::isfinite(term.rate) || term.power < 0)
        throw std::invalid_argument("PiecewiseExpPoly: malformed term");
    }
    piece = canonicalize(std::move(piece));
  }
}

double PiecewiseExpPoly::piece_value(int j, double t) const {
  CompensatedSum<double> sum;
  for (const auto& term : piece(j)) sum += term.coeff * std::pow(t, term.power) * std::exp(term.rate * t);
  return sum.value();
}

double PiecewiseExpPoly::operator()(double x) const {
  if (!(x >= 0.0) || !(x < order())) return 0.0;
  const int j = static_cast<int>(std::floor(x));
  return piece_value(j, x - j);
}

RateTuple::RateTuple(std::vector<double> rates) : rates_(std::move(rates)) {
  if (rates_.empty()) throw std::invalid_argument("RateTuple: need at least one rate");
  for (double r : rates_)
    if (!std::isfinite(r)) throw std::invalid_argument("RateTuple: non-finite rate");
  if (std::all_of(rates_.begin(), rates_.end(), [](double r) { return r == 0.0; }))
    throw std::invalid_argument("RateTuple: at least one rate must be nonzero");
}

RateTuple RateTuple::negated() const {
  std::vector<double> out(rates_.size());
  std::transform(rates_.begin(), rates_.end(), out.begin(), [](double r) { return -r; });
  return RateTuple(std::move(out), true);
}

PiecewiseExpPoly exp_kernel(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("exp_kernel: non-finite rate");
  return PiecewiseExpPoly({{{1.0, 0, a}}});
}

PiecewiseExpPoly convolve_with_kernel(const PiecewiseExpPoly& p, double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("convolve_with_kernel: non-finite rate");
  // For x = j + t, (p * e^{a.}chi)(x) =
  //   e^{a t} [ e^{a} (G_{j-1}(1) - G_{j-1}(t)) + G_j(t) - G_j(0) ],
  // G_i an antiderivative of p_i(s) e^{-a s}.
  const int order = p.order();
  const double ea = std::exp(a);
  bool ill = p.ill_conditioned();
  std::vector<ExpPolyPiece> pieces(static_cast<std::size_t>(order + 1));
  for (int j = 0; j <= order; ++j) {
    ExpPolyPiece& out = pieces[static_cast<std::size_t>(j)];
    double constant = 0.0;
    if (j >= 1) {
      const ExpPolyPiece& left = p.piece(j - 1);
      for (const auto& term : left) {
        const auto anti = antiderivative_times_kernel(term, a);
        ill = ill || anti.ill_conditioned;
        for (auto t : anti.terms) {
          t.coeff *= -ea;
          out.push_back(t);
        }
      }
      constant += ea * antiderivative_value(left, a, 1.0);
    }
    if (j < order) {
      const ExpPolyPiece& own = p.piece(j);
      for (const auto& term : own) {
        const auto anti = antiderivative_times_kernel(term, a);
        ill = ill || anti.ill_conditioned;
        out.insert(out.end(), anti.terms.begin(), anti.terms.end());
      }
      constant -= antiderivative_value(own, a, 0.0);
    }
    out.push_back({constant, 0, a});
  }
  return PiecewiseExpPoly(std::move(pieces), ill);
}

PiecewiseExpPoly exp_bspline(const RateTuple& rates) {
  const auto& a = rates.values();
  PiecewiseExpPoly result = exp_kernel(a.front());
  for (std::size_t k = 1; k < a.size(); ++k) result = convolve_with_kernel(result, a[k]);
  return result;
}

ComplexExpBSpline::ComplexExpBSpline(ComplexOrder z, double a, double horizon)
    : spline_(z, horizon), rate_(a) {
  if (!(a > 0.0)) throw std::domain_error("ComplexExpBSpline: rate must be positive");
}

SplineValue ComplexExpBSpline::evaluate(double x) const {
  SplineValue v = spline_.evaluate(x);
  v.value *= std::exp(-rate_ * x);
  return v;
}

}  // namespace splinegen
