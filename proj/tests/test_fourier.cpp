#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "splinegen/analysis.hpp"
#include "splinegen/fourier.hpp"
#include "splinegen/quadrature.hpp"

using splinegen::Complex;
using splinegen::ComplexOrder;
using splinegen::RateTuple;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> log_spaced(int count, double lo, double hi) {
  std::vector<double> w;
  for (int i = 0; i < count; ++i) w.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return w;
}
}  // namespace

TEST_SUITE("fourier") {
  TEST_CASE("Omega kernel") {
    CHECK(splinegen::omega_kernel(0.0) == Complex(1.0, 0.0));
    for (int k : {-3, -1, 1, 2, 7}) CHECK(std::abs(splinegen::omega_kernel(2 * kPi * k)) < 1e-15);
    CHECK(std::abs(splinegen::omega_kernel(kPi) - Complex(0.0, -2.0 / kPi)) < 1e-15);
    // Series and closed form meet at the switch radius.
    const double r = splinegen::kKernelSeriesRadius;
    CHECK(std::abs(splinegen::omega_kernel(r * (1 - 1e-12)) - splinegen::omega_kernel(r * (1 + 1e-12))) < 1e-15);
    CHECK(std::abs(splinegen::omega_kernel(1e-7) - Complex(1.0 - 1e-14 / 6.0, -0.5e-7)) < 1e-16);
  }

  TEST_CASE("exponential Omega kernel") {
    CHECK(std::abs(splinegen::omega_kernel_exp(1.0, 0.0) - (1.0 - std::exp(-1.0))) < 1e-15);
    CHECK(std::abs(splinegen::omega_kernel_exp(1.7, 0.0) - (1.0 - std::exp(-1.7)) / 1.7) < 1e-15);
    for (double w : oracle::uniform(3, 50, -20.0, 20.0))
      CHECK(std::abs(splinegen::omega_kernel_exp(0.5, -w) - std::conj(splinegen::omega_kernel_exp(0.5, w))) < 1e-15);
    CHECK_THROWS_AS(splinegen::omega_kernel_exp(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(splinegen::omega_kernel_exp(-1.0, 1.0), std::domain_error);
  }

  TEST_CASE("integer order transform") {
    using splinegen::IntegerOrder;
    CHECK(splinegen::ft_bspline(IntegerOrder(5), 0.0) == Complex(1.0, 0.0));
    CHECK(std::abs(splinegen::ft_bspline(IntegerOrder(1), kPi) - Complex(0.0, -2.0 / kPi)) < 1e-15);
    CHECK(std::abs(splinegen::ft_bspline(IntegerOrder(2), 2 * kPi)) < 1e-15);
    for (double w : oracle::uniform(4, 100, -30.0, 30.0))
      for (int n = 1; n <= 6; ++n)
        CHECK(std::abs(splinegen::ft_bspline(IntegerOrder(n), -w) - std::conj(splinegen::ft_bspline(IntegerOrder(n), w))) < 1e-15);
  }

  TEST_CASE("complex order transform and its decomposition") {
    const auto at_zero = splinegen::ft_bspline(ComplexOrder({3.3, -1.7}), 0.0);
    CHECK(std::abs(at_zero.value() - 1.0) < 1e-15);
    for (double w : oracle::uniform(5, 50, -25.0, 25.0)) {
      const auto d = splinegen::ft_bspline(ComplexOrder({2, 0}), w);
      const Complex omega = splinegen::omega_kernel(w);
      CHECK(std::abs(d.value() - omega * omega) < 1e-14);
      CHECK(d.phase == Complex(1.0, 0.0));
      CHECK(d.modulation == Complex(1.0, 0.0));
    }
    const Complex expected = splinegen::principal_power(Complex(0.0, -2.0 / kPi), {3.0, 1.0});
    CHECK(std::abs(splinegen::ft_bspline(ComplexOrder({3, 1}), kPi).value() - expected) < 1e-15);

    const auto re = oracle::uniform(6, 200, 1.1, 6.0);
    const auto im = oracle::uniform(7, 200, -3.0, 3.0);
    const auto ws = oracle::uniform(8, 200, -40.0, 40.0);
    for (std::size_t i = 0; i < re.size(); ++i) {
      const Complex z(re[i], im[i]);
      const auto d = splinegen::ft_bspline(ComplexOrder(z), ws[i]);
      const Complex reference = splinegen::principal_power(splinegen::omega_kernel(ws[i]), z);
      CHECK(std::abs(d.value() - reference) <= 1e-12 * std::max(1.0, std::abs(reference)));
      CHECK(std::abs(std::abs(d.phase) - 1.0) < 1e-15);
      CHECK(d.modulation.imag() == 0.0);
    }
  }

  TEST_CASE("branch safety of Omega and Omega_a") {
    for (double w : oracle::uniform(9, 10000, -50.0, 50.0)) {
      if (w == 0.0) continue;
      const Complex o = splinegen::omega_kernel(w);
      CHECK((std::abs(std::arg(o)) < kPi));
      CHECK_FALSE((o.imag() == 0.0 && o.real() <= 0.0));
      for (double a : {0.5, 1.0, 1.7}) {
        const Complex oa = splinegen::omega_kernel_exp(a, w);
        CHECK((std::abs(std::arg(oa)) < kPi));
        CHECK_FALSE((oa.imag() == 0.0 && oa.real() <= 0.0));
      }
    }
  }

  TEST_CASE("exponential product formula") {
    for (double a : {-2.0, 0.5, 3.0})
      CHECK(std::abs(splinegen::ft_exp_bspline(RateTuple({a}), 0.0) - (1.0 - std::exp(-a)) / a) < 1e-14);
    for (double w : oracle::uniform(10, 50, -20.0, 20.0)) {
      CHECK(std::abs(splinegen::exp_difference_kernel({0.0, w}) - splinegen::omega_kernel(w)) < 1e-16);
      const Complex nearly = splinegen::ft_exp_bspline(RateTuple({0.0, 0.0, 1e-12}), w);
      CHECK(std::abs(nearly - splinegen::ft_bspline(splinegen::IntegerOrder(3), w)) < 1e-11);
    }
    const double a = 1.3;
    const Complex closed = splinegen::ft_exp_bspline(ComplexOrder({2, 0}), a, 2.0);
    const Complex kernel = splinegen::omega_kernel_exp(a, 2.0);
    CHECK(std::abs(closed - kernel * kernel) < 1e-15);
    const Complex at_zero = splinegen::ft_exp_bspline(ComplexOrder({2.5, 0.5}), 1.0, 0.0);
    CHECK(std::abs(at_zero - splinegen::principal_power(1.0 - std::exp(-1.0), {2.5, 0.5})) < 1e-15);
    CHECK_THROWS_AS(splinegen::ft_exp_bspline(ComplexOrder({2, 0}), 0.0, 1.0), std::domain_error);
  }

  TEST_CASE("numeric transform of compact families") {
    const auto b2 = splinegen::SplineFamily::poly(2);
    const auto at0 = splinegen::numeric_ft(b2.evaluator(), 0.0, 2.0, 1e-12);
    CHECK(std::abs(at0.value - 1.0) < 1e-10);
    const auto atpi = splinegen::numeric_ft(b2.evaluator(), kPi, 2.0, 1e-12);
    const Complex o = splinegen::omega_kernel(kPi);
    CHECK(std::abs(atpi.value - o * o) < 1e-10);

    const auto e11 = splinegen::SplineFamily::exp(RateTuple({1, 1}));
    const auto num = splinegen::numeric_ft(e11.evaluator(), 0.0, 2.0, 1e-12);
    CHECK(std::abs(num.value - splinegen::ft_exp_bspline(RateTuple({-1, -1}), 0.0)) < 1e-8);
    CHECK(std::abs(num.value - std::pow(std::numbers::e - 1.0, 2)) < 1e-8);

    for (const auto& family : {splinegen::SplineFamily::poly(4), splinegen::SplineFamily::exp(RateTuple({2, -2})),
                               splinegen::SplineFamily::exp(RateTuple({4, -3, 1}))}) {
      for (double w : log_spaced(20, 0.05, 40.0)) {
        const auto r = splinegen::numeric_ft(family.evaluator(), w, family.upper(), 1e-11, family.decay());
        CHECK(std::abs(r.value - family.transform(w)) <= 1e-6);
        CHECK(r.tail_bound == 0.0);
      }
    }
  }

  TEST_CASE("numeric transform of complex families") {
    const auto family = splinegen::SplineFamily::complex_exp(ComplexOrder({std::numbers::sqrt2, 1}), 1.0);
    for (double w : log_spaced(20, 0.05, 40.0)) {
      const auto r = splinegen::numeric_ft(family.evaluator(), w, family.upper(), 1e-10, family.decay());
      CHECK(std::abs(r.value - family.transform(w)) <= 1e-4);
      CHECK(r.tail_bound > 0.0);
    }
  }

  TEST_CASE("numeric transform errors") {
    const auto f = [](double) { return Complex(1.0); };
    CHECK_THROWS_AS(splinegen::numeric_ft(f, 0.0, 0.0, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(splinegen::numeric_ft(f, 0.0, 1.0, 0.0), std::invalid_argument);
    const auto jump = [](double x) { return Complex(x < 0.3 ? 0.0 : 1.0); };
    CHECK_THROWS_AS(splinegen::numeric_ft(jump, 0.0, 1.0, 1e-300), splinegen::QuadratureError);
  }
}
