#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "splinegen/analysis.hpp"
#include "splinegen/selfref.hpp"

using namespace splinegen;

namespace {

Partition unbounded2() { return Partition::arctan_shift({0.0, 1.0}); }

FixedPointHandle fig8(double tol) {
  return make_fractal_complex_poly(ComplexOrder({3.14159, 1}), {0.75, -0.5}, unbounded2(), tol);
}

FixedPointHandle fig9(double tol) {
  return make_fractal_complex_exp(ComplexOrder({std::numbers::sqrt2, 1}), 1.0, {0.75, -0.5}, unbounded2(), tol);
}

SampledFunction seed_on_grid(const RBSystem& s, int m) {
  SampledFunction g = closed_grid(s, m);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.values[i] = s.seed(g.x[i]);
  return g;
}

}  // namespace

TEST_SUITE("selfref") {
  TEST_CASE("bounded partition") {
    const auto p = Partition::bounded_uniform(3);
    CHECK(p.bounded());
    CHECK(p.upper() == 3.0);
    CHECK(p.knots() == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(p.cell(0.0) == 1);
    CHECK(p.cell(1.0) == 2);
    CHECK(p.cell(2.999) == 3);
    CHECK(p.cell(3.0) == 3);
    CHECK(p.map(2, 1.5) == 1.5);
    for (double x : oracle::uniform(20, 100, 0.0, 3.0))
      for (int n = 1; n <= 3; ++n) CHECK(std::abs(p.inverse(n, p.map(n, x)) - x) < 1e-14);
    CHECK_THROWS(Partition::bounded_uniform(1));
  }

  TEST_CASE("arctan/shift partition") {
    const auto p = Partition::arctan_shift({0.0, 1.0, 2.5});
    CHECK_FALSE(p.bounded());
    CHECK(std::isinf(p.upper()));
    CHECK(p.map(1, 0.0) == 0.0);
    CHECK(p.map(2, 0.0) == 1.0);
    CHECK(std::abs(p.map(2, 1e12) - 2.5) < 1e-9);
    CHECK(p.map(3, 4.0) == 6.5);
    CHECK(p.cell(0.5) == 1);
    CHECK(p.cell(2.0) == 2);
    CHECK(p.cell(100.0) == 3);
    // tan near pi/2 amplifies rounding in the mapped value roughly like x.
    for (double x : {1e-6, 0.3, 10.0, 1e4, 1e7}) {
      CAPTURE(x);
      CHECK(std::abs(p.inverse(1, p.map(1, x)) - x) <= 1e-15 * x * (1.0 + x));
    }
    CHECK_THROWS(Partition::arctan_shift({0.5, 1.0}));
    CHECK_THROWS(Partition::arctan_shift({0.0, 2.0, 1.0}));
    CHECK_THROWS(Partition::arctan_shift({0.0}));
  }

  TEST_CASE("scaling vector") {
    const ScalingVector a{0.75, -0.5};
    CHECK(a(1) == 0.75);
    CHECK(a(2) == -0.5);
    CHECK(a.max_abs() == 0.75);
    CHECK_THROWS_AS(ScalingVector({0.5, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ScalingVector({1.2}), std::invalid_argument);
  }

  TEST_CASE("system validation") {
    const Evaluator seed = [](double x) { return Complex(bspline(2, x), 0.0); };
    CHECK_THROWS_AS(RBSystem(seed, {0.5, 0.5, 0.5}, Partition::bounded_uniform(2)), std::invalid_argument);
    const Evaluator offset = [](double) { return Complex(1.0, 0.0); };
    CHECK_THROWS_AS(RBSystem(offset, {0.5, 0.5}, unbounded2()), std::invalid_argument);
    CHECK_THROWS_AS(make_fractal_complex_poly(ComplexOrder({3, 1}), {0.5, 0.5}, Partition::bounded_uniform(2), 1e-8),
                    std::invalid_argument);
  }

  TEST_CASE("rb_apply") {
    const auto h0 = make_fractal_poly(3, {0.0, 0.0, 0.0}, 1e-8);
    const auto g = seed_on_grid(h0.system(), 64);
    SampledFunction other = g;
    other.values.setConstant(Complex(3.0, -1.0));
    const auto t = rb_apply(h0.system(), other);
    CHECK(t.values == g.values);

    const auto h = make_fractal_poly(3, {0.25, -0.5, 0.75}, 1e-8);
    const auto tg = rb_apply(h.system(), seed_on_grid(h.system(), 64));
    for (int m = 0; m <= 3; ++m) CHECK(std::abs(tg.values[64 * m] - bspline(3, static_cast<double>(m))) < 1e-15);

    SampledFunction g1 = closed_grid(h.system(), 64);
    SampledFunction g2 = g1;
    const auto r1 = oracle::uniform(21, static_cast<std::size_t>(g1.size()), -1.0, 1.0);
    const auto r2 = oracle::uniform(22, static_cast<std::size_t>(g1.size()), -1.0, 1.0);
    for (Eigen::Index i = 0; i < g1.size(); ++i) {
      g1.values[i] = r1[static_cast<std::size_t>(i)];
      g2.values[i] = r2[static_cast<std::size_t>(i)];
    }
    const double before = (g1.values - g2.values).cwiseAbs().maxCoeff();
    const double after = (rb_apply(h.system(), g1).values - rb_apply(h.system(), g2).values).cwiseAbs().maxCoeff();
    CHECK(after <= 0.75 * before + 1e-15);

    SampledFunction bad = g1;
    bad.x = Eigen::VectorXd::LinSpaced(bad.size(), 0.0, 3.1);
    CHECK_THROWS_AS(rb_apply(h.system(), bad), std::invalid_argument);
    CHECK_THROWS_AS(rb_apply(fig8(1e-8).system(), g1), std::invalid_argument);
  }

  TEST_CASE("grid iteration rates") {
    struct Case {
      FixedPointHandle handle;
      double alpha;
    };
    const Case cases[] = {
        {make_fractal_poly(2, {0.75, 0.75}, 1e-8), 0.75},
        {make_fractal_poly(3, {0.25, 0.25, 0.25}, 1e-8), 0.25},
        {make_fractal_exp(RateTuple({2, -2}), {0.25, 0.25}, 1e-8), 0.25},
        {make_fractal_exp(RateTuple({4, -3, 1}), {0.75, -0.25, 0.5}, 1e-8), 0.75},
    };
    for (const auto& c : cases) {
      const auto r = fixed_point_grid(c.handle.system(), 256, 1e-10);
      CHECK(r.observed_rate >= c.alpha - 0.1);
      CHECK(r.observed_rate <= c.alpha + 0.05);
      CHECK(r.increments.back() <= 1e-10 * (1 - c.alpha) / c.alpha);
    }
    CHECK_THROWS_AS(fixed_point_grid(cases[3].handle.system(), 256, 1e-10, 3), std::runtime_error);
  }

  TEST_CASE("pointwise evaluator") {
    const double tol = 1e-10;
    const auto b2 = make_fractal_poly(2, {0.75, 0.75}, tol);
    CHECK(std::abs(b2(1.0) - 1.0) <= tol);
    const auto b3 = make_fractal_poly(3, {0.25, 0.25, 0.25}, tol);
    for (int m = 0; m <= 3; ++m) CHECK(std::abs(b3(m) - bspline(3, static_cast<double>(m))) <= tol);
    const auto e2 = make_fractal_exp(RateTuple({2, -2}), {0.25, 0.25}, tol);
    const auto seed_e2 = exp_bspline(RateTuple({2, -2}));
    for (int m = 0; m <= 2; ++m) CHECK(std::abs(e2(m) - seed_e2(m)) <= tol);
    CHECK(b3(0.0) == Complex(0.0, 0.0));
    CHECK_THROWS_AS(b3(-0.1), std::domain_error);
    CHECK_THROWS_AS(b3(3.1), std::domain_error);

    const auto f8 = fig8(tol);
    CHECK(f8(0.0) == Complex(0.0, 0.0));
    CHECK(std::abs(f8(1.0) - bspline(ComplexOrder({3.14159, 1}), 1.0)) <= tol);
  }

  TEST_CASE("zero scaling reproduces the seed") {
    const double tol = 1e-10;
    const auto b = make_fractal_poly(3, {0, 0, 0}, tol);
    const auto e = make_fractal_exp(RateTuple({4, -3, 1}), {0, 0, 0}, tol);
    const auto c = make_fractal_complex_poly(ComplexOrder({3.14159, 1}), {0, 0}, unbounded2(), tol);
    const auto ce = make_fractal_complex_exp(ComplexOrder({std::numbers::sqrt2, 1}), 1.0, {0, 0}, unbounded2(), tol);
    for (double x : oracle::uniform(23, 100, 0.0, 3.0)) {
      CHECK(std::abs(b(x) - b.system().seed(x)) <= tol);
      CHECK(std::abs(e(x) - e.system().seed(x)) <= tol);
      CHECK(std::abs(c(3 * x) - c.system().seed(3 * x)) <= tol);
      CHECK(std::abs(ce(3 * x) - ce.system().seed(3 * x)) <= tol);
      CHECK(residual(b, {x}, tol) == 0.0);
    }
  }

  TEST_CASE("evaluator agrees with the grid fixed point") {
    const double tol = 1e-10;
    for (const auto& h : {make_fractal_poly(2, {0.75, 0.75}, tol),
                          make_fractal_exp(RateTuple({4, -3, 1}), {0.75, -0.25, 0.5}, tol)}) {
      const auto grid = fixed_point_grid(h.system(), 256, tol);
      const auto picks = oracle::uniform(24, 1000, 0.0, static_cast<double>(grid.values.size()));
      for (double p : picks) {
        const auto i = static_cast<Eigen::Index>(p);
        CHECK(std::abs(h(grid.values.x[i]) - grid.values.values[i]) <= 2 * tol);
      }
    }
  }

  TEST_CASE("residual on the unbounded example systems") {
    const double tol = 1e-8;
    const auto xs = uniform_points(kDefaultSeed, 200, 0.0, 10.0);
    CHECK(residual(fig8(tol), xs, tol) <= 3 * tol);
    CHECK(residual(fig9(tol), xs, tol) <= 3 * tol);
  }

  TEST_CASE("unbounded fixed points vanish at zero and decay") {
    const auto h = fig8(1e-10);
    CHECK(h(0.0) == Complex(0.0, 0.0));
    const double a10 = std::abs(h(10.0));
    const double a20 = std::abs(h(20.0));
    const double a40 = std::abs(h(40.0));
    CHECK(a10 > a20);
    CHECK(a20 > a40);
    CHECK(a10 <= h.bound());
  }

  TEST_CASE("join-up at the interior knots") {
    const auto h = make_fractal_poly(3, {0.25, 0.25, 0.25}, 1e-8);
    const auto report = check_joinup(h.system(), seed_on_grid(h.system(), 256), 1);
    CHECK(report.entries.size() == 4);
    CHECK(report.max_mismatch(0) <= 1e-14);
    CHECK(report.max_mismatch(1) <= 1e-8);

    const auto e = make_fractal_exp(RateTuple({2, -2}), {0.25, 0.25}, 1e-8);
    CHECK(check_joinup(e.system(), seed_on_grid(e.system(), 256), 0).max_mismatch() <= 1e-14);

    // A generic g (not vanishing at the ends) breaks continuity.
    SampledFunction ramp = closed_grid(h.system(), 256);
    ramp.values = ramp.x.cast<Complex>();
    CHECK(check_joinup(h.system(), ramp, 0).max_mismatch() > 0.1);
  }

  TEST_CASE("derivative growth outside the smoothness regime") {
    const auto safe = derivative_growth(make_fractal_poly(3, {0.25, 0.25, 0.25}, 1e-8).system(), 256, 8);
    const auto wild = derivative_growth(make_fractal_poly(3, {0.9, 0.9, 0.9}, 1e-8).system(), 256, 8);
    CHECK(safe.size() == 9);
    CHECK(safe.back() / safe.front() < 3.0);
    CHECK(wild.back() / wild.front() > 10.0);
  }

  TEST_CASE("smoothness flag") {
    CHECK_THROWS_AS(make_fractal_poly(3, {0.5, 0.5, 0.5}, 1e-8, true), std::invalid_argument);
    CHECK_NOTHROW(make_fractal_poly(3, {0.25, 0.25, 0.25}, 1e-8, true));
    CHECK_NOTHROW(make_fractal_poly(3, {0.5, 0.5, 0.5}, 1e-8, false));
  }
}
