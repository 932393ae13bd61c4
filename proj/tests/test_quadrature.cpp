#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "splinegen/quadrature.hpp"
#include "splinegen/sampled.hpp"

using splinegen::Complex;

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre is exact to degree 2n-1") {
    for (int n : {1, 3, 5, 8}) {
      const auto rule = splinegen::gauss_legendre(n);
      CHECK(std::abs(rule.weights.sum() - 2.0) < 1e-14);
      const int degree = 2 * n - 1;
      const double exact = 1.0 / (degree + 1);  // int_0^1 x^d
      const double got = splinegen::integrate<double>(
          rule, [degree](double x) { return std::pow(x, degree); }, 0.0, 1.0);
      CHECK(std::abs(got - exact) < 1e-14);
    }
  }

  TEST_CASE("adaptive Simpson on smooth real and complex integrands") {
    auto r = splinegen::adaptive_simpson<double>([](double x) { return std::sin(x); }, 0.0,
                                                 std::numbers::pi, 1e-12);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) < 1e-12);
    auto c = splinegen::adaptive_simpson<Complex>(
        [](double x) { return std::polar(1.0, 3.0 * x); }, 0.0, 1.0, 1e-12);
    const Complex exact = (std::polar(1.0, 3.0) - 1.0) / Complex(0.0, 3.0);
    CHECK(std::abs(c.value - exact) < 1e-12);
  }

  TEST_CASE("depth limit is reported") {
    auto r = splinegen::adaptive_simpson<double>(
        [](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; }, 0.0, 1.0, 1e-14, 6);
    CHECK_FALSE(r.converged);
  }

  TEST_CASE("empty interval") {
    auto r = splinegen::adaptive_simpson<double>([](double) { return 1.0; }, 1.0, 1.0, 1e-10);
    CHECK(r.value == 0.0);
  }
}

TEST_SUITE("sampled") {
  TEST_CASE("grid parsing and sizes") {
    const auto g = splinegen::GridSpec::parse("0:2:0.5:0.25");
    CHECK(g.size() == 4);
    const auto nodes = g.nodes();
    CHECK(nodes[0] == 0.25);
    CHECK(nodes[3] == 1.75);
    CHECK(splinegen::GridSpec::parse("0:3:0.01").size() == 301);
    CHECK(splinegen::GridSpec::parse("0:1:1").size() == 2);
  }

  TEST_CASE("empty grid") {
    const splinegen::GridSpec g{0.0, 0.0, 1.0, 0.5};
    CHECK(g.size() == 0);
    CHECK(splinegen::sample([](double) { return Complex(1.0); }, g).empty());
  }

  TEST_CASE("invalid grids") {
    CHECK_THROWS_AS(splinegen::GridSpec::parse("0:1"), std::invalid_argument);
    CHECK_THROWS_AS(splinegen::GridSpec::parse("0:1:0"), std::invalid_argument);
    CHECK_THROWS_AS(splinegen::GridSpec::parse("1:0:0.1"), std::invalid_argument);
    CHECK_THROWS_AS(splinegen::GridSpec::parse("0:1:0.1:0.1"), std::invalid_argument);
    CHECK_THROWS_AS(splinegen::GridSpec::parse("0:x:0.1"), std::invalid_argument);
    CHECK_THROWS_AS(splinegen::GridSpec::parse("0:inf:0.1"), std::invalid_argument);
  }

  TEST_CASE("csv output") {
    splinegen::SampledFunction s;
    s.x = Eigen::VectorXd::LinSpaced(2, 0.0, 0.1);
    s.values.resize(2);
    s.values << Complex(-0.0, 1.0 / 3.0), Complex(2.0, -0.0);
    std::ostringstream out;
    splinegen::write_csv(out, s);
    CHECK(out.str() == "x,re,im\n0,0,0.33333333333333331\n0.10000000000000001,2,0\n");
  }

  TEST_CASE("17 digits round-trip") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) CHECK(std::stod(splinegen::format_double(v)) == v);
  }
}
