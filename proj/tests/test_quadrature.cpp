#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tcr/quadrature.hpp"

using namespace tcr;

TEST_CASE("gauss_legendre integrates polynomials of degree 2n - 1 exactly") {
  const auto& [xs, ws] = gauss_legendre(8);
  // x^15 over [-1, 1] is odd -> 0; x^14 -> 2/15.
  double odd = 0, even = 0, area = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    odd += ws[i] * std::pow(xs[i], 15);
    even += ws[i] * std::pow(xs[i], 14);
    area += ws[i];
  }
  CHECK(std::abs(odd) < 1e-15);
  CHECK(std::abs(even - 2.0 / 15.0) < 1e-15);
  CHECK(std::abs(area - 2.0) < 1e-14);
}

TEST_CASE("panel_integrate on a smooth integrand") {
  const double got = panel_integrate([](double x) { return std::exp(-x); }, 0.0, 3.0);
  CHECK(std::abs(got - (1.0 - std::exp(-3.0))) < 1e-14);
}

TEST_CASE("wynn_epsilon accelerates a geometric tail") {
  std::vector<double> sums;
  double s = 0;
  for (int n = 0; n < 12; ++n) {
    s += std::pow(0.7, n);
    sums.push_back(s);
  }
  CHECK(std::abs(wynn_epsilon(sums) - 1.0 / 0.3) < 1e-10);
}

TEST_CASE("oscillatory tail integral: sinc") {
  // int_0^inf sin(x)/x dx = pi/2.
  auto f = [](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; };
  const double got = osc_integral(f, 1.0, QuadratureControls{});
  CHECK(std::abs(got - kPiOsc / 2.0) < 1e-7);
}

TEST_CASE("oscillatory tail integral: damped cosine") {
  // int_0^inf cos(3x)/(1 + x^2) dx = (pi/2) e^{-3}, frozen from the closed
  // form.
  auto f = [](double x) { return std::cos(3.0 * x) / (1.0 + x * x); };
  const double got = osc_integral(f, 3.0, QuadratureControls{});
  CHECK(std::abs(got - 0.0782053441141270704) < 1e-9);
}

TEST_CASE("oscillatory integral refuses a truncated tail") {
  QuadratureControls q;
  q.u_max = 2.0;  // far too short for any extrapolation window
  auto f = [](double x) { return std::cos(x) / (1.0 + x); };
  CHECK_THROWS_AS(osc_integral(f, 1.0, q), QuadratureFailure);
}
