#include <cmath>
#include <numbers>
#include <vector>

#include "circext/quadrature.hpp"
#include "doctest.h"

using namespace circext;

TEST_CASE("adaptive integration of smooth and endpoint-singular functions") {
  const auto r = quad::integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));

  // log singularity at 0: int_0^1 log x dx = -1
  const auto s = quad::integrate([](double x) { return std::log(x); }, 0.0, 1.0);
  CHECK(s.converged);
  CHECK(std::abs(s.value + 1.0) < 1e-9);
}

TEST_CASE("integrate_pieces honours breakpoints") {
  std::vector<double> pts{0.0, 0.5, 1.0};
  const auto r = quad::integrate_pieces([](double x) { return std::abs(x - 0.5); }, pts);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("Gauss-Legendre rule is exact to degree 2n-1") {
  const auto g = quad::gauss_legendre(10);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) sum += g.weights[i] * std::pow(g.nodes[i], 18);
  CHECK(sum == doctest::Approx(2.0 / 19.0).epsilon(1e-14));
}
