#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "circext/errors.hpp"
#include "circext/geometry.hpp"
#include "doctest.h"

using namespace circext;
using namespace circext::geometry;

namespace {

constexpr double kPi = std::numbers::pi;

AngleTriple random_in_h(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const double a = u(rng), b = u(rng);
  return {{a, b, -a - b}};
}

Rational q(long n, long d = 1) { return Rational(n) / d; }

}  // namespace

TEST_CASE("a_of values and symmetries") {
  CHECK(a_of({{0, 0, 0}}) == 9.0);
  CHECK(a_of(centers()[3].c) == doctest::Approx(1.0).epsilon(1e-14));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    AngleTriple t{{u(rng), u(rng), u(rng)}};
    const double a = a_of(t);
    CHECK(a >= -1e-12);
    CHECK(a <= 9 + 1e-12);
    const double sh = u(rng);
    CHECK(std::abs(a_of(t + AngleTriple{{sh, sh, sh}}) - a) < 1e-12);
    int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& p : perm) CHECK(std::abs(a_of({{t[p[0]], t[p[1]], t[p[2]]}}) - a) < 1e-12);
    std::complex<double> w = std::polar(1.0, t[0]) + std::polar(1.0, t[1]) + std::polar(1.0, t[2]);
    CHECK(std::abs(std::norm(w) - a) < 1e-12);
    CHECK(std::abs(a_minus_one(t) - (a - 1.0)) < 1e-12);
  }
  for (int i = 0; i < 200; ++i) {
    const auto t = random_in_h(rng, 1.0);
    if (t.norm() < kPi / 6) CHECK(a_of(t) >= 6.0);
  }
}

TEST_CASE("embed") {
  const auto z = embed({0.0, 1.3});
  CHECK(z.norm() == 0.0);
  const auto e = embed({std::sqrt(2.0), 0.0});
  CHECK(e[0] == doctest::Approx(1.0));
  CHECK(e[1] == doctest::Approx(-1.0));
  CHECK(std::abs(e[2]) < 1e-15);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> us(0, 2), ua(0, 2 * kPi);
  for (int i = 0; i < 500; ++i) {
    const double s = us(rng), al = ua(rng);
    const auto t = embed({s, al});
    CHECK(std::abs(t.sum()) < 1e-14);
    CHECK(t.norm() == doctest::Approx(s).epsilon(1e-13));
    CHECK(std::abs((t[0] - t[1]) - std::sqrt(2.0) * s * std::cos(al)) < 1e-13);
  }
}

TEST_CASE("centers and lattice") {
  const auto c = centers();
  CHECK(c[0].c.norm() == 0.0);
  for (int j = 1; j < 4; ++j) {
    CHECK(std::abs(c[j].c.sum()) < 1e-15);
    CHECK(a_of(c[j].c) == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto [v1, v2] = lattice_basis();
  const auto zero = v1 + v2 + AngleTriple{{-kPi / 3, -kPi / 3, 2 * kPi / 3}};
  CHECK(zero.norm() < 1e-15);
  CHECK(v1.norm() == doctest::Approx(kPi * std::sqrt(2.0 / 3.0)));
  CHECK(v2.norm() == doctest::Approx(kPi * std::sqrt(2.0 / 3.0)));
  // c2 - c3 is itself v1 - v2
  CHECK(((c[1].c - c[2].c) - (v1 - v2)).norm() < 1e-14);
}

TEST_CASE("reduce_mod_lattice") {
  const auto [v1, v2] = lattice_basis();
  CHECK(reduce_mod_lattice(v1).norm() < 1e-14);
  const AngleTriple small{{0.01, -0.01, 0.0}};
  CHECK((reduce_mod_lattice(small) - small).norm() < 1e-15);
  CHECK(reduce_mod_lattice(v1 + v2 * 0.01).norm() < v1.norm());
  CHECK_THROWS_AS(reduce_mod_lattice({{1.0, 0.0, 0.0}}), DomainError);

  const auto half = reduce_mod_lattice(v1 * 0.5);
  CHECK(half.norm() == doctest::Approx(0.5 * v1.norm()));

  // brute force over nearby translates
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto t = random_in_h(rng, 3.0);
    const auto r = reduce_mod_lattice(t);
    double best = 1e300;
    for (int m = -8; m <= 8; ++m)
      for (int n = -8; n <= 8; ++n) best = std::min(best, (t - v1 * m - v2 * n).norm());
    CHECK(r.norm() == doctest::Approx(best).epsilon(1e-12));
    CHECK(std::abs(r.sum()) < 1e-12);
  }
}

TEST_CASE("fundamental prism tiles the torus") {
  CHECK(in_fundamental_prism({{0, 0, 0}}));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  for (int i = 0; i < 100000; ++i) {
    const AngleTriple t{{u(rng), u(rng), u(rng)}};
    int hits = 0;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c)
          hits += in_fundamental_prism(t + AngleTriple{{2 * kPi * a, 2 * kPi * b, 2 * kPi * c}});
    REQUIRE(hits == 1);
  }
}

TEST_CASE("fundamental prism volume") {
  // The prism lies in [-pi, 3pi)^3; sample that box.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-kPi, 3 * kPi);
  const int n = 400000;
  int in = 0;
  for (int i = 0; i < n; ++i) in += in_fundamental_prism({{u(rng), u(rng), u(rng)}});
  const double vol = std::pow(4 * kPi, 3) * in / n;
  CHECK(vol == doctest::Approx(std::pow(2 * kPi, 3)).epsilon(0.01));
}

TEST_CASE("P and Q polynomials") {
  CHECK(poly_p(1) == EvenPolynomial(2, {q(2), q(0), q(-6)}));
  CHECK(poly_p(2) == EvenPolynomial(4, {q(7), q(0), q(-18), q(0), q(-9)}));
  CHECK(poly_p(3) == EvenPolynomial(6, {q(31, 2), q(0), q(-45, 2), q(0), q(-135, 2), q(0), q(-27, 2)}));
  CHECK(poly_q(1) == EvenPolynomial(0, {q(2)}));
  CHECK(poly_q(2) == EvenPolynomial(2, {q(-7), q(0), q(-3)}));
  CHECK(poly_q(3) == EvenPolynomial(4, {q(31, 2), q(0), q(24), q(0), q(9, 2)}));
  CHECK(poly_p(2).to_string() == "-9*X^4 - 18*X^2*Y^2 + 7*Y^4");
  CHECK_THROWS_AS(poly_p(0), DomainError);

  for (int k = 1; k <= 12; ++k) {
    const auto p = poly_p(k);
    const auto qq = poly_q(k);
    const auto back = qq * weight_polynomial();
    CHECK(back == (k % 2 ? p * Rational(-1) : p));
    for (double al : {kPi / 6, -kPi / 6})
      CHECK(std::abs(p.evaluate(std::sin(al), std::cos(al))) < 1e-12 * std::pow(4.0, k));
    // against the trigonometric definition
    for (double al : {0.3, 1.7, 4.0}) {
      const double direct =
          std::pow(2.0, k + 1) * (std::pow(std::cos(al), 2 * k) -
                                  std::pow(std::cos(al + 2 * kPi / 3), 2 * k) -
                                  std::pow(std::cos(al - 2 * kPi / 3), 2 * k));
      CHECK(p.evaluate(std::sin(al), std::cos(al)) ==
            doctest::Approx(direct).epsilon(1e-12).scale(std::pow(2.0, k + 1)));
    }
  }
  CHECK_THROWS_AS(poly_p(3).divide_exact(EvenPolynomial(2, {q(1), q(0), q(1)})), ConsistencyError);
}

TEST_CASE("weight factor") {
  CHECK(std::abs(weight_factor(kPi / 6)) < 1e-15);
  CHECK(weight_factor(kPi / 2) == doctest::Approx(3.0));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  for (int i = 0; i < 100; ++i) {
    const double al = u(rng);
    double s = 0;
    for (int j = 1; j <= 3; ++j) s += weight_factor(al + 2 * kPi * j / 3);
    CHECK(s == doctest::Approx(3.0).epsilon(1e-13));
  }
}

TEST_CASE("weight identities around c4") {
  const auto c = centers();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> us(0, 0.3), ua(0, 2 * kPi);
  for (int i = 0; i < 300; ++i) {
    const auto t = random_in_h(rng, 2.0);
    const double lhs = a_of(c[3].c + t) - 1.0;
    const double rhs = 2 + 2 * std::cos(t[0] - t[1]) - 2 * std::cos(t[0] - t[2]) -
                       2 * std::cos(t[1] - t[2]);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    const double s = us(rng), al = ua(rng);
    CHECK(std::abs(a_of(c[1].c + embed({s, al})) - a_of(c[3].c + embed({s, al + 4 * kPi / 3}))) < 1e-12);
    CHECK(std::abs(a_of(c[2].c + embed({s, al})) - a_of(c[3].c + embed({s, al + 2 * kPi / 3}))) < 1e-12);
  }
}

TEST_CASE("psi series") {
  CHECK(psi(0.0, 1.0).value == 0.0);
  CHECK(psi(0.0, 1.0).truncation_bound == 0.0);
  CHECK(psi_prime(0.0, 1.0).value == 0.0);
  CHECK_THROWS_AS(psi(0.6, 0.0), DomainError);
  CHECK_THROWS_AS(psi_prime(0.6, 0.0), DomainError);
  CHECK(psi(0.05, 0.0).truncation_bound < 1e-18);

  const auto c4 = centers()[3].c;
  for (int i = 0; i < 64; ++i) {
    const double al = 2 * kPi * i / 64;
    const double w = weight_factor(al);
    if (std::abs(w) > 0.1) {
      const double s = 0.03;
      const double direct = a_minus_one(c4 + embed({s, al})) / (s * s * w);
      CHECK(std::abs(1.0 + psi(s, al).value - direct) < 1e-10);
    }
    for (int j = 1; j <= 50; ++j) {
      const double s = j / 1000.0;
      const double bound = 7.0 / 24 * s * s + 17.0 / 720 * std::pow(s, 4) +
                           std::pow(s, 6) * std::exp(std::sqrt(2.0) * s);
      CHECK(std::abs(psi(s, al).value) <= bound);
      const double dbound = 14.0 / 24 * s + 17.0 / 180 * std::pow(s, 3) +
                            2 * std::pow(s, 5) * std::exp(std::sqrt(2.0) * s);
      CHECK(std::abs(psi_prime(s, al).value) <= dbound);
    }
  }
  const double h = 1e-6;
  const double fd = (psi(0.03 + h, 1.0).value - psi(0.03 - h, 1.0).value) / (2 * h);
  CHECK(std::abs(fd - psi_prime(0.03, 1.0).value) < 1e-7);
  // leading behaviour along alpha = 0
  CHECK(psi(1e-3, 0.0).value == doctest::Approx(-7.0 / 24 * 1e-6).epsilon(1e-5));
}

TEST_CASE("h ratio") {
  CHECK(h_ratio(0.02, 0.02, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  const auto c4 = centers()[3].c;
  const double direct = (1 - a_of(c4 + embed({0.03, 2.0}))) / (1 - a_of(c4 + embed({0.02, 1.0})));
  CHECK(std::abs(h_ratio(0.02, 0.03, 1.0, 2.0) - direct) < 1e-9);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> us(1e-3, 0.05), ua(0, 2 * kPi);
  for (int i = 0; i < 200; ++i) {
    const double s = us(rng), t = us(rng), a = ua(rng), b = ua(rng);
    if (std::abs(weight_factor(a)) < 1e-3 || std::abs(weight_factor(b)) < 1e-3) continue;
    CHECK(h_ratio(s, t, a, b) * h_ratio(t, s, b, a) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(h_ratio(0.02, 0.03, kPi / 6, 1.0), DomainError);
}
