#include "circext/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "circext/errors.hpp"

namespace circext::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt6 = 2.449489742783178098197284;

Rational binomial(int n, int k) {
  Rational c(1);
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Lattice coordinates of theta in H: theta = m v1 + n v2.
std::pair<double, double> lattice_coords(const AngleTriple& t) {
  return {(t[0] - t[2]) / kPi, (t[1] - t[2]) / kPi};
}

// Double-precision copies of Q_2k, k = 1..kCacheMax, built once.
constexpr int kCacheMax = 40;

struct QTable {
  std::vector<std::vector<double>> coeffs;  // coeffs[k][j] for X^j Y^(2k-2-j)
};

const QTable& q_table() {
  static const QTable table = [] {
    QTable t;
    t.coeffs.resize(kCacheMax + 1);
    for (int k = 1; k <= kCacheMax; ++k) {
      const auto q = poly_q(k);
      for (const auto& c : q.coeffs()) t.coeffs[k].push_back(static_cast<double>(c));
    }
    return t;
  }();
  return table;
}

double q_value(int k, double x, double y) {
  // Homogeneous Horner in u = x^2, v = y^2 over the even coefficients.
  const auto& c = q_table().coeffs[k];
  const int top = k - 1;
  const double u = x * x, v = y * y;
  double acc = c[2 * top];
  double vp = 1.0;
  for (int m = top - 1; m >= 0; --m) {
    vp *= v;
    acc = acc * u + c[2 * m] * vp;
  }
  return acc;
}

const std::array<double, 2 * kCacheMax + 81>& factorials() {
  static const auto table = [] {
    std::array<double, 2 * kCacheMax + 81> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table;
}

// Bound on sum_{k > kmax} d^j/ds^j [s^(2k-2)] 30 k^2 2^k / (2k)!, j = 0 or 1.
double tail_bound(double s, int kmax, int derivative) {
  const auto& f = factorials();
  double tail = 0.0;
  for (int k = kmax + 1; k <= kmax + 40; ++k) {
    const double c = 30.0 * k * k * std::ldexp(1.0, k) / f[2 * k];
    const double term = derivative ? (2 * k - 2) * std::pow(s, 2 * k - 3) * c
                                   : std::pow(s, 2 * k - 2) * c;
    tail += term;
    if (term < 1e-30 * tail) break;
  }
  return tail;
}

void check_series_args(double s, int kmax) {
  if (std::isnan(s) || s < 0.0 || s > 0.5)
    throw DomainError("psi: valid only for 0 <= s <= 1/2");
  if (kmax < 2 || kmax > kCacheMax) throw DomainError("psi: kmax must lie in [2, 40]");
}

}  // namespace

double a_of(const AngleTriple& t) {
  return 3.0 + 2.0 * std::cos(t[0] - t[1]) + 2.0 * std::cos(t[1] - t[2]) +
         2.0 * std::cos(t[2] - t[0]);
}

double a_minus_one(const AngleTriple& t) {
  // Uses 1 + cos x + cos y + cos z = 4 cos(x/2) cos(y/2) cos(z/2) for x+y+z = 0.
  return 8.0 * std::cos(0.5 * (t[0] - t[1])) * std::cos(0.5 * (t[1] - t[2])) *
         std::cos(0.5 * (t[2] - t[0]));
}

AngleTriple embed(const PolarPlane& p) {
  const double u = p.s * std::cos(p.alpha) / kSqrt2;
  const double v = p.s * std::sin(p.alpha) / kSqrt6;
  return {{u + v, -u + v, -2.0 * v}};
}

std::array<Center, 4> centers() {
  return {{{1, {{0.0, 0.0, 0.0}}},
           {2, {{2 * kPi / 3, -kPi / 3, -kPi / 3}}},
           {3, {{-kPi / 3, 2 * kPi / 3, -kPi / 3}}},
           {4, {{-kPi / 3, -kPi / 3, 2 * kPi / 3}}}}};
}

std::array<AngleTriple, 2> lattice_basis() {
  return {{{{2 * kPi / 3, -kPi / 3, -kPi / 3}}, {{-kPi / 3, 2 * kPi / 3, -kPi / 3}}}};
}

AngleTriple reduce_mod_lattice(const AngleTriple& theta) {
  if (!(std::abs(theta.sum()) <= 1e-12))
    throw DomainError("reduce_mod_lattice: input must satisfy theta1 + theta2 + theta3 = 0");
  const auto [v1, v2] = lattice_basis();
  const auto [m, n] = lattice_coords(theta);
  const double m0 = std::round(m);
  const double n0 = std::round(n);
  AngleTriple best = theta;
  double best_norm = -1.0;
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      const AngleTriple cand = theta - v1 * (m0 + i) - v2 * (n0 + j);
      const double nn = cand.norm();
      if (best_norm < 0.0) {
        best = cand;
        best_norm = nn;
        continue;
      }
      const double slack = 1e-12 * std::max(1.0, best_norm);
      if (nn < best_norm - slack ||
          (nn <= best_norm + slack && cand.theta < best.theta)) {
        best = cand;
        best_norm = std::min(nn, best_norm);
      }
    }
  }
  return best;
}

bool in_fundamental_prism(const AngleTriple& theta) {
  const double t = theta.sum() / 3.0;
  if (!(t >= 0.0 && t < 2 * kPi)) return false;
  // Base point p = theta - t(1,1,1) in H; p - A = lambda1 (-2 v1) + lambda2 (2 v2).
  const AngleTriple rel{{theta[0] - t - kPi, theta[1] - t + kPi, theta[2] - t}};
  const auto [m, n] = lattice_coords(rel);
  const double l1 = -0.5 * m;
  const double l2 = 0.5 * n;
  return l1 >= 0.0 && l1 < 1.0 && l2 >= 0.0 && l2 < 1.0;
}

EvenPolynomial poly_p(int k) {
  if (k < 1) throw DomainError("poly_p: k must be >= 1");
  // 2^(k+1) [cos^2k(a) - cos^2k(a + 2pi/3) - cos^2k(a - 2pi/3)] with
  // cos(a +- 2pi/3) = -(Y +- sqrt3 X)/2; odd powers of sqrt3 X cancel.
  const int deg = 2 * k;
  std::vector<Rational> c(deg + 1, Rational(0));
  Rational pow4(1);
  for (int i = 0; i < k; ++i) pow4 *= 4;
  Rational scale(1);
  for (int i = 0; i <= k; ++i) scale *= 2;
  Rational pow3(1);
  for (int j = 0; j <= deg; j += 2) {
    c[j] = -scale * 2 * binomial(deg, j) * pow3 / pow4;
    pow3 *= 3;
  }
  c[0] += scale;
  return {deg, std::move(c)};
}

EvenPolynomial poly_q(int k) {
  auto p = poly_p(k);
  if (k % 2 == 1) p = p * Rational(-1);
  return p.divide_exact(weight_polynomial());
}

double weight_factor(double alpha) {
  const double sa = std::sin(alpha);
  const double ca = std::cos(alpha);
  return 3.0 * sa * sa - ca * ca;
}

SeriesValue psi(double s, double alpha, int kmax) {
  check_series_args(s, kmax);
  if (s == 0.0) return {0.0, 0.0};
  const auto& f = factorials();
  const double x = std::sin(alpha), y = std::cos(alpha);
  const double s2 = s * s;
  double value = 0.0, sp = 1.0;
  for (int k = 2; k <= kmax; ++k) {
    sp *= s2;
    value += sp * q_value(k, x, y) / f[2 * k];
  }
  return {value, tail_bound(s, kmax, 0)};
}

SeriesValue psi_prime(double s, double alpha, int kmax) {
  check_series_args(s, kmax);
  if (s == 0.0) return {0.0, 0.0};
  const auto& f = factorials();
  const double x = std::sin(alpha), y = std::cos(alpha);
  const double s2 = s * s;
  double value = 0.0, sp = s;
  for (int k = 2; k <= kmax; ++k) {
    value += (2 * k - 2) * sp * q_value(k, x, y) / f[2 * k];
    sp *= s2;
  }
  return {value, tail_bound(s, kmax, 1)};
}

double h_ratio(double s, double t, double alpha, double beta) {
  const double wa = weight_factor(alpha);
  if (std::abs(wa) <= 1e-12)
    throw DomainError("h_ratio: weight_factor(alpha) vanishes (degenerate direction)");
  if (!(s > 0.0) || !(t > 0.0)) throw DomainError("h_ratio: s and t must be positive");
  const double ps = psi(s, alpha).value;
  const double pt = psi(t, beta).value;
  return (t * t) / (s * s) * (weight_factor(beta) / wa) * ((1.0 + pt) / (1.0 + ps));
}

}  // namespace circext::geometry
