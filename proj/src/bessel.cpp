#include "circext/bessel.hpp"

#include <cmath>
#include <cstdlib>

#include "circext/errors.hpp"

namespace circext::spectrum {

namespace {

constexpr int kMaxOrder = 256;
constexpr double kMaxArg = 1e6;
constexpr long kMaxRecurrence = 2'000'000;
constexpr double kRescale = 1e200;

void check(int nmax, double r) {
  if (nmax < 0 || nmax > kMaxOrder) throw DomainError("bessel_j: |n| must not exceed 256");
  if (std::isnan(r) || r < 0.0 || r > kMaxArg) throw DomainError("bessel_j: r must lie in [0, 1e6]");
}

}  // namespace

std::vector<double> bessel_j_all(int nmax, double r) {
  check(nmax, r);
  std::vector<double> out(nmax + 1, 0.0);
  if (r == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (r < 1e-8) {
    // two terms of the power series suffice
    double lead = 1.0;
    for (int n = 0; n <= nmax; ++n) {
      out[n] = lead * (1.0 - r * r / (4.0 * (n + 1)));
      lead *= r / (2.0 * (n + 1));
    }
    return out;
  }
  // Start well above both nmax and the turning point n = r; beyond it J_n
  // decays like an Airy tail of width r^(1/3).
  const double top = std::max<double>(nmax, r) + 12.0 * std::cbrt(std::max(r, 1.0)) + 40.0;
  long start = static_cast<long>(top);
  start += start % 2;
  if (start > kMaxRecurrence)
    throw PrecisionError("bessel_j: recurrence length exceeds limit", 0.0, INFINITY);

  double next = 0.0, cur = 1e-30, norm = 0.0;
  for (long m = start; m >= 1; --m) {
    const double prev = (2.0 * m / r) * cur - next;
    next = cur;
    cur = prev;  // now J_{m-1} up to scale
    const long idx = m - 1;
    if (idx <= nmax) out[idx] = cur;
    if (idx > 0 && idx % 2 == 0) norm += 2.0 * cur;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      next /= kRescale;
      norm /= kRescale;
      for (long j = idx; j <= nmax; ++j) out[j] /= kRescale;
    }
  }
  norm += cur;
  for (auto& v : out) v /= norm;
  return out;
}

double bessel_j(int n, double r) {
  const int an = std::abs(n);
  check(an, r);
  const double v = bessel_j_all(an, r)[an];
  return (n < 0 && an % 2 == 1) ? -v : v;
}

}  // namespace circext::spectrum
