#include "circext/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "circext/errors.hpp"
#include "circext/quadrature.hpp"

namespace circext::kernel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;
constexpr double kEllipticRelErr = 64 * std::numeric_limits<double>::epsilon();
constexpr double kQuadratureCutoff = 1e-4;

double agm(double a, double b) {
  for (int i = 0; i < 64; ++i) {
    if (std::abs(a - b) < 1e-15 * a) break;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return 0.5 * (a + b);
}

// K(k') for k'^2 = |delta|^3 * ratio. For tiny offsets the cube underflows, and
// K = log(4/k') + O(k'^2 log k') is used in log form instead.
double k_of_offset(double delta, double ratio) {
  const double ad = std::abs(delta);
  if (ad < 1e-100) return 2.0 * kLog2 - 0.5 * (3.0 * std::log(ad) + std::log(ratio));
  return elliptic_k_complement(std::min(1.0, std::sqrt(ad * ad * ad * ratio)));
}

// rho at r, with delta = r - 1 supplied separately so callers that know the
// offset more accurately than r itself keep that accuracy.
double rho_closed_form(double r, double delta) {
  if (r > 3.0) return 0.0;
  if (delta < 0.0) {
    const double outer = (r + 1.0) * (r + 1.0) * (r + 1.0) * (3.0 - r);
    return 16.0 / std::sqrt(outer) * k_of_offset(delta, (r + 3.0) / outer);
  }
  return 4.0 / std::sqrt(r) * k_of_offset(delta, (r + 3.0) / (16.0 * r));
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::elliptic: return "elliptic";
    case Method::asymptotic: return "asymptotic";
  }
  return "unknown";
}

double elliptic_k_complement(double kprime) {
  if (!(kprime > 0.0) || kprime > 1.0)
    throw DomainError("elliptic_k_complement: k' must lie in (0, 1]");
  return kPi / (2.0 * agm(1.0, kprime));
}

double elliptic_k(double modulus) {
  if (std::isnan(modulus) || modulus < 0.0 || modulus > 1.0)
    throw DomainError("elliptic_k: modulus must lie in [0, 1)");
  if (modulus == 1.0)
    throw SingularityError("elliptic_k: K diverges at modulus 1");
  return elliptic_k_complement(std::sqrt((1.0 - modulus) * (1.0 + modulus)));
}

KernelEstimate rho_elliptic(double r) {
  if (std::isnan(r) || r < 0.0) throw DomainError("rho_elliptic: r must be >= 0");
  if (r == 1.0) throw SingularityError("rho_elliptic: rho is singular at r = 1");
  const double v = rho_closed_form(r, r - 1.0);
  return {v, Method::elliptic, kEllipticRelErr * v};
}

KernelEstimate rho_quadrature(double r) {
  if (std::isnan(r) || r <= 0.0)
    throw DomainError("rho_quadrature: r must be positive");
  if (r > 3.0) return {0.0, Method::quadrature, 0.0};
  if (std::abs(r - 1.0) < kQuadratureCutoff)
    throw SingularityError(
        "rho_quadrature: r within 1e-4 of 1; use the asymptotic or elliptic form");

  // Integrand 1/(sqrt(1-u^2) sqrt(p+1-u) sqrt(q+1+u)) on [lo, 1]. Both
  // endpoints carry an inverse square root; dl = u - lo and dr = 1 - u are
  // tracked directly so no distance is formed by cancellation.
  const double p = (1.0 - r) * (1.0 - r) / (2.0 * r);
  const double q = (3.0 + r) * (1.0 - r) / (2.0 * r);
  const bool inside = r < 1.0;
  const double lo = inside ? -1.0 : -1.0 - q;
  const double one_plus_lo = inside ? 0.0 : -q;  // 1 + lo, exact form
  const double half = 0.5 * (1.0 - lo);

  // Remaining smooth factor, given both endpoint distances.
  auto smooth = [&](double dl, double dr) {
    const double second = inside ? (q + dl) : (one_plus_lo + dl);
    return 1.0 / (std::sqrt(p + dr) * std::sqrt(second));
  };

  if (half == 0.0) {
    // r == 3: the interval collapses and the integral tends to pi * smooth.
    const double v = 4.0 / r * kPi * smooth(0.0, 0.0);
    return {v, Method::quadrature, kEllipticRelErr * v};
  }

  // u = lo + t^2 on the left half, u = 1 - t^2 on the right half.
  auto left = [&](double t) {
    const double dl = t * t;
    const double dr = 2.0 * half - dl;
    return 2.0 * smooth(dl, dr) / std::sqrt(dr);
  };
  auto right = [&](double t) {
    const double dr = t * t;
    const double dl = 2.0 * half - dr;
    return 2.0 * smooth(dl, dr) / std::sqrt(dl);
  };

  quad::Options opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-12;
  opt.max_intervals = 10000;
  const double tmax = std::sqrt(half);
  const auto a = quad::integrate(left, 0.0, tmax, opt);
  const auto b = quad::integrate(right, 0.0, tmax, opt);
  const double v = 4.0 / r * (a.value + b.value);
  const double err = 4.0 / r * (a.abs_error + b.abs_error) + kEllipticRelErr * v;
  if (!a.converged || !b.converged)
    throw PrecisionError("rho_quadrature: adaptive quadrature did not converge",
                         v, err);
  return {v, Method::quadrature, err};
}

double asymptotic_error_bound(double offset) {
  return -22.0 * offset * std::log(offset) + 23.0 * offset;
}

KernelEstimate rho_asymptotic(double r) {
  if (std::isnan(r)) throw DomainError("rho_asymptotic: r is NaN");
  const double offset = std::abs(r - 1.0);
  if (offset == 0.0) throw SingularityError("rho_asymptotic: rho is singular at r = 1");
  if (offset > 0.1 + 1e-14)
    throw DomainError("rho_asymptotic: valid only for |r - 1| <= 1/10");
  const double v = -6.0 * std::log(offset) + 12.0 * kLog2;
  return {v, Method::asymptotic, asymptotic_error_bound(offset)};
}

KernelEstimate rho(double r, double tol) {
  if (std::isnan(r) || r <= 0.0) throw DomainError("rho: r must be positive");
  if (!(tol > 0.0)) throw DomainError("rho: tol must be positive");
  if (r > 3.0) return {0.0, Method::elliptic, 0.0};
  if (r == 1.0) throw SingularityError("rho: rho is singular at r = 1");
  const double offset = std::abs(r - 1.0);
  if (offset <= 0.1 && asymptotic_error_bound(offset) <= tol) return rho_asymptotic(r);
  const auto e = rho_elliptic(r);
  if (e.error_bound <= tol) return e;
  throw PrecisionError("rho: requested tolerance " + std::to_string(tol) +
                           " not reachable at r = " + std::to_string(r),
                       e.value, e.error_bound);
}

double weighted_rho(double a_minus_one) {
  if (std::isnan(a_minus_one) || a_minus_one < -1.0)
    throw DomainError("weighted_rho: a must be nonnegative");
  if (a_minus_one == 0.0) return 0.0;
  const double x = std::sqrt(1.0 + a_minus_one);
  if (x > 3.0) return 0.0;
  const double delta = a_minus_one / (x + 1.0);
  return a_minus_one * rho_closed_form(x, delta);
}

}  // namespace circext::kernel
