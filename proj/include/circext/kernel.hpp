#pragma once

#include <string_view>

namespace circext::kernel {

// The radial density rho of the triple convolution sigma*sigma*sigma of arc
// length on the unit circle: sigma*sigma*sigma(x) = rho(|x|). Supported on
// [0, 3], log-singular at r = 1, normalised so that 2*pi * int rho(r) r dr
// equals (2*pi)^3.

enum class Method { quadrature, elliptic, asymptotic };

std::string_view method_name(Method m);

struct KernelEstimate {
  double value = 0.0;
  Method method = Method::elliptic;
  double error_bound = 0.0;  ///< guaranteed absolute error; +inf if unknown
};

/// Complete elliptic integral of the first kind K(k), by the AGM.
/// Throws DomainError outside [0, 1) and SingularityError at k = 1.
double elliptic_k(double modulus);

/// K expressed through the complementary modulus k' = sqrt(1 - k^2). Stays
/// accurate as k' -> 0, where forming k first would cancel.
double elliptic_k_complement(double kprime);

/// rho from its defining integral over u in [A(r), 1], with both inverse
/// square root endpoints removed by substitution. Refuses |r - 1| < 1e-4.
KernelEstimate rho_quadrature(double r);

/// rho from the closed form in terms of K. Valid for all r >= 0 except r = 1.
KernelEstimate rho_elliptic(double r);

/// Leading asymptotics -6 log|1 - r| + 12 log 2 with its proven error bound,
/// valid for 0 < |r - 1| <= 1/10.
KernelEstimate rho_asymptotic(double r);

/// Error bound of the asymptotic form at distance offset = |r - 1|.
double asymptotic_error_bound(double offset);

/// Dispatcher: the asymptotic form when its bound meets tol, otherwise the
/// elliptic form. Throws PrecisionError when neither reaches tol.
KernelEstimate rho(double r, double tol);

/// (x^2 - 1) * rho(x) for x = sqrt(1 + a_minus_one), the weighted kernel that
/// appears throughout the reduced quadratic form. Takes a - 1 rather than x so
/// that points with a close to 1 keep full relative accuracy in r - 1. The
/// product extends continuously by 0 at a = 1.
double weighted_rho(double a_minus_one);

}  // namespace circext::kernel
