#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "circext/polynomial.hpp"

namespace circext::geometry {

/// A point (theta1, theta2, theta3) on the 3-torus, in radians. Components are
/// read modulo 2*pi wherever periodicity matters.
struct AngleTriple {
  std::array<double, 3> theta{0.0, 0.0, 0.0};

  double operator[](int i) const { return theta[i]; }
  double& operator[](int i) { return theta[i]; }

  AngleTriple operator+(const AngleTriple& o) const {
    return {{theta[0] + o.theta[0], theta[1] + o.theta[1], theta[2] + o.theta[2]}};
  }
  AngleTriple operator-(const AngleTriple& o) const {
    return {{theta[0] - o.theta[0], theta[1] - o.theta[1], theta[2] - o.theta[2]}};
  }
  AngleTriple operator*(double c) const {
    return {{c * theta[0], c * theta[1], c * theta[2]}};
  }
  double sum() const { return theta[0] + theta[1] + theta[2]; }
  double norm() const {
    return std::sqrt(theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2]);
  }
};

/// Polar coordinates (s, alpha) on the plane H = {theta1 + theta2 + theta3 = 0}.
struct PolarPlane {
  double s = 0.0;
  double alpha = 0.0;
};

struct Center {
  int index = 1;  ///< 1..4
  AngleTriple c;
};

// ---- the weight a(theta) = |w1 + w2 + w3|^2 ----

/// 3 + 2cos(t1 - t2) + 2cos(t2 - t3) + 2cos(t3 - t1), in [0, 9].
double a_of(const AngleTriple& t);

/// a(theta) - 1 in the cancellation-free product form
/// 8 cos((t1-t2)/2) cos((t2-t3)/2) cos((t3-t1)/2).
double a_minus_one(const AngleTriple& t);

/// s cos(alpha) (1,-1,0)/sqrt2 + s sin(alpha) (1,1,-2)/sqrt6.
AngleTriple embed(const PolarPlane& p);

/// c1 = 0 and the three nonzero ball centres c2, c3, c4 (all in H).
std::array<Center, 4> centers();

/// Generators v1 = (2pi/3, -pi/3, -pi/3), v2 = (-pi/3, 2pi/3, -pi/3) of the
/// hexagonal lattice Lambda in H.
std::array<AngleTriple, 2> lattice_basis();

/// Norm-minimal representative of theta + Lambda; ties go to the
/// lexicographically smallest coordinates. Input must lie in H.
AngleTriple reduce_mod_lattice(const AngleTriple& theta_in_h);

/// Membership in the prism over the quadrilateral with vertices (pi,-pi,0),
/// (-pi/3,-pi/3,2pi/3), (-pi,pi,0), (pi/3,pi/3,-2pi/3), extruded along
/// (1,1,1) by t in [0, 2pi). Half-open in both base coordinates and height.
bool in_fundamental_prism(const AngleTriple& theta);

// ---- Taylor structure of a(c4 + theta) - 1 ----

/// P_2k with a(c4 + theta) - 1 = sum_k s^2k (-1)^k / (2k)! P_2k(sin a, cos a).
EvenPolynomial poly_p(int k);

/// Q_2k defined by Q_2k (3X^2 - Y^2) = (-1)^k P_2k.
EvenPolynomial poly_q(int k);

/// 3 sin^2(alpha) - cos^2(alpha).
double weight_factor(double alpha);

struct SeriesValue {
  double value = 0.0;
  double truncation_bound = 0.0;
};

inline constexpr int kDefaultPsiTerms = 8;

/// psi(s, alpha) = sum_{k=2}^{kmax} s^(2k-2) Q_2k(sin a, cos a) / (2k)!, with a
/// bound on the omitted tail from |Q_2k| <= 30 k^2 2^k. Requires s <= 1/2.
SeriesValue psi(double s, double alpha, int kmax = kDefaultPsiTerms);

/// d psi / ds, termwise, with the matching tail bound.
SeriesValue psi_prime(double s, double alpha, int kmax = kDefaultPsiTerms);

/// (1 - a(c4 + theta(t, beta))) / (1 - a(c4 + theta(s, alpha))) through the
/// factored form (t/s)^2 (w(beta)/w(alpha)) (1 + psi(t,beta)) / (1 + psi(s,alpha)).
double h_ratio(double s, double t, double alpha, double beta);

}  // namespace circext::geometry
