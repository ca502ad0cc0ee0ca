#pragma once

#include <vector>

#include "circext/grid.hpp"

namespace circext::threshold {

/// Resolution of the (s, alpha) grid over the eps-ball: s log-spaced on
/// [eps * s_lo_ratio, eps] (the boundary s = eps is always a node), alpha
/// uniform on [0, 2pi).
struct BallGrid {
  int s_points = 400;
  int alpha_points = 720;
  double s_lo_ratio = 0.01;
  int jobs = 0;

  GridSpec for_eps(double eps) const;
  BallGrid refined(int factor) const;
};

struct ThresholdCurve {
  std::vector<double> eps_values;
  std::vector<double> lhs;
  std::vector<double> rhs;

  /// eps values where lhs - rhs changes sign, by linear interpolation.
  std::vector<double> crossings() const;
};

/// inf over the eps-ball of m(theta)/|theta|^2 with m the multiplier of the
/// reduced form.
double lhs_inf(double eps, const BallGrid& grid = {});

/// 18 pi sup over the eps-ball of 1 / (2 + s psi'/(1 + psi)).
double rhs_sup(double eps, const BallGrid& grid = {});

ThresholdCurve scan(double eps_lo, double eps_hi, int n_points, const BallGrid& grid = {});

/// Largest eps in [0.01, 0.15] with lhs_inf >= rhs_sup, by bisection to
/// `tolerance`. Throws BracketError without a sign change.
double max_epsilon(double tolerance = 1e-4, const BallGrid& grid = {});

/// sqrt(3/8) eps.
double eps_prime_of(double eps);

}  // namespace circext::threshold
