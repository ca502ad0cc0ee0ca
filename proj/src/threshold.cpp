#include "circext/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "circext/certifier.hpp"
#include "circext/errors.hpp"
#include "circext/geometry.hpp"
#include "circext/parallel.hpp"

namespace circext::threshold {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEpsMin = 0.01;
constexpr double kEpsMax = 0.15;

void check_eps(double eps) {
  if (!(eps > 0.0) || eps > kEpsMax) throw DomainError("threshold: eps must lie in (0, 0.15]");
}

// Evaluates f on the grid and reduces with `pick` in index order.
template <class F, class Pick>
double reduce_ball(double eps, const BallGrid& grid, F&& f, Pick&& pick) {
  check_eps(eps);
  const auto spec = grid.for_eps(eps);
  const auto s = spec.axes[0].values();
  const auto al = spec.axes[1].values();
  std::vector<double> rows(s.size());
  parallel_for(s.size(), grid.jobs, [&](std::size_t i) {
    double best = f(s[i], al[0]);
    for (std::size_t j = 1; j < al.size(); ++j) best = pick(best, f(s[i], al[j]));
    rows[i] = best;
  });
  double best = rows[0];
  for (std::size_t i = 1; i < rows.size(); ++i) best = pick(best, rows[i]);
  return best;
}

}  // namespace

GridSpec BallGrid::for_eps(double eps) const {
  return {{log_axis("s", eps * s_lo_ratio, eps, s_points),
           uniform_axis("alpha", 0.0, 2 * kPi, alpha_points, false)}};
}

BallGrid BallGrid::refined(int factor) const {
  BallGrid g = *this;
  g.s_points = (s_points - 1) * factor + 1;
  g.alpha_points = alpha_points * factor;
  return g;
}

std::vector<double> ThresholdCurve::crossings() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < eps_values.size(); ++i) {
    const double d0 = lhs[i] - rhs[i];
    const double d1 = lhs[i + 1] - rhs[i + 1];
    if (d0 == 0.0) out.push_back(eps_values[i]);
    if ((d0 > 0.0 && d1 < 0.0) || (d0 < 0.0 && d1 > 0.0))
      out.push_back(eps_values[i] + (eps_values[i + 1] - eps_values[i]) * d0 / (d0 - d1));
  }
  if (!eps_values.empty() && lhs.back() == rhs.back()) out.push_back(eps_values.back());
  return out;
}

double lhs_inf(double eps, const BallGrid& grid) {
  return reduce_ball(
      eps, grid, [](double s, double a) { return certify::multiplier(s, a) / (s * s); },
      [](double x, double y) { return std::min(x, y); });
}

double rhs_sup(double eps, const BallGrid& grid) {
  const double sup = reduce_ball(
      eps, grid,
      [](double s, double a) {
        const double ps = geometry::psi(s, a).value;
        const double pp = geometry::psi_prime(s, a).value;
        return 1.0 / (2.0 + s * pp / (1.0 + ps));
      },
      [](double x, double y) { return std::max(x, y); });
  return 18.0 * kPi * sup;
}

ThresholdCurve scan(double eps_lo, double eps_hi, int n_points, const BallGrid& grid) {
  if (!(eps_lo > 0.0) || !(eps_lo < eps_hi) || eps_hi > kEpsMax)
    throw DomainError("scan: need 0 < eps_lo < eps_hi <= 0.15");
  if (n_points < 1) throw DomainError("scan: n_points must be positive");
  ThresholdCurve c;
  for (int i = 0; i < n_points; ++i) {
    const double e = n_points == 1 ? eps_lo : eps_lo + (eps_hi - eps_lo) * i / (n_points - 1);
    c.eps_values.push_back(e);
    c.lhs.push_back(lhs_inf(e, grid));
    c.rhs.push_back(rhs_sup(e, grid));
  }
  return c;
}

double max_epsilon(double tolerance, const BallGrid& grid) {
  if (!(tolerance >= 1e-4)) throw DomainError("max_epsilon: tolerance must be >= 1e-4");
  auto gap = [&](double e) { return lhs_inf(e, grid) - rhs_sup(e, grid); };
  double lo = kEpsMin, hi = kEpsMax;
  if (!(gap(lo) >= 0.0) || !(gap(hi) < 0.0))
    throw BracketError("max_epsilon: no sign change of lhs - rhs on [0.01, 0.15]");
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) >= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double eps_prime_of(double eps) {
  if (!(eps >= 0.0)) throw DomainError("eps_prime_of: eps must be nonnegative");
  return std::sqrt(3.0 / 8.0) * eps;
}

}  // namespace circext::threshold
