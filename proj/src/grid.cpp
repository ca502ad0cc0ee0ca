#include "circext/grid.hpp"

#include <cmath>

#include "circext/errors.hpp"

namespace circext {

void Axis::validate() const {
  if (points < 2) throw DomainError("grid axis '" + name + "': need at least 2 points");
  if (!(lo <= hi)) throw DomainError("grid axis '" + name + "': lo must not exceed hi");
  if (spacing == Spacing::log && !(lo > 0.0))
    throw DomainError("grid axis '" + name + "': log spacing needs a positive range");
}

std::vector<double> Axis::values() const {
  validate();
  std::vector<double> v(points);
  const int denom = include_hi ? points - 1 : points;
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / denom;
    if (spacing == Spacing::log)
      v[i] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
    else
      v[i] = lo + f * (hi - lo);
  }
  if (include_hi) v.back() = hi;
  v.front() = lo;
  return v;
}

void GridSpec::validate() const {
  for (const auto& a : axes) a.validate();
}

std::size_t GridSpec::size() const {
  std::size_t n = axes.empty() ? 0 : 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(a.points);
  return n;
}

const Axis& GridSpec::axis(const std::string& name) const {
  for (const auto& a : axes)
    if (a.name == name) return a;
  throw DomainError("grid has no axis named '" + name + "'");
}

Axis uniform_axis(std::string name, double lo, double hi, int points, bool include_hi) {
  Axis a{std::move(name), lo, hi, points, Spacing::uniform, include_hi};
  a.validate();
  return a;
}

Axis log_axis(std::string name, double lo, double hi, int points) {
  Axis a{std::move(name), lo, hi, points, Spacing::log, true};
  a.validate();
  return a;
}

}  // namespace circext
