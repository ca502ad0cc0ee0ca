#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace circext {

enum class Spacing { uniform, log };

/// One axis of a tensor grid. With include_hi = false the upper end is open,
/// which suits periodic variables such as angles in [0, 2pi).
struct Axis {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  int points = 2;
  Spacing spacing = Spacing::uniform;
  bool include_hi = true;

  /// Throws DomainError on points < 2, lo > hi, or log spacing with lo <= 0.
  void validate() const;
  std::vector<double> values() const;
};

struct GridSpec {
  std::vector<Axis> axes;

  void validate() const;
  std::size_t size() const;
  const Axis& axis(const std::string& name) const;
};

Axis uniform_axis(std::string name, double lo, double hi, int points, bool include_hi = true);
Axis log_axis(std::string name, double lo, double hi, int points);

}  // namespace circext
