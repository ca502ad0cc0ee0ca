#pragma once

#include <stdexcept>
#include <string>

namespace circext {

/// Argument outside the documented domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation requested exactly at (or too close to) a singular point.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A requested accuracy could not be reached. Carries the best estimate found.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, double best_estimate,
                 double best_error)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        best_error_(best_error) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double best_error() const noexcept { return best_error_; }

 private:
  double best_estimate_;
  double best_error_;
};

/// Internal invariant violated; indicates a bug rather than bad input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A root search was started on an interval without a sign change.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace circext
