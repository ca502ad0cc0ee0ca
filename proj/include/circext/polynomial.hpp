#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace circext::geometry {

using Rational = boost::multiprecision::cpp_rational;

/// Homogeneous bivariate polynomial sum_j c_j X^j Y^(degree - j) with exact
/// rational coefficients. Immutable once built.
class EvenPolynomial {
 public:
  EvenPolynomial() = default;
  EvenPolynomial(int degree, std::vector<Rational> coeffs);

  int degree() const { return degree_; }
  /// Coefficient of X^j Y^(degree - j).
  const Rational& coeff(int j) const { return coeffs_.at(j); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  double evaluate(double x, double y) const;

  EvenPolynomial operator*(const EvenPolynomial& other) const;
  EvenPolynomial operator*(const Rational& scalar) const;
  bool operator==(const EvenPolynomial& other) const = default;

  /// Exact division by `divisor`. Throws ConsistencyError on a nonzero remainder.
  EvenPolynomial divide_exact(const EvenPolynomial& divisor) const;

  /// Human-readable form such as "-3*X^2 + Y^2".
  std::string to_string() const;

 private:
  int degree_ = 0;
  std::vector<Rational> coeffs_{Rational(0)};
};

/// The factor 3X^2 - Y^2 that divides every P_2k.
EvenPolynomial weight_polynomial();

}  // namespace circext::geometry
