#include "circext/polynomial.hpp"

#include <cmath>
#include <sstream>

#include "circext/errors.hpp"

namespace circext::geometry {

EvenPolynomial::EvenPolynomial(int degree, std::vector<Rational> coeffs)
    : degree_(degree), coeffs_(std::move(coeffs)) {
  if (degree_ < 0 || static_cast<int>(coeffs_.size()) != degree_ + 1)
    throw DomainError("EvenPolynomial: need degree + 1 coefficients");
}

double EvenPolynomial::evaluate(double x, double y) const {
  // Horner in t = x / y is unstable near y = 0; expand directly instead.
  double acc = 0.0;
  for (int j = 0; j <= degree_; ++j) {
    if (coeffs_[j] == 0) continue;
    acc += static_cast<double>(coeffs_[j]) * std::pow(x, j) * std::pow(y, degree_ - j);
  }
  return acc;
}

EvenPolynomial EvenPolynomial::operator*(const EvenPolynomial& other) const {
  std::vector<Rational> out(degree_ + other.degree_ + 1, Rational(0));
  for (int i = 0; i <= degree_; ++i)
    for (int j = 0; j <= other.degree_; ++j) out[i + j] += coeffs_[i] * other.coeffs_[j];
  return {degree_ + other.degree_, std::move(out)};
}

EvenPolynomial EvenPolynomial::operator*(const Rational& scalar) const {
  auto out = coeffs_;
  for (auto& c : out) c *= scalar;
  return {degree_, std::move(out)};
}

EvenPolynomial EvenPolynomial::divide_exact(const EvenPolynomial& divisor) const {
  const int dd = divisor.degree_;
  if (dd > degree_) throw ConsistencyError("divide_exact: divisor degree too large");
  // Lowest X-power coefficient of the divisor must be nonzero; the quotient is
  // then determined column by column in increasing powers of X.
  const Rational& lead = divisor.coeffs_[0];
  if (lead == 0) throw ConsistencyError("divide_exact: divisor has zero Y^d coefficient");
  const int qd = degree_ - dd;
  std::vector<Rational> q(qd + 1, Rational(0));
  std::vector<Rational> rem = coeffs_;
  for (int j = 0; j <= qd; ++j) {
    q[j] = rem[j] / lead;
    for (int i = 0; i <= dd; ++i) rem[j + i] -= q[j] * divisor.coeffs_[i];
  }
  for (const auto& r : rem)
    if (r != 0) throw ConsistencyError("divide_exact: nonzero remainder");
  return {qd, std::move(q)};
}

std::string EvenPolynomial::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int j = degree_; j >= 0; --j) {
    const Rational& c = coeffs_[j];
    if (c == 0) continue;
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const int yp = degree_ - j;
    const bool constant = (j == 0 && yp == 0);
    if (mag != 1 || constant) {
      os << mag;
      if (!constant) os << "*";
    }
    if (j > 0) os << "X" << (j > 1 ? "^" + std::to_string(j) : "");
    if (j > 0 && yp > 0) os << "*";
    if (yp > 0) os << "Y" << (yp > 1 ? "^" + std::to_string(yp) : "");
  }
  if (first) os << "0";
  return os.str();
}

EvenPolynomial weight_polynomial() {
  return {2, {Rational(-1), Rational(0), Rational(3)}};
}

}  // namespace circext::geometry
