#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>

#include "twp/symcalc/poly.hpp"

namespace twp::sym {

// Exact rational function: a polynomial numerator over a product of
// normalised atom polynomials raised to positive multiplicities.
// Zero testing is exact: an expression is zero iff its numerator is.
class Scalar {
 public:
  using Denominator = std::map<Poly, int>;

  Scalar() = default;
  Scalar(const Rational& c) : num_(c) {}  // NOLINT implicit
  Scalar(long c) : num_(Rational(c)) {}   // NOLINT implicit
  Scalar(int c) : num_(Rational(c)) {}    // NOLINT implicit
  explicit Scalar(Poly p) : num_(std::move(p)) {}
  Scalar(Poly num, Denominator den);

  static Scalar variable(int var) { return Scalar(Poly::variable(var)); }
  static Scalar cos(int var, int n);
  static Scalar sin(int var, int n);
  static Scalar pi();

  const Poly& numerator() const { return num_; }
  const Denominator& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  std::optional<Rational> constant_value() const;
  bool depends_on(int var) const;
  std::set<int> variables() const;
  std::size_t complexity() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar inverse() const;
  Scalar pow(int n) const;
  Scalar derivative(int var) const;

  double evaluate(std::span<const double> x) const;

  // Symbolic equality: the difference has zero numerator.
  friend bool operator==(const Scalar& a, const Scalar& b);
  // Structural identity of the stored representation.
  bool identical(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }

 private:
  void reduce();
  Poly num_;
  Denominator den_;
};

}  // namespace twp::sym
