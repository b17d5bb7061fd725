#pragma once

#include <gmpxx.h>

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace twp::sym {

using Rational = mpq_class;

// Contribution of one coordinate to a monomial. Real coordinates carry an integer
// power. Angle coordinates carry a Fourier mode: m > 0 is cos(2*pi*m*x),
// m < 0 is sin(2*pi*|m|*x), 0 is the constant 1.
struct Factor {
  int var = 0;
  int power = 0;
  int mode = 0;
  auto operator<=>(const Factor&) const = default;
};

// Product of a power of the constant 2*pi and coordinate factors sorted by var.
struct Monomial {
  int twopi = 0;
  std::vector<Factor> factors;

  bool is_one() const { return twopi == 0 && factors.empty(); }
  bool has_trig() const;
  int power_of(int var) const;
  auto operator<=>(const Monomial&) const = default;
};

// Finite sum of rational multiples of monomials. Products of trigonometric
// factors are reduced to the Fourier basis, so the representation is canonical.
class Poly {
 public:
  using Terms = std::map<Monomial, Rational>;

  Poly() = default;
  explicit Poly(const Rational& c);
  static Poly from_monomial(Monomial m, const Rational& c);
  static Poly variable(int var, int power = 1);
  static Poly trig(int var, int mode);
  static Poly two_pi(int power = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<Rational> constant_value() const;
  bool depends_on(int var) const;
  std::set<int> variables() const;
  std::size_t size() const { return terms_.size(); }

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Rational& c) const;
  Poly pow(unsigned n) const;
  Poly derivative(int var) const;

  double evaluate(std::span<const double> x) const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const Poly& a, const Poly& b);

  void add_term(const Monomial& m, const Rational& c);

 private:
  Terms terms_;
};

// All terms of the product of two monomials.
std::vector<std::pair<Monomial, Rational>> multiply(const Monomial& a, const Monomial& b);

// Exact quotient n / d when d divides n in the ring generated by the real
// coordinates over trig polynomials. Returns nullopt when not divisible or when
// the leading real term of d has a non-unit coefficient.
std::optional<Poly> exact_divide(const Poly& n, const Poly& d);

}  // namespace twp::sym
