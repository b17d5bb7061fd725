#include "twp/symcalc/scalar.hpp"

#include <cmath>

#include "twp/core/error.hpp"

namespace twp::sym {

namespace {

struct Split {
  Rational unit = 1;
  int twopi = 0;
  std::vector<std::pair<Poly, int>> atoms;
};

// Factor a nonzero polynomial as unit * (2 pi)^k * atoms, where atoms are
// coordinate monomials, single trig factors, or a primitive part with leading
// coefficient one.
Split split_divisor(const Poly& p) {
  Split s;
  const auto& terms = p.terms();
  if (terms.size() == 1) {
    const auto& [m, c] = *terms.begin();
    s.unit = c;
    s.twopi = m.twopi;
    for (const auto& f : m.factors) {
      if (f.power != 0) s.atoms.emplace_back(Poly::variable(f.var), f.power);
      if (f.mode != 0) s.atoms.emplace_back(Poly::trig(f.var, f.mode), 1);
    }
    return s;
  }
  // monomial content
  int min_twopi = terms.begin()->first.twopi;
  std::map<int, int> min_power;
  bool first = true;
  for (const auto& [m, c] : terms) {
    min_twopi = std::min(min_twopi, m.twopi);
    std::map<int, int> here;
    for (const auto& f : m.factors)
      if (f.power > 0) here[f.var] = f.power;
    if (first) {
      min_power = here;
      first = false;
    } else {
      for (auto it = min_power.begin(); it != min_power.end();) {
        auto h = here.find(it->first);
        if (h == here.end()) {
          it = min_power.erase(it);
        } else {
          it->second = std::min(it->second, h->second);
          ++it;
        }
      }
    }
  }
  Poly q;
  for (const auto& [m, c] : terms) {
    Monomial nm;
    nm.twopi = m.twopi - min_twopi;
    for (const auto& f : m.factors) {
      Factor nf = f;
      auto mp = min_power.find(f.var);
      if (mp != min_power.end()) nf.power -= mp->second;
      if (nf.power != 0 || nf.mode != 0) nm.factors.push_back(nf);
    }
    q.add_term(nm, c);
  }
  s.twopi = min_twopi;
  for (auto& [v, e] : min_power) s.atoms.emplace_back(Poly::variable(v), e);
  const Rational lead = q.terms().rbegin()->second;
  s.unit = lead;
  s.atoms.emplace_back(q.scaled(1 / lead), 1);
  return s;
}

Poly atom_power(const Poly& a, int e) { return e == 1 ? a : a.pow(static_cast<unsigned>(e)); }

}  // namespace

Scalar::Scalar(Poly num, Denominator den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

Scalar Scalar::cos(int var, int n) {
  if (n == 0) return Scalar(1);
  return Scalar(Poly::trig(var, std::abs(n)));
}

Scalar Scalar::sin(int var, int n) {
  if (n == 0) return Scalar(0);
  if (n < 0) return -Scalar(Poly::trig(var, n));
  return Scalar(Poly::trig(var, -n));
}

Scalar Scalar::pi() { return Scalar(Poly::two_pi(1).scaled(Rational(1, 2))); }

std::optional<Rational> Scalar::constant_value() const {
  if (!den_.empty()) return std::nullopt;
  return num_.constant_value();
}

bool Scalar::depends_on(int var) const {
  if (num_.depends_on(var)) return true;
  for (const auto& [a, e] : den_)
    if (a.depends_on(var)) return true;
  return false;
}

std::set<int> Scalar::variables() const {
  auto v = num_.variables();
  for (const auto& [a, e] : den_) {
    auto w = a.variables();
    v.insert(w.begin(), w.end());
  }
  return v;
}

std::size_t Scalar::complexity() const {
  std::size_t n = num_.size();
  for (const auto& [a, e] : den_) n += a.size() * static_cast<std::size_t>(e);
  return n;
}

void Scalar::reduce() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto it = den_.begin(); it != den_.end();) {
    while (it->second > 0) {
      auto q = exact_divide(num_, it->first);
      if (!q) break;
      num_ = std::move(*q);
      --it->second;
    }
    if (it->second == 0)
      it = den_.erase(it);
    else
      ++it;
  }
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.num_ = -r.num_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    reduce();
    return *this;
  }
  Denominator lcm = den_;
  for (const auto& [a, e] : o.den_) {
    auto& slot = lcm[a];
    slot = std::max(slot, e);
  }
  Poly na = num_, nb = o.num_;
  for (const auto& [a, e] : lcm) {
    auto ia = den_.find(a);
    const int ea = ia == den_.end() ? 0 : ia->second;
    if (e > ea) na = na * atom_power(a, e - ea);
    auto ib = o.den_.find(a);
    const int eb = ib == o.den_.end() ? 0 : ib->second;
    if (e > eb) nb = nb * atom_power(a, e - eb);
  }
  num_ = na + nb;
  den_ = std::move(lcm);
  reduce();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = Scalar();
  num_ = num_ * o.num_;
  for (const auto& [a, e] : o.den_) den_[a] += e;
  reduce();
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionByZero("division by a symbolically zero expression");
  Split s = split_divisor(num_);
  Poly n = Poly::two_pi(-s.twopi).scaled(1 / s.unit);
  for (const auto& [a, e] : den_) n = n * atom_power(a, e);
  Denominator d;
  for (auto& [a, e] : s.atoms) d[a] += e;
  return Scalar(std::move(n), std::move(d));
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  Scalar r;
  r.num_ = num_.pow(static_cast<unsigned>(n));
  for (const auto& [a, e] : den_) r.den_[a] = e * n;
  if (n == 0) r.den_.clear();
  r.reduce();
  return r;
}

Scalar Scalar::derivative(int var) const {
  if (!depends_on(var)) return Scalar();
  // d(n / prod q^m) = n' / D - sum m n q' / (q D)
  Scalar result(num_.derivative(var), den_);
  for (const auto& [a, e] : den_) {
    Poly da = a.derivative(var);
    if (da.is_zero()) continue;
    Denominator d = den_;
    d[a] += 1;
    result += Scalar((num_ * da).scaled(-e), std::move(d));
  }
  return result;
}

double Scalar::evaluate(std::span<const double> x) const {
  double v = num_.evaluate(x);
  for (const auto& [a, e] : den_) v /= std::pow(a.evaluate(x), e);
  return v;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.identical(b)) return true;
  return (a - b).is_zero();
}

}  // namespace twp::sym
