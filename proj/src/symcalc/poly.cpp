#include "twp/symcalc/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace twp::sym {

namespace {

struct ModeTerm {
  int mode;
  Rational coeff;
};

// cos/sin of 2*pi*n*x as a (mode, sign) pair; empty when the value is sin(0).
std::optional<ModeTerm> normalise(bool is_sin, int n, Rational c) {
  if (is_sin) {
    if (n == 0) return std::nullopt;
    if (n < 0) return ModeTerm{n, -c};
    return ModeTerm{-n, c};
  }
  return ModeTerm{std::abs(n), c};
}

// Product-to-sum for two modes of the same variable.
std::vector<ModeTerm> combine_modes(int m1, int m2) {
  if (m1 == 0) return {{m2, 1}};
  if (m2 == 0) return {{m1, 1}};
  const bool s1 = m1 < 0, s2 = m2 < 0;
  const int n1 = std::abs(m1), n2 = std::abs(m2);
  const Rational half(1, 2);
  std::vector<ModeTerm> out;
  auto push = [&](bool is_sin, int n, Rational c) {
    if (auto t = normalise(is_sin, n, c)) out.push_back(*t);
  };
  if (!s1 && !s2) {
    push(false, n1 - n2, half);
    push(false, n1 + n2, half);
  } else if (s1 && s2) {
    push(false, n1 - n2, half);
    push(false, n1 + n2, -half);
  } else if (s1) {
    push(true, n1 + n2, half);
    push(true, n1 - n2, half);
  } else {
    push(true, n1 + n2, half);
    push(true, n2 - n1, half);
  }
  // merge equal modes
  std::vector<ModeTerm> merged;
  for (auto& t : out) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const ModeTerm& m) { return m.mode == t.mode; });
    if (it == merged.end())
      merged.push_back(t);
    else
      it->coeff += t.coeff;
  }
  std::erase_if(merged, [](const ModeTerm& m) { return m.coeff == 0; });
  return merged;
}

using RealPart = std::vector<std::pair<int, int>>;

RealPart real_part(const Monomial& m) {
  RealPart r;
  for (const auto& f : m.factors)
    if (f.power != 0) r.emplace_back(f.var, f.power);
  return r;
}

int total_degree(const RealPart& r) {
  int d = 0;
  for (auto& [v, p] : r) d += p;
  return d;
}

// Graded lexicographic comparison of real exponent vectors.
int compare_real(const RealPart& a, const RealPart& b) {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db ? -1 : 1;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int va = i < a.size() ? a[i].first : INT32_MAX;
    int vb = j < b.size() ? b[j].first : INT32_MAX;
    int pa = 0, pb = 0;
    int v = std::min(va, vb);
    if (va == v) pa = a[i++].second;
    if (vb == v) pb = b[j++].second;
    if (pa != pb) return pa < pb ? -1 : 1;
  }
  return 0;
}

bool divides(const RealPart& d, const RealPart& n) {
  for (auto& [v, p] : d) {
    auto it = std::find_if(n.begin(), n.end(), [&](auto& e) { return e.first == v; });
    if (it == n.end() || it->second < p) return false;
  }
  return true;
}

Monomial strip_real(const Monomial& m) {
  Monomial r;
  r.twopi = m.twopi;
  for (const auto& f : m.factors)
    if (f.mode != 0) r.factors.push_back(Factor{f.var, 0, f.mode});
  return r;
}

Monomial real_quotient(const RealPart& n, const RealPart& d) {
  Monomial r;
  for (auto& [v, p] : n) {
    int q = p;
    for (auto& [dv, dp] : d)
      if (dv == v) q -= dp;
    if (q != 0) r.factors.push_back(Factor{v, q, 0});
  }
  return r;
}

}  // namespace

bool Monomial::has_trig() const {
  return std::any_of(factors.begin(), factors.end(), [](const Factor& f) { return f.mode != 0; });
}

int Monomial::power_of(int var) const {
  for (const auto& f : factors)
    if (f.var == var) return f.power;
  return 0;
}

std::vector<std::pair<Monomial, Rational>> multiply(const Monomial& a, const Monomial& b) {
  std::vector<std::pair<Monomial, Rational>> acc;
  Monomial base;
  base.twopi = a.twopi + b.twopi;
  acc.emplace_back(std::move(base), Rational(1));
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    Factor f;
    if (j >= b.factors.size() || (i < a.factors.size() && a.factors[i].var < b.factors[j].var)) {
      f = a.factors[i++];
      for (auto& [m, c] : acc) m.factors.push_back(f);
      continue;
    }
    if (i >= a.factors.size() || b.factors[j].var < a.factors[i].var) {
      f = b.factors[j++];
      for (auto& [m, c] : acc) m.factors.push_back(f);
      continue;
    }
    const Factor& fa = a.factors[i++];
    const Factor& fb = b.factors[j++];
    const int power = fa.power + fb.power;
    auto modes = combine_modes(fa.mode, fb.mode);
    std::vector<std::pair<Monomial, Rational>> next;
    next.reserve(acc.size() * modes.size());
    for (auto& [m, c] : acc) {
      for (auto& mt : modes) {
        Monomial nm = m;
        if (power != 0 || mt.mode != 0) nm.factors.push_back(Factor{fa.var, power, mt.mode});
        next.emplace_back(std::move(nm), c * mt.coeff);
      }
    }
    acc = std::move(next);
  }
  return acc;
}

Poly::Poly(const Rational& c) { add_term(Monomial{}, c); }

Poly Poly::from_monomial(Monomial m, const Rational& c) {
  Poly p;
  p.add_term(m, c);
  return p;
}

Poly Poly::variable(int var, int power) {
  Monomial m;
  if (power != 0) m.factors.push_back(Factor{var, power, 0});
  return from_monomial(std::move(m), 1);
}

Poly Poly::trig(int var, int mode) {
  Monomial m;
  if (mode != 0) m.factors.push_back(Factor{var, 0, mode});
  return from_monomial(std::move(m), 1);
}

Poly Poly::two_pi(int power) {
  Monomial m;
  m.twopi = power;
  return from_monomial(std::move(m), 1);
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) it->second.canonicalize();
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::optional<Rational> Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
  return std::nullopt;
}

bool Poly::depends_on(int var) const {
  for (const auto& [m, c] : terms_)
    for (const auto& f : m.factors)
      if (f.var == var) return true;
  return false;
}

std::set<int> Poly::variables() const {
  std::set<int> out;
  for (const auto& [m, c] : terms_)
    for (const auto& f : m.factors) out.insert(f.var);
  return out;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      const Rational cab = ca * cb;
      for (auto& [m, c] : multiply(ma, mb)) r.add_term(m, cab * c);
    }
  return r;
}

Poly Poly::scaled(const Rational& c) const {
  if (c == 0) return Poly();
  Poly r = *this;
  for (auto& [m, v] : r.terms_) v *= c;
  return r;
}

Poly Poly::pow(unsigned n) const {
  Poly result(1);
  Poly base = *this;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

Poly Poly::derivative(int var) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    auto it = std::find_if(m.factors.begin(), m.factors.end(), [&](const Factor& f) { return f.var == var; });
    if (it == m.factors.end()) continue;
    const Factor f = *it;
    // d/dx of x^p * trig(x) = p x^(p-1) trig + x^p trig'
    if (f.power != 0) {
      Monomial nm = m;
      auto& nf = nm.factors[static_cast<std::size_t>(it - m.factors.begin())];
      nf.power -= 1;
      if (nf.power == 0 && nf.mode == 0) nm.factors.erase(nm.factors.begin() + (it - m.factors.begin()));
      r.add_term(nm, c * f.power);
    }
    if (f.mode != 0) {
      Monomial nm = m;
      nm.twopi += 1;
      auto& nf = nm.factors[static_cast<std::size_t>(it - m.factors.begin())];
      if (f.mode > 0) {  // cos(2 pi n x)' = -2 pi n sin(2 pi n x)
        nf.mode = -f.mode;
        r.add_term(nm, -c * f.mode);
      } else {  // sin(2 pi n x)' = 2 pi n cos(2 pi n x)
        nf.mode = -f.mode;
        r.add_term(nm, c * (-f.mode));
      }
    }
  }
  return r;
}

double Poly::evaluate(std::span<const double> x) const {
  constexpr double tau = 2.0 * std::numbers::pi;
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    double v = c.get_d();
    if (m.twopi != 0) v *= std::pow(tau, m.twopi);
    for (const auto& f : m.factors) {
      const double xv = x[static_cast<std::size_t>(f.var)];
      if (f.power != 0) v *= std::pow(xv, f.power);
      if (f.mode > 0) v *= std::cos(tau * f.mode * xv);
      if (f.mode < 0) v *= std::sin(tau * (-f.mode) * xv);
    }
    total += v;
  }
  return total;
}

bool operator<(const Poly& a, const Poly& b) {
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return ia == a.terms_.end() && ib != b.terms_.end();
}

std::optional<Poly> exact_divide(const Poly& n, const Poly& d) {
  if (d.is_zero()) return std::nullopt;
  if (n.is_zero()) return Poly();
  // leading real group of d must be a single term without trig factors
  RealPart lead;
  bool first = true;
  for (const auto& [m, c] : d.terms()) {
    RealPart r = real_part(m);
    if (first || compare_real(r, lead) > 0) {
      lead = r;
      first = false;
    }
  }
  const Monomial* lead_mono = nullptr;
  Rational lead_coeff;
  int count = 0;
  for (const auto& [m, c] : d.terms()) {
    if (compare_real(real_part(m), lead) == 0) {
      ++count;
      lead_mono = &m;
      lead_coeff = c;
    }
  }
  if (count != 1 || lead_mono->has_trig()) return std::nullopt;
  const int lead_twopi = lead_mono->twopi;
  const Rational inv_lead = 1 / lead_coeff;

  Poly rem = n, quot;
  std::size_t guard = 0;
  while (!rem.is_zero()) {
    if (++guard > 100000) return std::nullopt;
    RealPart top;
    first = true;
    for (const auto& [m, c] : rem.terms()) {
      RealPart r = real_part(m);
      if (first || compare_real(r, top) > 0) {
        top = r;
        first = false;
      }
    }
    if (!divides(lead, top)) return std::nullopt;
    const Monomial shift = real_quotient(top, lead);
    Poly step;
    for (const auto& [m, c] : rem.terms()) {
      if (compare_real(real_part(m), top) != 0) continue;
      Monomial core = strip_real(m);
      core.twopi -= lead_twopi;
      for (auto& [pm, pc] : multiply(core, shift)) step.add_term(pm, c * pc * inv_lead);
    }
    quot += step;
    rem -= step * d;
  }
  return quot;
}

}  // namespace twp::sym
