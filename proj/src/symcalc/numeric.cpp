#include "twp/symcalc/numeric.hpp"

#include <cmath>
#include <numbers>

namespace twp::sym {

CompiledScalar::CompiledScalar(const Scalar& f) : num_(compile(f.numerator())) {
  for (const auto& [a, e] : f.denominator()) den_.emplace_back(compile(a), e);
}

std::vector<CompiledScalar::Term> CompiledScalar::compile(const Poly& p) {
  constexpr double tau = 2.0 * std::numbers::pi;
  std::vector<Term> out;
  for (const auto& [m, c] : p.terms()) {
    Term t;
    t.coeff = c.get_d() * std::pow(tau, m.twopi);
    for (const auto& f : m.factors) {
      if (f.power != 0) t.powers.emplace_back(f.var, f.power);
      if (f.mode != 0) t.modes.emplace_back(f.var, f.mode);
    }
    out.push_back(std::move(t));
  }
  return out;
}

double CompiledScalar::eval(const std::vector<Term>& terms, std::span<const double> x) {
  constexpr double tau = 2.0 * std::numbers::pi;
  double total = 0.0;
  for (const auto& t : terms) {
    double v = t.coeff;
    for (auto [var, p] : t.powers) {
      const double xv = x[static_cast<std::size_t>(var)];
      double r = 1.0;
      for (int k = 0; k < p; ++k) r *= xv;
      v *= r;
    }
    for (auto [var, m] : t.modes) {
      const double xv = x[static_cast<std::size_t>(var)];
      v *= m > 0 ? std::cos(tau * m * xv) : std::sin(tau * (-m) * xv);
    }
    total += v;
  }
  return total;
}

double CompiledScalar::operator()(std::span<const double> x) const {
  double v = eval(num_, x);
  for (const auto& [a, e] : den_) {
    const double d = eval(a, x);
    double r = 1.0;
    for (int k = 0; k < e; ++k) r *= d;
    v /= r;
  }
  return v;
}

std::vector<double> CompiledMatrix::operator()(std::span<const double> x) const {
  std::vector<double> m(n_ * n_, 0.0);
  for (const auto& e : entries_) {
    const double v = e.f(x);
    m[e.i * n_ + e.j] = v;
    m[e.j * n_ + e.i] = -v;
  }
  return m;
}

}  // namespace twp::sym
