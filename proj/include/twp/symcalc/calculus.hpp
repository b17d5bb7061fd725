#pragma once

#include <span>
#include <vector>

#include "twp/symcalc/tensor.hpp"

namespace twp::sym {

// Coordinate helpers.
Form coordinate_differential(const Chart& chart, std::size_t i);
Multivector coordinate_field(const Chart& chart, std::size_t i);
Form differential(const Chart& chart, const Scalar& f);

// Exterior calculus.
Form d(const Form& w);
Form wedge(const Form& a, const Form& b);
Multivector wedge(const Multivector& a, const Multivector& b);

// i(X)w for a vector field X: i(d/dx^j) dx^I = (-1)^s dx^(I without j) where s
// is the position of j in I.
Form interior(const Multivector& x, const Form& w);
Form lie_derivative(const Multivector& x, const Form& w);

// Schouten-Nijenhuis bracket. Degree one gives the commutator of vector fields;
// for bivectors <[pi,pi], dh1^dh2^dh3> = 2 * ({{h1,h2},h3} + cyclic).
Multivector schouten(const Multivector& p, const Multivector& q);

// Evaluation w(X1, ..., Xk) for vector fields X_i.
Scalar apply(const Form& w, std::span<const Multivector> xs);
Scalar apply(const Form& w, const Multivector& x, const Multivector& y);

// Determinant pairing <A, w> = sum_I A^I w_I of equal degrees.
Scalar pair(const Multivector& a, const Form& w);

// Components (pi^# a)^j = sum_i a_i Pi^{ij} of a bivector, extended to k-forms
// as the k-th exterior power.
Multivector sharp(const Multivector& pi, const Form& w);

// Poisson-type bracket {f, g} = pi(df, dg).
Scalar bracket(const Multivector& pi, const Scalar& f, const Scalar& g);

// Full antisymmetric coefficient matrix of a degree-2 tensor.
template <class Kind>
std::vector<std::vector<Scalar>> full_matrix(const Alternating<Kind>& t) {
  if (t.degree() != 2) throw DegreeError("full_matrix requires degree 2");
  const std::size_t n = t.chart().dim();
  std::vector<std::vector<Scalar>> m(n, std::vector<Scalar>(n));
  for (const auto& [idx, c] : t.coefficients()) {
    m[static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(idx[1])] = c;
    m[static_cast<std::size_t>(idx[1])][static_cast<std::size_t>(idx[0])] = -c;
  }
  return m;
}

template <class Kind>
Alternating<Kind> from_matrix(const Chart& chart, const std::vector<std::vector<Scalar>>& m) {
  Alternating<Kind> t(chart, 2);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) t.accumulate({static_cast<int>(i), static_cast<int>(j)}, m[i][j]);
  return t;
}

// True if no coefficient depends on any of the given coordinates.
template <class Kind>
bool independent_of(const Alternating<Kind>& t, std::span<const std::size_t> vars) {
  for (const auto& [idx, c] : t.coefficients())
    for (std::size_t v : vars)
      if (c.depends_on(static_cast<int>(v))) return false;
  return true;
}

// True if some component has an index in the given set.
template <class Kind>
bool touches(const Alternating<Kind>& t, std::span<const std::size_t> vars) {
  for (const auto& [idx, c] : t.coefficients())
    for (int i : idx)
      for (std::size_t v : vars)
        if (static_cast<std::size_t>(i) == v) return true;
  return false;
}

// Numeric evaluation of all coefficients at a point.
template <class Kind>
std::map<Indices, double> evaluate(const Alternating<Kind>& t, std::span<const double> x) {
  std::map<Indices, double> out;
  for (const auto& [idx, c] : t.coefficients()) out[idx] = c.evaluate(x);
  return out;
}

// Symbolic Gaussian elimination over the field of expressions.
Scalar determinant(std::vector<std::vector<Scalar>> m);
std::optional<std::vector<std::vector<Scalar>>> inverse(std::vector<std::vector<Scalar>> m);

}  // namespace twp::sym
