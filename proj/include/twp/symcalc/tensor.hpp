#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "twp/core/error.hpp"
#include "twp/symcalc/chart.hpp"
#include "twp/symcalc/scalar.hpp"

namespace twp::sym {

using Indices = std::vector<int>;

// Sort indices in place; returns the permutation sign, or 0 if an index repeats.
int sort_with_sign(Indices& idx);

struct FormKind {};
struct MultivectorKind {};

// Totally antisymmetric tensor of fixed degree on a chart, stored by strictly
// increasing index tuples. FormKind gives differential forms (dx^I),
// MultivectorKind gives multivector fields (d/dx^I).
template <class Kind>
class Alternating {
 public:
  using Coefficients = std::map<Indices, Scalar>;

  Alternating() = default;
  Alternating(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
    if (degree < 0) throw DegreeError("negative degree");
  }

  static Alternating from_terms(Chart chart, int degree, const std::vector<std::pair<Indices, Scalar>>& terms) {
    Alternating a(std::move(chart), degree);
    for (const auto& [idx, c] : terms) a.accumulate(idx, c);
    return a;
  }

  // Degree-zero tensor holding a function.
  static Alternating function(Chart chart, const Scalar& f) {
    Alternating a(std::move(chart), 0);
    a.accumulate({}, f);
    return a;
  }

  // The coordinate basis element with the given (unsorted) indices.
  static Alternating basis(Chart chart, Indices idx, const Scalar& c = Scalar(1)) {
    const int deg = static_cast<int>(idx.size());
    Alternating a(std::move(chart), deg);
    a.accumulate(std::move(idx), c);
    return a;
  }

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }
  const Coefficients& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  Scalar coefficient(Indices idx) const {
    const int s = sort_with_sign(idx);
    if (s == 0) return Scalar();
    auto it = coeffs_.find(idx);
    if (it == coeffs_.end()) return Scalar();
    return s > 0 ? it->second : -it->second;
  }

  // The function held by a degree-zero tensor.
  Scalar value() const {
    if (degree_ != 0) throw DegreeError("value() requires degree 0");
    return coefficient({});
  }

  Alternating operator-() const {
    Alternating r = *this;
    for (auto& [k, v] : r.coeffs_) v = -v;
    return r;
  }

  friend Alternating operator+(const Alternating& a, const Alternating& b) {
    a.require_compatible(b);
    Alternating r = a;
    for (const auto& [k, v] : b.coeffs_) r.accumulate(k, v);
    return r;
  }

  friend Alternating operator-(const Alternating& a, const Alternating& b) { return a + (-b); }

  friend Alternating operator*(const Scalar& f, const Alternating& a) {
    Alternating r(a.chart_, a.degree_);
    if (f.is_zero()) return r;
    for (const auto& [k, v] : a.coeffs_) r.accumulate(k, f * v);
    return r;
  }

  friend bool operator==(const Alternating& a, const Alternating& b) {
    if (!(a.chart_ == b.chart_) || a.degree_ != b.degree_) return false;
    return (a - b).is_zero();
  }

  // Apply f to every coefficient.
  template <class F>
  Alternating map_coefficients(F&& f) const {
    Alternating r(chart_, degree_);
    for (const auto& [k, v] : coeffs_) r.accumulate(k, f(v));
    return r;
  }

  // Same coefficients, reinterpreted on another chart with the same dimension
  // and compatible index meaning.
  Alternating rechart(Chart chart) const {
    Alternating r = *this;
    r.chart_ = std::move(chart);
    return r;
  }

  void accumulate(Indices idx, const Scalar& c) {
    if (c.is_zero()) return;
    if (static_cast<int>(idx.size()) != degree_) throw DegreeError("index tuple length does not match degree");
    for (int i : idx)
      if (i < 0 || static_cast<std::size_t>(i) >= chart_.dim()) throw DegreeError("index out of range");
    const int s = sort_with_sign(idx);
    if (s == 0) return;
    auto [it, inserted] = coeffs_.try_emplace(idx, s > 0 ? c : -c);
    if (!inserted) {
      if (s > 0)
        it->second += c;
      else
        it->second -= c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  void require_compatible(const Alternating& b) const {
    if (!(chart_ == b.chart_)) throw ChartMismatch("operands live on different charts");
    if (degree_ != b.degree_) throw DegreeError("operands have different degrees");
  }

 private:
  Chart chart_;
  int degree_ = 0;
  Coefficients coeffs_;
};

using Form = Alternating<FormKind>;
using Multivector = Alternating<MultivectorKind>;

}  // namespace twp::sym
