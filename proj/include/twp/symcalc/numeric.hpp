#pragma once

#include <span>
#include <vector>

#include "twp/symcalc/tensor.hpp"

namespace twp::sym {

// Scalar flattened to double coefficients for repeated numeric evaluation.
class CompiledScalar {
 public:
  CompiledScalar() = default;
  explicit CompiledScalar(const Scalar& f);
  double operator()(std::span<const double> x) const;

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<int, int>> powers;
    std::vector<std::pair<int, int>> modes;
  };
  static std::vector<Term> compile(const Poly& p);
  static double eval(const std::vector<Term>& terms, std::span<const double> x);

  std::vector<Term> num_;
  std::vector<std::pair<std::vector<Term>, int>> den_;
};

// Degree-2 tensor compiled to a numeric antisymmetric matrix.
class CompiledMatrix {
 public:
  CompiledMatrix() = default;
  template <class Kind>
  explicit CompiledMatrix(const Alternating<Kind>& t) : n_(t.chart().dim()) {
    if (t.degree() != 2) throw DegreeError("CompiledMatrix requires degree 2");
    for (const auto& [idx, c] : t.coefficients())
      entries_.push_back({static_cast<std::size_t>(idx[0]), static_cast<std::size_t>(idx[1]), CompiledScalar(c)});
  }
  std::size_t dim() const { return n_; }
  // Row-major n x n matrix.
  std::vector<double> operator()(std::span<const double> x) const;

 private:
  struct Entry {
    std::size_t i, j;
    CompiledScalar f;
  };
  std::size_t n_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace twp::sym
