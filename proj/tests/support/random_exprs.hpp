#pragma once

#include <functional>
#include <random>

#include "twp/symcalc/calculus.hpp"

namespace twp::testing {

using namespace twp::sym;

inline Rational random_rational(std::mt19937_64& rng, int range = 3) {
  std::uniform_int_distribution<int> num(-range, range), den(1, 3);
  return Rational(num(rng), den(rng));
}

// Random polynomial in the real coordinates of a chart, plus low-frequency
// trig factors for angle coordinates when allow_trig is set.
inline Scalar random_poly(std::mt19937_64& rng, const Chart& chart, int max_degree = 2, int terms = 3,
                          bool allow_trig = false) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> pick(0, chart.dim() - 1);
  std::uniform_int_distribution<int> mode(-2, 2);
  Scalar s;
  for (int t = 0; t < terms; ++t) {
    Scalar term(random_rational(rng));
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) {
      const std::size_t v = pick(rng);
      if (chart.is_angle(v)) {
        if (!allow_trig) continue;
        int m = mode(rng);
        term *= m >= 0 ? Scalar::cos(static_cast<int>(v), m) : Scalar::sin(static_cast<int>(v), -m);
      } else {
        term *= Scalar::variable(static_cast<int>(v));
      }
    }
    s += term;
  }
  return s;
}

template <class T>
T random_tensor(std::mt19937_64& rng, const Chart& chart, int degree, int max_degree = 2, bool allow_trig = false) {
  T t(chart, degree);
  const int n = static_cast<int>(chart.dim());
  std::vector<int> idx(static_cast<std::size_t>(degree));
  // enumerate increasing tuples
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == degree) {
      t.accumulate(idx, random_poly(rng, chart, max_degree, 2, allow_trig));
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[static_cast<std::size_t>(pos)] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
  return t;
}

inline Chart real_chart(std::initializer_list<const char*> names) {
  std::vector<Coordinate> c;
  for (auto n : names) c.push_back({n, CoordKind::real});
  return Chart(c);
}

}  // namespace twp::testing
