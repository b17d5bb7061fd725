#pragma once

#include <random>

#include "random_exprs.hpp"
#include "twp/ncihs/ncihs.hpp"

namespace twp::testing {

inline Scalar var(int i) { return Scalar::variable(i); }

// System A: sum da^l ^ dalpha^l on (a1, a2, alpha1, alpha2).
inline ncihs::NormalFormSpec system_a_spec() { return {2, 2, {}, {}, {}}; }

// System B: da^dalpha + (1+a^2) db1^db2 on (a, b1, b2, alpha).
inline ncihs::NormalFormSpec system_b_spec() {
  Scalar c = Scalar(1) + var(0) * var(0);
  return {1, 2, {}, {}, {{Scalar(), c}, {-c, Scalar()}}};
}

inline ncihs::IntegrableSystem system_a() { return ncihs::build_normal_form(system_a_spec()); }
inline ncihs::IntegrableSystem system_b() { return ncihs::build_normal_form(system_b_spec()); }

// Random spec with polynomial blocks. C is (q + p^2) J on 2x2 blocks, which
// keeps sigma non-degenerate everywhere.
inline ncihs::NormalFormSpec random_normal_form_spec(std::mt19937_64& rng, int k, int n) {
  const int m = 2 * (n - k);
  const Chart chart = ncihs::normal_form_chart(k, n);
  // Polynomials in the first k (resp. k+m) coordinates: built on prefix charts,
  // which share variable numbering with the full chart.
  std::vector<Coordinate> act, ab;
  for (int i = 0; i < k + m; ++i) {
    if (i < k) act.push_back(chart.coord(std::size_t(i)));
    ab.push_back(chart.coord(std::size_t(i)));
  }
  const Chart a_chart(act), ab_chart(ab);
  ncihs::NormalFormSpec s{k, n, {}, {}, {}};
  s.a.assign(std::size_t(k), std::vector<Scalar>(std::size_t(k)));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      s.a[std::size_t(i)][std::size_t(j)] = random_poly(rng, a_chart, 2, 2);
      s.a[std::size_t(j)][std::size_t(i)] = -s.a[std::size_t(i)][std::size_t(j)];
    }
  if (m > 0) {
    s.b.assign(std::size_t(k), std::vector<Scalar>(std::size_t(m)));
    for (auto& row : s.b)
      for (auto& e : row) e = random_poly(rng, ab_chart, 2, 2);
    s.c.assign(std::size_t(m), std::vector<Scalar>(std::size_t(m)));
    std::uniform_int_distribution<int> q(1, 4);
    for (int u = 0; u < m; u += 2) {
      Scalar p = random_poly(rng, ab_chart, 1, 2);
      Scalar e = Scalar(q(rng)) + p * p;
      s.c[std::size_t(u)][std::size_t(u + 1)] = e;
      s.c[std::size_t(u + 1)][std::size_t(u)] = -e;
    }
  }
  return s;
}

inline std::vector<std::vector<double>> random_points(std::size_t count, std::size_t dim, unsigned seed,
                                                      double lo = -2.0, double hi = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<std::vector<double>> out(count, std::vector<double>(dim));
  for (auto& p : out)
    for (auto& x : p) x = u(rng);
  return out;
}

}  // namespace twp::testing
