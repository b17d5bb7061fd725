#include "twp/symcalc/calculus.hpp"

namespace twp::sym {

int sort_with_sign(Indices& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  return sign;
}

Form coordinate_differential(const Chart& chart, std::size_t i) { return Form::basis(chart, {static_cast<int>(i)}); }

Multivector coordinate_field(const Chart& chart, std::size_t i) {
  return Multivector::basis(chart, {static_cast<int>(i)});
}

Form differential(const Chart& chart, const Scalar& f) { return d(Form::function(chart, f)); }

Form d(const Form& w) {
  Form r(w.chart(), w.degree() + 1);
  const int n = static_cast<int>(w.chart().dim());
  for (const auto& [idx, c] : w.coefficients()) {
    for (int j = 0; j < n; ++j) {
      if (!c.depends_on(j)) continue;
      Indices k;
      k.reserve(idx.size() + 1);
      k.push_back(j);
      k.insert(k.end(), idx.begin(), idx.end());
      r.accumulate(std::move(k), c.derivative(j));
    }
  }
  return r;
}

namespace {

template <class T>
T wedge_impl(const T& a, const T& b) {
  if (!(a.chart() == b.chart())) throw ChartMismatch("wedge of tensors on different charts");
  T r(a.chart(), a.degree() + b.degree());
  if (static_cast<std::size_t>(r.degree()) > a.chart().dim()) return r;
  for (const auto& [i, c] : a.coefficients())
    for (const auto& [j, e] : b.coefficients()) {
      Indices k = i;
      k.insert(k.end(), j.begin(), j.end());
      Indices probe = k;
      if (sort_with_sign(probe) == 0) continue;
      r.accumulate(std::move(k), c * e);
    }
  return r;
}

Indices without(const Indices& idx, std::size_t pos) {
  Indices r;
  r.reserve(idx.size() - 1);
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (i != pos) r.push_back(idx[i]);
  return r;
}

// Right derivative with respect to the odd variable dual to coordinate i.
Multivector right_derivative(const Multivector& p, int i) {
  Multivector r(p.chart(), p.degree() - 1);
  const int k = p.degree();
  for (const auto& [idx, c] : p.coefficients()) {
    for (std::size_t s = 0; s < idx.size(); ++s) {
      if (idx[s] != i) continue;
      const bool odd = (k - 1 - static_cast<int>(s)) % 2 != 0;
      r.accumulate(without(idx, s), odd ? -c : c);
    }
  }
  return r;
}

Multivector coefficient_derivative(const Multivector& p, int i) {
  return p.map_coefficients([i](const Scalar& c) { return c.derivative(i); });
}

}  // namespace

Form wedge(const Form& a, const Form& b) { return wedge_impl(a, b); }
Multivector wedge(const Multivector& a, const Multivector& b) { return wedge_impl(a, b); }

Form interior(const Multivector& x, const Form& w) {
  if (x.degree() != 1) throw DegreeError("interior product requires a vector field");
  if (!(x.chart() == w.chart())) throw ChartMismatch("interior product across charts");
  if (w.degree() == 0) throw DegreeError("interior product of a function");
  Form r(w.chart(), w.degree() - 1);
  for (const auto& [idx, c] : w.coefficients()) {
    for (std::size_t s = 0; s < idx.size(); ++s) {
      Scalar xj = x.coefficient({idx[s]});
      if (xj.is_zero()) continue;
      Scalar term = xj * c;
      r.accumulate(without(idx, s), s % 2 == 0 ? term : -term);
    }
  }
  return r;
}

Form lie_derivative(const Multivector& x, const Form& w) {
  Form r = interior(x, d(w));
  if (w.degree() > 0) r = r + d(interior(x, w));
  return r;
}

Multivector schouten(const Multivector& p, const Multivector& q) {
  if (!(p.chart() == q.chart())) throw ChartMismatch("Schouten bracket across charts");
  const int dp = p.degree(), dq = q.degree();
  if (dp + dq == 0) return Multivector(p.chart(), 0);
  Multivector r(p.chart(), dp + dq - 1);
  const bool flip = ((dp - 1) * (dq - 1)) % 2 != 0;
  const int n = static_cast<int>(p.chart().dim());
  for (int i = 0; i < n; ++i) {
    if (dp > 0) {
      Multivector lhs = right_derivative(p, i);
      if (!lhs.is_zero()) r = r + wedge(lhs, coefficient_derivative(q, i));
    }
    if (dq > 0) {
      Multivector lhs = right_derivative(q, i);
      if (!lhs.is_zero()) {
        Multivector t = wedge(lhs, coefficient_derivative(p, i));
        r = flip ? r + t : r - t;
      }
    }
  }
  // Overall sign chosen so that <[pi,pi], dh1^dh2^dh3> = 2 * ({{h1,h2},h3} + cyclic).
  return flip ? -r : r;
}

Scalar apply(const Form& w, std::span<const Multivector> xs) {
  if (static_cast<int>(xs.size()) != w.degree()) throw DegreeError("number of vectors does not match form degree");
  Form cur = w;
  for (const auto& x : xs) cur = interior(x, cur);
  return cur.value();
}

Scalar apply(const Form& w, const Multivector& x, const Multivector& y) {
  const Multivector xs[2] = {x, y};
  return apply(w, std::span<const Multivector>(xs, 2));
}

Scalar pair(const Multivector& a, const Form& w) {
  if (!(a.chart() == w.chart())) throw ChartMismatch("pairing across charts");
  if (a.degree() != w.degree()) throw DegreeError("pairing of different degrees");
  Scalar s;
  for (const auto& [idx, c] : a.coefficients()) {
    auto it = w.coefficients().find(idx);
    if (it != w.coefficients().end()) s += c * it->second;
  }
  return s;
}

Multivector sharp(const Multivector& pi, const Form& w) {
  if (pi.degree() != 2) throw DegreeError("sharp requires a bivector");
  if (!(pi.chart() == w.chart())) throw ChartMismatch("sharp across charts");
  const Chart& chart = pi.chart();
  const std::size_t n = chart.dim();
  std::vector<Multivector> image(n, Multivector(chart, 1));
  for (const auto& [idx, c] : pi.coefficients()) {
    image[static_cast<std::size_t>(idx[0])].accumulate({idx[1]}, c);
    image[static_cast<std::size_t>(idx[1])].accumulate({idx[0]}, -c);
  }
  Multivector r(chart, w.degree());
  for (const auto& [idx, c] : w.coefficients()) {
    Multivector term = Multivector::function(chart, c);
    for (int i : idx) term = wedge(term, image[static_cast<std::size_t>(i)]);
    r = r + term;
  }
  return r;
}

Scalar bracket(const Multivector& pi, const Scalar& f, const Scalar& g) {
  const Chart& c = pi.chart();
  return pair(pi, wedge(differential(c, f), differential(c, g)));
}

namespace {

using Matrix = std::vector<std::vector<Scalar>>;

// Index of the simplest nonzero entry in column col at or below row col.
std::optional<std::size_t> choose_pivot(const Matrix& m, std::size_t col) {
  std::optional<std::size_t> best;
  std::size_t best_size = 0;
  for (std::size_t r = col; r < m.size(); ++r) {
    if (m[r][col].is_zero()) continue;
    const std::size_t sz = m[r][col].complexity();
    if (!best || sz < best_size) {
      best = r;
      best_size = sz;
    }
  }
  return best;
}

}  // namespace

Scalar determinant(Matrix m) {
  const std::size_t n = m.size();
  Scalar det(1);
  for (std::size_t col = 0; col < n; ++col) {
    auto p = choose_pivot(m, col);
    if (!p) return Scalar();
    if (*p != col) {
      std::swap(m[*p], m[col]);
      det = -det;
    }
    const Scalar piv = m[col][col];
    det *= piv;
    const Scalar inv = piv.inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      const Scalar f = m[r][col] * inv;
      for (std::size_t c = col; c < n; ++c)
        if (!m[col][c].is_zero()) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

std::optional<Matrix> inverse(Matrix m) {
  const std::size_t n = m.size();
  Matrix inv(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = Scalar(1);
  for (std::size_t col = 0; col < n; ++col) {
    auto p = choose_pivot(m, col);
    if (!p) return std::nullopt;
    std::swap(m[*p], m[col]);
    std::swap(inv[*p], inv[col]);
    const Scalar pinv = m[col][col].inverse();
    for (std::size_t c = 0; c < n; ++c) {
      if (!m[col][c].is_zero()) m[col][c] *= pinv;
      if (!inv[col][c].is_zero()) inv[col][c] *= pinv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const Scalar f = m[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        if (!m[col][c].is_zero()) m[r][c] -= f * m[col][c];
        if (!inv[col][c].is_zero()) inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

}  // namespace twp::sym
