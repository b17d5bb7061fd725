#include "twp/symcalc/chart_map.hpp"

#include <cmath>
#include <map>

#include "twp/symcalc/calculus.hpp"

namespace twp::sym {

ChartMap::ChartMap(Chart source, Chart target, std::vector<CoordinateImage> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != target_.dim()) throw ValidationError("chart map needs one image per target coordinate");
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (!target_.is_angle(i)) continue;
    for (auto& [v, c] : images_[i].angle.terms)
      if (v >= source_.dim() || !source_.is_angle(v))
        throw KindError("angle image of '" + target_.coord(i).name + "' uses a non-angle source coordinate");
    for (std::size_t v : source_.angle_indices())
      if (images_[i].angle.shift.depends_on(static_cast<int>(v)))
        throw KindError("angle shift of '" + target_.coord(i).name + "' depends on a source angle");
  }
}

ChartMap ChartMap::identity(const Chart& chart) {
  std::vector<CoordinateImage> images(chart.dim());
  for (std::size_t i = 0; i < chart.dim(); ++i) {
    if (chart.is_angle(i))
      images[i].angle.terms = {{i, 1}};
    else
      images[i].expr = Scalar::variable(static_cast<int>(i));
  }
  return ChartMap(chart, chart, std::move(images));
}

Form ChartMap::image_differential(std::size_t i) const {
  if (!target_.is_angle(i)) return differential(source_, images_[i].expr);
  Form r = differential(source_, images_[i].angle.shift);
  for (auto& [v, c] : images_[i].angle.terms) r = r + Scalar(c) * coordinate_differential(source_, v);
  return r;
}

std::vector<double> ChartMap::apply(std::span<const double> x) const {
  std::vector<double> out(target_.dim());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!target_.is_angle(i)) {
      out[i] = images_[i].expr.evaluate(x);
    } else {
      double v = images_[i].angle.shift.evaluate(x);
      for (auto& [s, c] : images_[i].angle.terms) v += c * x[s];
      out[i] = wrap_unit(v);
    }
  }
  return out;
}

namespace {

// cos and sin of 2*pi*n*(image) as expressions on the source chart.
std::pair<Scalar, Scalar> trig_image(const AngleImage& img, int n) {
  Scalar c(1), s(0);
  for (auto& [v, k] : img.terms) {
    const int var = static_cast<int>(v);
    Scalar cb = Scalar::cos(var, n * k), sb = Scalar::sin(var, n * k);
    Scalar nc = c * cb - s * sb;
    Scalar ns = s * cb + c * sb;
    c = std::move(nc);
    s = std::move(ns);
  }
  if (!img.shift.is_zero()) {
    auto q = img.shift.constant_value();
    if (!q) throw NotRepresentable("flow not closed-form: non-constant shift under a trigonometric factor");
    Rational t = *q * n * 4;
    t.canonicalize();
    if (t.get_den() != 1) throw NotRepresentable("flow not closed-form: shift is not a multiple of 1/4");
    long quarter = t.get_num().get_si() % 4;
    if (quarter < 0) quarter += 4;
    static const int cq[4] = {1, 0, -1, 0};
    static const int sq[4] = {0, 1, 0, -1};
    Scalar cs(cq[quarter]), ss(sq[quarter]);
    Scalar nc = c * cs - s * ss;
    Scalar ns = s * cs + c * ss;
    c = std::move(nc);
    s = std::move(ns);
  }
  return {c, s};
}

class Substituter {
 public:
  explicit Substituter(const ChartMap& map) : map_(map) {}

  Scalar poly(const Poly& p) {
    Scalar total;
    for (const auto& [m, c] : p.terms()) {
      Scalar term(Poly::from_monomial(Monomial{m.twopi, {}}, c));
      for (const auto& f : m.factors) {
        const auto v = static_cast<std::size_t>(f.var);
        if (f.power != 0) term *= power(v, f.power);
        if (f.mode != 0) term *= trig(v, f.mode);
      }
      total += term;
    }
    return total;
  }

  Scalar scalar(const Scalar& f) {
    Scalar r = poly(f.numerator());
    for (const auto& [a, e] : f.denominator()) r /= poly(a).pow(e);
    return r;
  }

 private:
  Scalar power(std::size_t v, int p) {
    auto key = std::make_pair(v, p);
    auto it = powers_.find(key);
    if (it != powers_.end()) return it->second;
    if (map_.target().is_angle(v)) throw KindError("polynomial power of an angle coordinate");
    Scalar r = map_.images()[v].expr.pow(p);
    powers_.emplace(key, r);
    return r;
  }

  Scalar trig(std::size_t v, int mode) {
    auto key = std::make_pair(v, mode);
    auto it = trig_.find(key);
    if (it != trig_.end()) return it->second;
    if (!map_.target().is_angle(v)) throw KindError("trigonometric factor of a real coordinate");
    const int n = std::abs(mode);
    auto [c, s] = trig_image(map_.images()[v].angle, n);
    Scalar r = mode > 0 ? c : s;
    trig_.emplace(key, r);
    return r;
  }

  const ChartMap& map_;
  std::map<std::pair<std::size_t, int>, Scalar> powers_, trig_;
};

}  // namespace

Scalar pullback(const Scalar& f, const ChartMap& map) { return Substituter(map).scalar(f); }

Form pullback(const Form& w, const ChartMap& map) {
  if (!(w.chart() == map.target())) throw ChartMismatch("pullback of a form not on the map's target chart");
  Substituter sub(map);
  std::map<std::size_t, Form> dimg;
  Form r(map.source(), w.degree());
  for (const auto& [idx, c] : w.coefficients()) {
    Form term = Form::function(map.source(), sub.scalar(c));
    for (int i : idx) {
      const auto ui = static_cast<std::size_t>(i);
      auto it = dimg.find(ui);
      if (it == dimg.end()) it = dimg.emplace(ui, map.image_differential(ui)).first;
      term = wedge(term, it->second);
    }
    r = r + term;
  }
  return r;
}

ChartMap compose(const ChartMap& outer, const ChartMap& inner) {
  if (!(outer.source() == inner.target())) throw ChartMismatch("composition of incompatible chart maps");
  std::vector<CoordinateImage> images(outer.target().dim());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& oi = outer.images()[i];
    if (!outer.target().is_angle(i)) {
      images[i].expr = pullback(oi.expr, inner);
      continue;
    }
    std::map<std::size_t, int> coeffs;
    Scalar shift = pullback(oi.angle.shift, inner);
    for (auto& [v, k] : oi.angle.terms) {
      const auto& ii = inner.images()[v].angle;
      for (auto& [w, m] : ii.terms) coeffs[w] += k * m;
      shift += Scalar(k) * ii.shift;
    }
    for (auto& [w, m] : coeffs)
      if (m != 0) images[i].angle.terms.emplace_back(w, m);
    images[i].angle.shift = shift;
  }
  return ChartMap(inner.source(), outer.target(), std::move(images));
}

bool is_prefix_chart(const Chart& base, const Chart& total) {
  if (base.dim() > total.dim()) return false;
  for (std::size_t i = 0; i < base.dim(); ++i)
    if (!(base.coord(i) == total.coord(i))) return false;
  return true;
}

Form lift(const Form& w, const Chart& total) {
  if (!is_prefix_chart(w.chart(), total)) throw ChartMismatch("base chart is not a prefix of the total chart");
  Form r(total, w.degree());
  for (const auto& [idx, c] : w.coefficients()) r.accumulate(idx, c);
  return r;
}

Form restrict_to_prefix(const Form& w, const Chart& base) {
  if (!is_prefix_chart(base, w.chart())) throw ChartMismatch("base chart is not a prefix of the total chart");
  Form r(base, w.degree());
  const int n = static_cast<int>(base.dim());
  for (const auto& [idx, c] : w.coefficients()) {
    for (int i : idx)
      if (i >= n) throw ValidationError("form has a component along a fibre direction");
    for (int v : c.variables())
      if (v >= n) throw ValidationError("form coefficient depends on a fibre coordinate");
    r.accumulate(idx, c);
  }
  return r;
}

}  // namespace twp::sym
