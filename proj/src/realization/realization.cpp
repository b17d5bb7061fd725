#include "twp/realization/realization.hpp"

#include <algorithm>
#include <set>

#include "twp/symcalc/text.hpp"

namespace twp::realization {

namespace {

using sym::CoordKind;
using sym::Coordinate;

Scalar v(std::size_t i) { return Scalar::variable(int(i)); }

std::string unique_name(const Chart& base, std::string name) {
  while (base.find(name)) name += "_";
  return name;
}

Chart extend(const Chart& base, const std::vector<Coordinate>& extra) {
  std::vector<Coordinate> c = base.coords();
  c.insert(c.end(), extra.begin(), extra.end());
  return Chart(c);
}

std::vector<Coordinate> angle_block(const Chart& base, std::size_t k) {
  std::vector<Coordinate> out;
  for (std::size_t u = 0; u < k; ++u)
    out.push_back({unique_name(base, k == 1 ? "theta" : "theta" + std::to_string(u + 1)), CoordKind::angle});
  return out;
}

Form lifted(const Form& w, const Chart& total) { return sym::lift(w, total); }

std::string coord_name(const Chart& c, std::size_t i) { return c.coord(i).name; }

// Translation of the fibre coordinates by `shift`, identity on the base.
ChartMap fibre_translation(const Chart& total, std::size_t base_dim, const std::vector<Scalar>& shift) {
  std::vector<sym::CoordinateImage> im(total.dim());
  for (std::size_t i = 0; i < total.dim(); ++i) {
    if (i < base_dim) {
      im[i].expr = v(i);
    } else if (total.is_angle(i)) {
      im[i].angle.terms = {{i, 1}};
      im[i].angle.shift = shift[i - base_dim];
    } else {
      im[i].expr = v(i) + shift[i - base_dim];
    }
  }
  return ChartMap(total, total, im);
}

Report chart_checks(const Realisation& r, std::size_t j) {
  const RealisationChart& c = r.charts()[j];
  const std::string& id = c.id;
  Report rep;
  const auto& almost = r.almost_symplectic(j);
  const Multivector pi_sigma = structures::bivector_from_form(almost);

  std::string ir1;
  for (std::size_t i = 0; i < c.base_dim() && ir1.empty(); ++i)
    for (std::size_t l = i + 1; l < c.base_dim() && ir1.empty(); ++l) {
      const Scalar diff = sym::bracket(pi_sigma, v(i), v(l)) - c.base.pi().coefficient({int(i), int(l)});
      if (!diff.is_zero())
        ir1 = "{" + coord_name(c.base_chart(), i) + "," + coord_name(c.base_chart(), l) +
              "}: residual " + sym::to_string(diff, c.total());
    }
  rep.add("IR1 " + id, ir1.empty(), ir1.empty() ? "p is an almost Poisson morphism" : ir1);

  const Form dsigma = sym::d(c.sigma);
  const Form ir2 = dsigma - lifted(c.base.phi(), c.total());
  rep.add("IR2 " + id, ir2.is_zero(), ir2.is_zero() ? "d sigma = p* phi" : "residual " + sym::to_string(ir2));

  std::string ir3;
  const auto fibre = c.fibre();
  for (std::size_t a = 0; a < fibre.size() && ir3.empty(); ++a)
    for (std::size_t b = a + 1; b < fibre.size() && ir3.empty(); ++b) {
      const Scalar s = c.sigma.coefficient({int(fibre[a]), int(fibre[b])});
      if (!s.is_zero())
        ir3 = "sigma(d/d" + coord_name(c.total(), fibre[a]) + ", d/d" + coord_name(c.total(), fibre[b]) +
              ") = " + sym::to_string(s, c.total());
    }
  rep.add("IR3 " + id, ir3.empty(), ir3.empty() ? "fibres isotropic" : ir3);

  rep.add("IR4 " + id, true, c.compact() ? "fibres are tori" : "waived: non-compact fibres");

  std::string gen;
  for (auto cas : c.casimirs) {
    const Multivector x = sym::sharp(pi_sigma, sym::coordinate_differential(c.total(), cas));
    const Form res = sym::interior(x, dsigma);
    if (!res.is_zero()) {
      gen = "i(X_" + coord_name(c.total(), cas) + ") d sigma = " + sym::to_string(res);
      break;
    }
  }
  rep.add("fibre generators " + id, gen.empty(), gen.empty() ? "i(X_c) d sigma = 0 for every Casimir c" : gen);
  return rep;
}

}  // namespace

std::vector<std::size_t> RealisationChart::fibre() const {
  std::vector<std::size_t> out;
  for (std::size_t i = base_dim(); i < total().dim(); ++i) out.push_back(i);
  return out;
}

bool RealisationChart::compact() const {
  const auto f = fibre();
  return std::all_of(f.begin(), f.end(), [&](std::size_t i) { return total().is_angle(i); });
}

Realisation::Realisation(std::vector<RealisationChart> charts, std::vector<FibreTransition> transitions)
    : charts_(std::move(charts)), transitions_(std::move(transitions)) {
  if (charts_.empty()) throw ValidationError("realisation has no charts");
  std::set<std::string> ids;
  const std::size_t k = charts_[0].total().dim() - charts_[0].base_dim();
  for (auto& c : charts_) {
    if (!ids.insert(c.id).second) throw ValidationError("duplicate chart id " + c.id);
    if (c.sigma.degree() != 2) throw DegreeError("sigma on chart " + c.id + " must be a 2-form");
    if (!sym::is_prefix_chart(c.base_chart(), c.total()))
      throw ChartMismatch("base chart of " + c.id + " is not a prefix of its total chart");
    if (c.total().dim() - c.base_dim() != k) throw ValidationError("fibre dimension differs on chart " + c.id);
    std::sort(c.casimirs.begin(), c.casimirs.end());
    for (auto i : c.casimirs)
      if (i >= c.base_dim()) throw ValidationError("Casimir index out of range on chart " + c.id);
    for (const auto& f : c.domain)
      for (int var : f.variables())
        if (std::size_t(var) >= c.base_dim()) throw ValidationError("domain of " + c.id + " must use base coordinates");
    almost_.emplace_back(c.sigma);
  }
  for (const auto& t : transitions_) {
    const auto& from = chart(t.from);
    const auto& to = chart(t.to);
    if (!(t.map.source() == from.total()) || !(t.map.target() == to.total()))
      throw ChartMismatch("transition " + t.from + "->" + t.to + " has the wrong charts");
    for (std::size_t i = 0; i < to.base_dim(); ++i) {
      if (to.total().is_angle(i)) continue;
      for (int var : t.map.images()[i].expr.variables())
        if (std::size_t(var) >= from.base_dim())
          throw ValidationError("transition " + t.from + "->" + t.to + " does not cover a base map");
    }
  }
}

std::size_t Realisation::index(const std::string& id) const {
  for (std::size_t i = 0; i < charts_.size(); ++i)
    if (charts_[i].id == id) return i;
  throw ValidationError("unknown chart " + id);
}

ChartMap Realisation::projection(std::size_t j) const {
  const auto& c = charts_[j];
  std::vector<sym::CoordinateImage> im(c.base_dim());
  for (std::size_t i = 0; i < c.base_dim(); ++i) {
    if (c.base_chart().is_angle(i)) {
      im[i].angle.terms = {{i, 1}};
    } else {
      im[i].expr = v(i);
    }
  }
  return ChartMap(c.total(), c.base_chart(), im);
}

bool Realisation::in_domain(std::size_t j, std::span<const double> base_point) const {
  for (const auto& f : charts_[j].domain)
    if (!(f.evaluate(base_point) > 0.0)) return false;
  return true;
}

Report verify_ir(const Realisation& r) {
  Report rep;
  rep.subject = "realisation";
  for (std::size_t j = 0; j < r.charts().size(); ++j) rep.merge(chart_checks(r, j));
  for (const auto& t : r.transitions()) {
    const Form diff = sym::pullback(r.chart(t.to).sigma, t.map) - r.chart(t.from).sigma;
    rep.add("compatibility " + t.from + "->" + t.to, diff.is_zero(),
            diff.is_zero() ? "psi* sigma_to = sigma_from" : "residual " + sym::to_string(diff));
  }
  return rep;
}

Realisation one_chart_realisation(const ncihs::IntegrableSystem& s, const std::string& id) {
  const auto& f = s.integrals();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != i) throw ValidationError("integrals must be the leading coordinates of the chart");
  ncihs::BaseStructure b = ncihs::induced_base_bracket(s);
  std::vector<std::size_t> casimirs;
  const Chart& base = s.base_chart();
  for (std::size_t i = 0; i < base.dim(); ++i)
    if (sym::sharp(b.structure.pi(), sym::coordinate_differential(base, i)).is_zero()) casimirs.push_back(i);
  return Realisation({{id, s.sigma(), b.structure, casimirs}}, {});
}

Realisation conormal_model(const structures::LeafDecomposition& l) {
  const auto& cas = l.casimirs();
  if (cas.empty()) throw ValidationError("conormal model needs declared Casimir coordinates");
  const Chart& base = l.base().chart();
  std::vector<Coordinate> extra;
  for (auto c : cas) extra.push_back({unique_name(base, "p_" + base.coord(c).name), CoordKind::real});
  const Chart total = extend(base, extra);
  Form sigma = lifted(l.tau(), total);
  for (std::size_t i = 0; i < cas.size(); ++i)
    sigma = sigma + Form::basis(total, {int(cas[i]), int(base.dim() + i)});
  structures::TwistedPoisson realised(l.base().pi(), sym::d(l.tau()));
  return Realisation({{"U", sigma, realised, cas}}, {});
}

Realisation quotient_model(const structures::LeafDecomposition& l, const cohomo::LatticeBundle& lattice,
                           const Form& s_pullback) {
  if (lattice.cover().charts().size() != 1) throw ValidationError("quotient model expects a one-chart lattice");
  const Chart& base = l.base().chart();
  if (!(lattice.cover().charts()[0].chart == base)) throw ChartMismatch("lattice chart differs from the base chart");
  if (s_pullback.degree() != 2 || !(s_pullback.chart() == base))
    throw ValidationError("s* sigma must be a 2-form on the base chart");
  const auto& basis = lattice.basis(0);
  for (std::size_t u = 0; u < basis.size(); ++u) {
    if (!sym::d(basis[u]).is_zero())
      throw ValidationError("lattice basis form " + std::to_string(u + 1) + " is not closed");
    if (!structures::vanishes_on_leaves(basis[u], l.casimirs()))
      throw ValidationError("lattice basis form " + std::to_string(u + 1) + " is not conormal");
  }
  const Chart total = extend(base, angle_block(base, basis.size()));
  Form sigma = lifted(s_pullback, total);
  for (std::size_t u = 0; u < basis.size(); ++u)
    sigma = sigma + sym::wedge(lifted(basis[u], total), sym::coordinate_differential(total, base.dim() + u));
  return Realisation({{"U", sigma, l.base(), l.casimirs()}}, {});
}

cohomo::IntMatrix unimodular_inverse(const cohomo::IntMatrix& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<sym::Rational>> m(n, std::vector<sym::Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) throw ValidationError("transition matrix is singular");
    std::swap(m[p], m[c]);
    const sym::Rational piv = m[c][c];
    for (auto& x : m[c]) x /= piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const sym::Rational f = m[r][c];
      for (std::size_t j = 0; j < 2 * n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  cohomo::IntMatrix out(n, std::vector<long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const sym::Rational& x = m[i][n + j];
      if (x.get_den() != 1) throw ValidationError("transition matrix is not unimodular");
      out[i][j] = x.get_num().get_si();
    }
  return out;
}

cohomo::ChartForms kappa_forms(const CocycleData& d) {
  const auto& cover = d.lattice.cover();
  if (d.kappa.size() != cover.overlaps().size()) throw ValidationError("kappa needs components on every overlap");
  cohomo::ChartForms out;
  for (std::size_t o = 0; o < cover.overlaps().size(); ++o) {
    const auto& ov = cover.overlaps()[o];
    const auto& to = d.lattice.basis(cover.index(ov.to));
    if (d.kappa[o].size() != d.lattice.rank())
      throw ValidationError("kappa on " + ov.from + "->" + ov.to + " needs one component per lattice direction");
    Form k(ov.map.source(), 1);
    for (std::size_t u = 0; u < to.size(); ++u) k = k + d.kappa[o][u] * sym::pullback(to[u], ov.map);
    out.push_back(k);
  }
  return out;
}

namespace {

void require_per_chart(const cohomo::ChartForms& w, const cohomo::Cover& cover, int degree, const std::string& what) {
  if (w.size() != cover.charts().size()) throw ValidationError(what + " needs a form on every chart");
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j].degree() != degree) throw DegreeError(what + " on " + cover.charts()[j].id + " has the wrong degree");
    if (!(w[j].chart() == cover.charts()[j].chart)) throw ChartMismatch(what + " on " + cover.charts()[j].id);
  }
}

void require_consistent(const cohomo::Cover& cover, const cohomo::ChartForms& w, const std::string& what) {
  const Report r = cohomo::check_overlap_consistency(cover, w, what);
  for (const auto& c : r.checks)
    if (c.verdict != Verdict::pass) throw ValidationError(c.name + " fails: " + c.detail);
}

// True if the composite is the identity up to constant integer angle shifts.
bool identity_mod_lattice(const ChartMap& m) {
  const Chart& c = m.source();
  for (std::size_t i = 0; i < c.dim(); ++i) {
    const auto& im = m.images()[i];
    if (!c.is_angle(i)) {
      if (!(im.expr == v(i))) return false;
      continue;
    }
    if (im.angle.terms != std::vector<std::pair<std::size_t, int>>{{i, 1}}) return false;
    const auto s = im.angle.shift.constant_value();
    if (!s && !im.angle.shift.is_zero()) return false;
    if (s && s->get_den() != 1) return false;
  }
  return true;
}

}  // namespace

GluedRealisation glue_realisation(const CocycleData& d) {
  const auto& cover = d.lattice.cover();
  const std::size_t n = cover.charts().size(), k = d.lattice.rank();
  if (d.base.size() != n) throw ValidationError("base structure needed on every chart");
  require_per_chart(d.tau, cover, 2, "tau");
  require_per_chart(d.zeta, cover, 2, "zeta");
  if (d.eta) require_per_chart(*d.eta, cover, 2, "eta");
  cohomo::ChartForms phi;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(d.base[j].chart() == cover.charts()[j].chart))
      throw ChartMismatch("base structure on " + cover.charts()[j].id + " lives on another chart");
    phi.push_back(d.base[j].phi());
  }
  require_consistent(cover, d.tau, "tau");
  require_consistent(cover, phi, "phi");
  if (d.eta) require_consistent(cover, *d.eta, "eta");
  for (std::size_t j = 0; j < n; ++j) {
    const auto& cc = cover.charts()[j];
    if (!cohomo::vanishes_on_leaves(cc, d.zeta[j])) throw ValidationError("zeta does not vanish on leaves on " + cc.id);
    if (d.eta && !cohomo::vanishes_on_leaves(cc, (*d.eta)[j]))
      throw ValidationError("eta does not vanish on leaves on " + cc.id);
  }

  Report cert;
  cert.subject = "glued realisation";

  const cohomo::ChartForms kappa = kappa_forms(d);
  for (std::size_t o = 0; o < cover.overlaps().size(); ++o) {
    const auto& ov = cover.overlaps()[o];
    const Form lhs = d.zeta[cover.index(ov.from)] - sym::pullback(d.zeta[cover.index(ov.to)], ov.map);
    const Form diff = lhs - sym::d(kappa[o]);
    if (!diff.is_zero())
      throw ValidationError("zeta_from - map* zeta_to != d kappa on " + ov.from + "->" + ov.to + ": residual " +
                            sym::to_string(diff));
    cert.add("zeta coboundary " + ov.from + "->" + ov.to, true, "zeta_from - map* zeta_to = d kappa");
  }

  std::vector<RealisationChart> charts;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& cc = cover.charts()[j];
    const Chart total = extend(cc.chart, angle_block(cc.chart, k));
    Form base_part = d.tau[j] + d.zeta[j];
    Form sigma = lifted(base_part, total);
    for (std::size_t u = 0; u < k; ++u)
      sigma = sigma + sym::wedge(lifted(d.lattice.basis(j)[u], total), sym::coordinate_differential(total, cc.chart.dim() + u));
    const Form pre = sym::d(sigma) - lifted(sym::d(base_part), total);
    cert.add("d sigma before correction " + cc.id, pre.is_zero(), "d sigma = p*(d tau + d zeta)");
    if (d.eta) sigma = sigma - lifted((*d.eta)[j], total);
    charts.push_back({cc.id, sigma, d.base[j], cc.casimirs, cc.domain});
  }

  std::vector<FibreTransition> transitions;
  for (std::size_t o = 0; o < cover.overlaps().size(); ++o) {
    const auto& ov = cover.overlaps()[o];
    const auto& from = charts[cover.index(ov.from)];
    const auto& to = charts[cover.index(ov.to)];
    const cohomo::IntMatrix ainv = unimodular_inverse(d.lattice.transition(o));
    std::vector<sym::CoordinateImage> im(to.total().dim());
    for (std::size_t i = 0; i < to.base_dim(); ++i) im[i] = ov.map.images()[i];
    for (std::size_t u = 0; u < k; ++u) {
      auto& a = im[to.base_dim() + u].angle;
      // G = A^{-T}: theta_to^u = sum_w G_uw theta_from^w - k_u.
      for (std::size_t w = 0; w < k; ++w)
        if (ainv[w][u] != 0) a.terms.push_back({from.base_dim() + w, int(ainv[w][u])});
      a.shift = -d.kappa[o][u];
    }
    transitions.push_back({ov.from, ov.to, ChartMap(from.total(), to.total(), im), ov.domain});
  }

  // Antisymmetry: psi_lj o psi_jl is a lattice translation for some reverse component.
  for (std::size_t o = 0; o < transitions.size(); ++o) {
    bool has_reverse = false, ok = false;
    for (std::size_t q = 0; q < transitions.size(); ++q) {
      if (transitions[q].from != transitions[o].to || transitions[q].to != transitions[o].from) continue;
      has_reverse = true;
      if (identity_mod_lattice(sym::compose(transitions[q].map, transitions[o].map))) ok = true;
    }
    if (has_reverse && !ok)
      throw ValidationError("kappa is not antisymmetric on " + transitions[o].from + "->" + transitions[o].to);
    if (has_reverse) cert.add("kappa antisymmetric " + transitions[o].from + "->" + transitions[o].to, true);
  }
  // Cocycle relation on triple overlaps.
  if (n >= 3)
    for (const auto& ab : transitions)
      for (const auto& bc : transitions) {
        if (ab.to != bc.from || ab.from == bc.to) continue;
        bool found = false, ok = false;
        for (const auto& ac : transitions) {
          if (ac.from != ab.from || ac.to != bc.to) continue;
          found = true;
          const ChartMap back = [&] {
            for (const auto& ca : transitions)
              if (ca.from == ac.to && ca.to == ac.from) return ca.map;
            return ChartMap::identity(ab.map.source());
          }();
          if (identity_mod_lattice(sym::compose(back, sym::compose(bc.map, ab.map)))) ok = true;
        }
        if (found && !ok)
          throw ValidationError("cocycle relation fails on " + ab.from + "," + ab.to + "," + bc.to);
        if (found) cert.add("cocycle " + ab.from + "," + ab.to + "," + bc.to, true);
      }

  Realisation glued(std::move(charts), std::move(transitions));
  cert.merge(verify_ir(glued));
  return {std::move(glued), std::move(cert)};
}

cohomo::ChartForms glued_relative_cocycle(const CocycleData& d) {
  cohomo::ChartForms out;
  for (std::size_t j = 0; j < d.tau.size(); ++j)
    out.push_back(-sym::d(d.zeta[j]) - (sym::d(d.tau[j]) - d.base[j].phi()));
  return out;
}

std::optional<cohomo::ChartForms> glued_witness(const CocycleData& d) {
  if (!d.eta) return std::nullopt;
  cohomo::ChartForms out;
  for (const auto& e : *d.eta) out.push_back(-e);
  return out;
}

Report pullback_identity_symbolic(const Realisation& r, std::size_t chart, const Form& alpha) {
  const RealisationChart& c = r.charts().at(chart);
  if (alpha.degree() != 1 || !(alpha.chart() == c.base_chart())) throw ValidationError("alpha must be a 1-form on the base");
  if (!structures::vanishes_on_leaves(alpha, c.casimirs)) throw ValidationError("alpha is not conormal");
  const Multivector x = sym::sharp(structures::bivector_from_form(r.almost_symplectic(chart)), lifted(alpha, c.total()));
  const auto fibre = c.fibre();
  std::vector<Scalar> shift;
  for (std::size_t i = 0; i < c.total().dim(); ++i) {
    const Scalar xi = x.coefficient({int(i)});
    const bool vertical = i >= c.base_dim();
    if (!vertical && !xi.is_zero()) throw NotRepresentable("flow of alpha moves the base; no closed form");
    if (vertical) {
      for (auto f : fibre)
        if (xi.depends_on(int(f))) throw NotRepresentable("flow of alpha is not a fibre translation");
      shift.push_back(xi);
    }
  }
  const ChartMap flow = fibre_translation(c.total(), c.base_dim(), shift);
  const Form delta = sym::pullback(c.sigma, flow) - c.sigma;
  const Form expected = lifted(sym::d(alpha), c.total());
  const Form diff = delta - expected;
  Report rep;
  rep.subject = "flow pullback identity";
  rep.add("pullback " + c.id, diff.is_zero(),
          diff.is_zero() ? "(phi^1)* sigma - sigma = " + sym::to_string(delta) : "residual " + sym::to_string(diff));
  return rep;
}

}  // namespace twp::realization
