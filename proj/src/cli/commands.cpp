#include "twp/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "twp/cohomo/obstruction.hpp"
#include "twp/ncihs/ncihs.hpp"
#include "twp/realization/realization.hpp"
#include "twp/structures/structures.hpp"
#include "twp/symcalc/text.hpp"

namespace twp::cli {

using json = nlohmann::ordered_json;

namespace {

std::vector<std::size_t> coordinate_indices(const Chart& c, const Names& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(c.index(n));
  return out;
}

std::vector<std::size_t> casimirs_of(const Manifest& m, const std::string& chart) {
  const Section& s = m.at("chart", chart);
  const Names* n = s.get_if<Names>("casimirs");
  return n ? coordinate_indices(m.chart(chart), *n) : std::vector<std::size_t>{};
}

std::vector<Scalar> domain_of(const Section& s) {
  const Scalars* d = s.get_if<Scalars>("domain");
  return d ? d->items : std::vector<Scalar>{};
}

// Per-chart forms of a section with `key.<chart>` entries; missing ones are zero.
cohomo::ChartForms chart_forms(const Manifest& m, const Section& s, const cohomo::Cover& cover, const std::string& key,
                               int degree) {
  cohomo::ChartForms out;
  for (const auto& c : cover.charts()) {
    const Form* f = s.get_if<Form>(key, c.id);
    out.push_back(f ? *f : Form(m.chart(c.id), degree));
  }
  return out;
}

std::optional<cohomo::ChartForms> optional_chart_forms(const Manifest& m, const Section& s, const cohomo::Cover& cover,
                                                       const std::string& key, int degree) {
  for (const auto& c : cover.charts())
    if (s.has(key, c.id)) return chart_forms(m, s, cover, key, degree);
  return std::nullopt;
}

std::optional<cohomo::SphereCell> cell_of(const Section& s) {
  const Rows* r = s.get_if<Rows>("cell");
  if (!r) return std::nullopt;
  cohomo::SphereCell c;
  c.t0 = (*r)[0][0];
  c.t1 = (*r)[0][1];
  return c;
}

const Section& target_section(const Manifest& m, const std::string& kind, const std::string& target) {
  if (!target.empty()) return m.at(kind, target);
  const auto all = m.of_kind(kind);
  if (all.empty()) throw ValidationError("manifest declares no " + kind);
  if (all.size() > 1) throw ValidationError("manifest declares several " + kind + " sections; pass --target");
  return *all[0];
}

std::size_t realisation_chart(const realization::Realisation& r, const Section& s) {
  const Names* n = s.get_if<Names>("chart");
  return n ? r.index(n->at(0)) : 0;
}

std::vector<std::vector<double>> random_samples(const Chart& c, std::size_t count, long seed) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  std::uniform_real_distribution<double> real(-2.0, 2.0), angle(0.0, 1.0);
  std::vector<std::vector<double>> out(count, std::vector<double>(c.dim()));
  for (auto& p : out)
    for (std::size_t i = 0; i < c.dim(); ++i) p[i] = c.is_angle(i) ? angle(rng) : real(rng);
  return out;
}

json matrix_json(const dynamics::Basis& b) {
  json j = json::array();
  for (const auto& row : b) j.push_back(row);
  return j;
}

// ------------------------------------------------------------ commands

Outcome check_twisted(const Manifest& m, const Section& s, Outcome out) {
  const structures::TwistedPoisson t = build_twisted(m, s.name);
  structures::TwistedCheck c = structures::verify_twisted(t);
  out.report = c.report;
  out.results["eq1_residual"] = sym::to_string(c.eq1_residual);
  json jac = json::object();
  for (const auto& [idx, v] : c.jacobiator_residual) {
    std::string key;
    for (int i : idx) key += (key.empty() ? "" : ",") + t.chart().coord(std::size_t(i)).name;
    jac[key] = sym::to_string(v, t.chart());
  }
  out.results["jacobiator_residual"] = jac;
  return out;
}

Outcome check_ncihs(const Manifest& m, const Section& s, Outcome out) {
  const ncihs::IntegrableSystem sys = build_system(m, s.name);
  const auto xs = random_samples(sys.chart(), std::size_t(out.settings.samples), out.settings.seed);
  out.report = ncihs::check_all(sys, xs);
  const ncihs::BaseStructure b = ncihs::induced_base_bracket(sys);
  out.report.merge(b.report, "base");
  out.report.merge(structures::verify_twisted(b.structure).report, "base twisted");
  out.results["pi_base"] = sym::to_string(b.structure.pi());
  out.results["phi_base"] = sym::to_string(b.structure.phi());
  return out;
}

Outcome check_realisation(const Manifest& m, const Section& s, Outcome out) {
  if (s.has("cocycle")) {
    out.report = realization::glue_realisation(build_cocycle(m, s.ref("cocycle"))).certificate;
  } else {
    out.report = realization::verify_ir(build_realisation(m, s.name));
  }
  return out;
}

Outcome check_criterion(const Manifest& m, const Section& s, Outcome out) {
  cohomo::CriterionInput in;
  in.cell = cell_of(s);
  in.quadrature = out.settings.quadrature;
  in.tolerance = out.settings.tolerance;
  if (s.has("cocycle")) {
    const realization::CocycleData d = build_cocycle(m, s.ref("cocycle"));
    const cohomo::ChartForms rel = realization::glued_relative_cocycle(d);
    in.witness = realization::glued_witness(d);
    out.report = cohomo::decide_relative_cocycle(d.lattice.cover(), rel, in);
  } else {
    const cohomo::LatticeBundle l = build_lattice(m, s.ref("lattice"));
    const cohomo::Cover& cover = l.cover();
    in.c_rep = chart_forms(m, s, cover, "c", 2);
    if (const long* f = s.get_if<long>("frame")) in.frame = std::size_t(*f);
    in.characteristic = chart_forms(m, s, cover, "characteristic", 3);
    in.witness = optional_chart_forms(m, s, cover, "witness", 2);
    out.report = cohomo::criterion_check(l, in);
  }
  if (const Check* c = out.report.find("criterion"); c && c->value) out.results["integral"] = *c->value;
  return out;
}

Outcome periods(const Manifest& m, const Section& s, Outcome out) {
  const realization::Realisation r = build_realisation(m, s.ref("realisation"));
  const std::size_t j = realisation_chart(r, s);
  const dynamics::FlowChart c(r, j);
  const Rows& points = s.get<Rows>("point");
  const Rows* expect = s.get_if<Rows>("expect");
  json lattices = json::array();
  for (std::size_t p = 0; p < points.size(); ++p) {
    const dynamics::PeriodLattice l = dynamics::period_lattice(c, points[p], out.settings.flow);
    lattices.push_back(json{{"point", points[p]}, {"basis", matrix_json(l.basis)}, {"residual", l.residual}});
    const std::string name = "lattice at point " + std::to_string(p + 1);
    if (!expect) {
      out.report.add(Check{name, Verdict::pass, "return residual within tolerance", l.residual, out.settings.flow.eps_ret});
      continue;
    }
    double err = expect->size() == l.basis.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; std::isfinite(err) && i < l.basis.size(); ++i) {
      if ((*expect)[i].size() != l.basis[i].size()) err = INFINITY;
      for (std::size_t k = 0; std::isfinite(err) && k < l.basis[i].size(); ++k)
        err = std::max(err, std::abs((*expect)[i][k] - l.basis[i][k]));
    }
    const double tol = out.settings.tolerance;
    out.report.add(Check{name, err <= tol ? Verdict::pass : Verdict::fail, "max deviation from expected basis", err, tol});
  }
  out.results["chart"] = r.charts()[j].id;
  out.results["lattices"] = lattices;
  return out;
}

Outcome monodromy(const Manifest& m, const Section& s, Outcome out) {
  const realization::Realisation r = build_realisation(m, s.ref("realisation"));
  const Rows* f = s.get_if<Rows>("fibre");
  const dynamics::Vec fibre = f ? (*f)[0] : dynamics::Vec(r.fibre_rank(), 0.0);
  const dynamics::MonodromyMatrix mm = dynamics::monodromy(r, s.get<Nodes>("nodes"), fibre, out.settings.flow);
  json mat = json::array();
  for (const auto& row : mm.matrix) mat.push_back(row);
  out.results["matrix"] = mat;
  out.results["residual"] = mm.residual;
  out.results["det"] = mm.det;
  out.report.add(Check{"integer rounding", mm.residual < 1e-3 ? Verdict::pass : Verdict::fail,
                       "largest distance to an integer", mm.residual, 1e-3});
  out.report.add("unimodular", mm.det == 1 || mm.det == -1, "det " + std::to_string(mm.det));
  if (const auto* e = s.get_if<cohomo::IntMatrix>("expect"))
    out.report.add("expected matrix", *e == mm.matrix, mat.dump());
  return out;
}

Outcome flow_pullback(const Manifest& m, const Section& s, Outcome out) {
  const realization::Realisation r = build_realisation(m, s.ref("realisation"));
  const std::size_t j = realisation_chart(r, s);
  const Form& alpha = s.get<Form>("alpha");
  if (!(alpha.chart() == r.charts()[j].base_chart()))
    throw ValidationError("pullback " + s.name + ": 'base' is not the base chart of " + r.charts()[j].id);
  const dynamics::FlowChart c(r, j);
  const long* np = s.get_if<long>("pairs");
  const std::size_t n = np ? std::size_t(std::max(*np, 0L)) : 4;
  std::mt19937_64 rng(static_cast<std::uint64_t>(out.settings.seed));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<dynamics::TangentPair> pairs(n);
  for (auto& p : pairs) {
    p.u.resize(c.dim());
    p.v.resize(c.dim());
    for (auto& x : p.u) x = u(rng);
    for (auto& x : p.v) x = u(rng);
  }
  out.report = dynamics::pullback_identity_numeric(c, alpha, s.get<Rows>("point")[0], pairs, out.settings.flow);
  out.report.merge(realization::pullback_identity_symbolic(r, j, alpha), "symbolic");
  out.results["d_alpha"] = sym::to_string(sym::d(alpha));
  return out;
}

Outcome obstruction(const Manifest& m, const Section& s, Outcome out) {
  const cohomo::Cover cover = build_cover(m, s.ref("cover"));
  cohomo::ObstructionIntegrand in{cover, chart_forms(m, s, cover, "form", 3),
                                  optional_chart_forms(m, s, cover, "upsilon", 2), cell_of(s).value_or(cohomo::SphereCell{})};
  const cohomo::ObstructionResult r = cohomo::obstruction_integral(in, out.settings.quadrature, out.settings.tolerance);
  out.report = r.report;
  out.results["value"] = r.value;
  if (r.stokes) out.results["stokes"] = *r.stokes;
  return out;
}

Outcome construct_glue(const Manifest& m, const Section& s, Outcome out) {
  realization::GluedRealisation g = realization::glue_realisation(build_cocycle(m, s.name));
  out.report = g.certificate;
  out.manifest = serialize(realisation_manifest(g.realisation, s.name + "_glued"));
  return out;
}

Outcome construct_quotient(const Manifest& m, const Section& s, Outcome out) {
  const Section& t = m.at("twisted", s.ref("twisted"));
  const structures::LeafDecomposition l(build_twisted(m, t.name), casimirs_of(m, t.ref("chart")), t.get<Form>("tau"));
  const Form* sp = s.get_if<Form>("s");
  const realization::Realisation r = realization::quotient_model(l, build_lattice(m, s.ref("lattice")), sp ? *sp : l.tau());
  out.report = realization::verify_ir(r);
  out.manifest = serialize(realisation_manifest(r, s.name + "_model"));
  return out;
}

Section cover_section_copy(const Manifest& m, const std::string& cover, std::vector<Section>& deps) {
  const Section& c = m.at("cover", cover);
  for (const auto& id : c.get<Names>("charts")) deps.push_back(m.at("chart", id));
  if (const Names* o = c.get_if<Names>("overlaps"))
    for (const auto& id : *o) deps.push_back(m.at("overlap", id));
  return c;
}

Outcome tias_convert(const Manifest& m, const std::string& target, Outcome out) {
  Manifest built;
  const bool from_atlas = !target.empty() ? m.find("atlas", target) != nullptr : !m.of_kind("atlas").empty();
  if (from_atlas) {
    const Section& a = target_section(m, "atlas", target);
    out.target = a.name;
    const cohomo::Cover cover = build_cover(m, a.ref("cover"));
    std::vector<std::vector<Scalar>> r;
    for (const auto& c : cover.charts()) r.push_back(a.get<Scalars>("submersion", c.id).items);
    std::vector<cohomo::AffineTransition> ts;
    for (const auto& o : m.at("cover", a.ref("cover")).get<Names>("overlaps")) {
      cohomo::AffineTransition t{a.get<cohomo::IntMatrix>("linear", o), {}};
      if (const Scalars* sh = a.get_if<Scalars>("shift", o))
        for (const auto& x : sh->items) t.c.push_back(*x.constant_value());
      else
        t.c.assign(t.a.size(), sym::Rational(0));
      ts.push_back(std::move(t));
    }
    const cohomo::LatticeBundle l = cohomo::lattice_from_atlas(cohomo::TIAStructure(cover, r, ts));
    out.report = l.certificate();
    out.report.add("atlas to lattice", true, "rank " + std::to_string(l.rank()));
    built.sections.push_back(cover_section_copy(m, a.ref("cover"), built.sections));
    Section ls{"lattice", a.name + "_lattice", {{"cover", "", Names{a.ref("cover")}}}, 0};
    for (std::size_t j = 0; j < cover.charts().size(); ++j)
      ls.entries.push_back({"basis", cover.charts()[j].id, Forms{cover.charts()[j].chart, l.basis(j)}});
    for (std::size_t o = 0; o < cover.overlaps().size(); ++o)
      ls.entries.push_back({"transition", m.at("cover", a.ref("cover")).get<Names>("overlaps")[o], l.transition(o)});
    for (std::size_t j = 0; j < cover.charts().size(); ++j)
      ls.entries.push_back({"primitive", cover.charts()[j].id, Scalars{cover.charts()[j].chart, r[j]}});
    built.sections.push_back(std::move(ls));
  } else {
    const Section& ls = target_section(m, "lattice", target);
    out.target = ls.name;
    const cohomo::LatticeBundle l = build_lattice(m, ls.name);
    const cohomo::Cover& cover = l.cover();
    std::vector<std::vector<Scalar>> prim;
    for (const auto& c : cover.charts()) prim.push_back(ls.get<Scalars>("primitive", c.id).items);
    const cohomo::TIAStructure t = cohomo::atlas_from_lattice(l, prim);
    out.report.add("lattice to atlas", true, "rank " + std::to_string(t.rank()));
    out.report.merge(cohomo::lattice_from_atlas(t).certificate(), "round trip");
    built.sections.push_back(cover_section_copy(m, ls.ref("cover"), built.sections));
    Section as{"atlas", ls.name + "_atlas", {{"cover", "", Names{ls.ref("cover")}}}, 0};
    const Names ovs = cover.overlaps().empty() ? Names{} : m.at("cover", ls.ref("cover")).get<Names>("overlaps");
    for (std::size_t j = 0; j < cover.charts().size(); ++j)
      as.entries.push_back({"submersion", cover.charts()[j].id, Scalars{cover.charts()[j].chart, t.submersion(j)}});
    for (std::size_t o = 0; o < ovs.size(); ++o) {
      as.entries.push_back({"linear", ovs[o], t.transition(o).a});
      std::vector<Scalar> c;
      for (const auto& x : t.transition(o).c) c.emplace_back(x);
      as.entries.push_back({"shift", ovs[o], Scalars{cover.overlaps()[o].map.source(), c}});
    }
    built.sections.push_back(std::move(as));
  }
  out.manifest = serialize(built);
  return out;
}

const char* target_kind(const std::string& command) {
  if (command == "check twisted-poisson") return "twisted";
  if (command == "check ncihs") return "system";
  if (command == "check realisation") return "realisation";
  if (command == "check criterion") return "criterion";
  if (command == "check flow-pullback") return "pullback";
  if (command == "periods") return "periods";
  if (command == "monodromy") return "loop";
  if (command == "obstruction") return "integrand";
  if (command == "construct glue") return "cocycle";
  if (command == "construct quotient") return "quotient";
  return nullptr;
}

}  // namespace

Settings resolve_settings(const Manifest& m, const Options& o) {
  Settings s;
  if (const Section* c = m.find("config", "")) {
    if (const Rows* r = c->get_if<Rows>("step")) s.flow.h = (*r)[0][0];
    if (const Rows* r = c->get_if<Rows>("tolerance_return")) s.flow.eps_ret = (*r)[0][0];
    if (const Rows* r = c->get_if<Rows>("t_max")) s.flow.t_max = (*r)[0][0];
    if (const Rows* r = c->get_if<Rows>("tolerance")) s.tolerance = (*r)[0][0];
    if (const long* v = c->get_if<long>("quadrature_order")) s.quadrature.order = int(*v);
    if (const long* v = c->get_if<long>("panels")) s.quadrature.panels = int(*v);
    if (const long* v = c->get_if<long>("samples")) s.samples = int(*v);
    if (const long* v = c->get_if<long>("seed")) s.seed = *v;
  }
  if (o.step) s.flow.h = *o.step;
  if (o.tolerance_return) s.flow.eps_ret = *o.tolerance_return;
  if (o.quadrature_order) s.quadrature.order = *o.quadrature_order;
  if (o.seed) s.seed = *o.seed;
  s.flow.validate();
  if (s.quadrature.order < 1 || s.quadrature.panels < 1) throw ValidationError("quadrature order and panels must be positive");
  if (!(s.tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  if (s.samples < 0) throw ValidationError("sample count must not be negative");
  return s;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "check twisted-poisson", "check ncihs", "check realisation", "check criterion",
      "check flow-pullback",   "periods",     "monodromy",         "obstruction",
      "construct glue",        "construct quotient", "tias convert"};
  return names;
}

Outcome run_command(const Manifest& m, const std::string& command, const Options& o) {
  Outcome out;
  out.command = command;
  out.settings = resolve_settings(m, o);
  if (command == "tias convert") return tias_convert(m, o.target, std::move(out));
  const char* kind = target_kind(command);
  if (!kind) throw ValidationError("unknown command '" + command + "'");
  const Section& s = target_section(m, kind, o.target);
  out.target = s.name;
  if (command == "check twisted-poisson") return check_twisted(m, s, std::move(out));
  if (command == "check ncihs") return check_ncihs(m, s, std::move(out));
  if (command == "check realisation") return check_realisation(m, s, std::move(out));
  if (command == "check criterion") return check_criterion(m, s, std::move(out));
  if (command == "check flow-pullback") return flow_pullback(m, s, std::move(out));
  if (command == "periods") return periods(m, s, std::move(out));
  if (command == "monodromy") return monodromy(m, s, std::move(out));
  if (command == "obstruction") return obstruction(m, s, std::move(out));
  if (command == "construct glue") return construct_glue(m, s, std::move(out));
  return construct_quotient(m, s, std::move(out));
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return 0;
    case Verdict::fail:
      return 1;
    case Verdict::undecided:
      return 2;
  }
  return exit_error;
}

// ------------------------------------------------------------ builders

structures::TwistedPoisson build_twisted(const Manifest& m, const std::string& name) {
  const Section& s = m.at("twisted", name);
  const Form* phi = s.get_if<Form>("phi");
  const Multivector& pi = s.get<Multivector>("pi");
  return structures::TwistedPoisson(pi, phi ? *phi : Form(pi.chart(), 3));
}

ncihs::IntegrableSystem build_system(const Manifest& m, const std::string& name) {
  const Section& s = m.at("system", name);
  return ncihs::IntegrableSystem(s.get<Form>("sigma"), s.get<Names>("integrals"), int(s.get<long>("k")));
}

cohomo::Cover build_cover(const Manifest& m, const std::string& name) {
  const Section& s = m.at("cover", name);
  std::vector<cohomo::CoverChart> charts;
  for (const auto& id : s.get<Names>("charts"))
    charts.push_back({id, m.chart(id), casimirs_of(m, id), domain_of(m.at("chart", id))});
  std::vector<cohomo::Overlap> overlaps;
  if (const Names* o = s.get_if<Names>("overlaps"))
    for (const auto& id : *o) {
      const Section& ov = m.at("overlap", id);
      overlaps.push_back({ov.ref("from"), ov.ref("to"), ov.get<ChartMap>("map"), domain_of(ov)});
    }
  return cohomo::Cover(std::move(charts), std::move(overlaps));
}

cohomo::LatticeBundle build_lattice(const Manifest& m, const std::string& name) {
  const Section& s = m.at("lattice", name);
  cohomo::Cover cover = build_cover(m, s.ref("cover"));
  std::vector<std::vector<Form>> basis;
  for (const auto& c : cover.charts()) basis.push_back(s.get<Forms>("basis", c.id).items);
  std::vector<cohomo::IntMatrix> transitions;
  if (const Names* o = m.at("cover", s.ref("cover")).get_if<Names>("overlaps"))
    for (const auto& id : *o) transitions.push_back(s.get<cohomo::IntMatrix>("transition", id));
  return cohomo::LatticeBundle(std::move(cover), std::move(basis), std::move(transitions));
}

realization::CocycleData build_cocycle(const Manifest& m, const std::string& name) {
  const Section& s = m.at("cocycle", name);
  cohomo::LatticeBundle l = build_lattice(m, s.ref("lattice"));
  const cohomo::Cover& cover = l.cover();
  std::vector<structures::TwistedPoisson> base;
  for (const auto& c : cover.charts()) {
    const Entry* e = s.find("base", c.id);
    if (!e) throw ValidationError("cocycle " + name + ": missing 'base." + c.id + "'");
    base.push_back(build_twisted(m, std::get<Names>(e->value)[0]));
  }
  cohomo::ChartForms tau = chart_forms(m, s, cover, "tau", 2), zeta = chart_forms(m, s, cover, "zeta", 2);
  std::vector<std::vector<Scalar>> kappa;
  const Names* ovs = m.at("cover", m.at("lattice", s.ref("lattice")).ref("cover")).get_if<Names>("overlaps");
  for (std::size_t o = 0; o < cover.overlaps().size(); ++o) {
    const Scalars* k = s.get_if<Scalars>("kappa", (*ovs)[o]);
    kappa.push_back(k ? k->items : std::vector<Scalar>(l.rank()));
  }
  auto eta = optional_chart_forms(m, s, cover, "eta", 2);
  return {std::move(l), std::move(base), std::move(tau), std::move(zeta), std::move(kappa), std::move(eta)};
}

realization::Realisation build_realisation(const Manifest& m, const std::string& name) {
  const Section& s = m.at("realisation", name);
  if (s.has("system")) return realization::one_chart_realisation(build_system(m, s.ref("system")));
  if (s.has("cocycle")) return realization::glue_realisation(build_cocycle(m, s.ref("cocycle"))).realisation;
  if (s.has("quotient")) {
    const Section& q = m.at("quotient", s.ref("quotient"));
    const Section& t = m.at("twisted", q.ref("twisted"));
    const structures::LeafDecomposition l(build_twisted(m, t.name), casimirs_of(m, t.ref("chart")), t.get<Form>("tau"));
    const Form* sp = q.get_if<Form>("s");
    return realization::quotient_model(l, build_lattice(m, q.ref("lattice")), sp ? *sp : l.tau());
  }
  std::vector<realization::RealisationChart> charts;
  for (const auto& id : s.get<Names>("pieces")) {
    const Section& p = m.at("piece", id);
    const Section& t = m.at("twisted", p.ref("base"));
    charts.push_back({id, p.get<Form>("sigma"), build_twisted(m, t.name), casimirs_of(m, t.ref("chart")), domain_of(p)});
  }
  std::vector<realization::FibreTransition> ts;
  if (const Names* tr = s.get_if<Names>("transitions"))
    for (const auto& id : *tr) {
      const Section& f = m.at("fibremap", id);
      ts.push_back({f.ref("from"), f.ref("to"), f.get<ChartMap>("map"), domain_of(f)});
    }
  return realization::Realisation(std::move(charts), std::move(ts));
}

Manifest realisation_manifest(const realization::Realisation& r, const std::string& name) {
  Manifest out;
  Names pieces, maps;
  auto coords = [](const Chart& c) { return Coords(c.coords()); };
  for (const auto& c : r.charts()) {
    const std::string base = c.id + "_base", total = c.id + "_total";
    Section bc{"chart", base, {{"coords", "", coords(c.base_chart())}}, 0};
    if (!c.casimirs.empty()) {
      Names cas;
      for (auto i : c.casimirs) cas.push_back(c.base_chart().coord(i).name);
      bc.entries.push_back({"casimirs", "", cas});
    }
    out.sections.push_back(std::move(bc));
    Section tw{"twisted", base, {{"chart", "", Names{base}}, {"pi", "", c.base.pi()}}, 0};
    if (!c.base.phi().is_zero()) tw.entries.push_back({"phi", "", c.base.phi()});
    out.sections.push_back(std::move(tw));
    out.sections.push_back({"chart", total, {{"coords", "", coords(c.total())}}, 0});
    Section p{"piece", c.id, {{"total", "", Names{total}}, {"base", "", Names{base}}, {"sigma", "", c.sigma}}, 0};
    if (!c.domain.empty()) p.entries.push_back({"domain", "", Scalars{c.base_chart(), c.domain}});
    out.sections.push_back(std::move(p));
    pieces.push_back(c.id);
  }
  for (std::size_t i = 0; i < r.transitions().size(); ++i) {
    const auto& t = r.transitions()[i];
    const std::string id = "psi" + std::to_string(i + 1);
    Section f{"fibremap", id, {{"from", "", Names{t.from}}, {"to", "", Names{t.to}}, {"map", "", t.map}}, 0};
    if (!t.domain.empty()) f.entries.push_back({"domain", "", Scalars{r.chart(t.from).base_chart(), t.domain}});
    out.sections.push_back(std::move(f));
    maps.push_back(id);
  }
  Section rs{"realisation", name, {{"pieces", "", pieces}}, 0};
  if (!maps.empty()) rs.entries.push_back({"transitions", "", maps});
  out.sections.push_back(std::move(rs));
  return out;
}

}  // namespace twp::cli
