#include "twp/cohomo/obstruction.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "twp/symcalc/numeric.hpp"
#include "twp/symcalc/text.hpp"

namespace twp::cohomo {

namespace {

Scalar v(int i) { return Scalar::variable(i); }

// Golub-Welsch nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw ValidationError("quadrature order must be positive");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    j(i, i - 1) = j(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[std::size_t(i)] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    w[std::size_t(i)] = 2.0 * v0 * v0;
  }
  return {x, w};
}

struct Rule {
  std::vector<double> x, w;
};

// Composite rule over consecutive segments, `panels` panels each.
Rule composite(const std::vector<double>& breaks, int panels, int order) {
  auto [gx, gw] = gauss_legendre(order);
  Rule r;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double h = (breaks[s + 1] - breaks[s]) / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = breaks[s] + p * h;
      for (std::size_t i = 0; i < gx.size(); ++i) {
        r.x.push_back(lo + 0.5 * h * (gx[i] + 1.0));
        r.w.push_back(0.5 * h * gw[i]);
      }
    }
  }
  return r;
}

double chart_integral(const Form& w, bool north, const SphereCell& cell, int panels, int order) {
  if (w.chart().dim() != 3) throw ValidationError("cell integrand must live on a 3-dimensional chart");
  if (w.degree() != 3) throw DegreeError("cell integrand must be a 3-form");
  const sym::CompiledScalar f(w.coefficient({0, 1, 2}));
  // Radial extent of the chart's support and the switching radii in its own coordinate.
  std::vector<double> breaks =
      north ? std::vector<double>{0.0, cell.r0, cell.r1} : std::vector<double>{0.0, 1.0 / cell.r1, 1.0 / cell.r0};
  const Rule rr = composite(breaks, panels, order);
  const Rule rt = composite({0.0, 2.0 * M_PI}, 2 * panels, order);
  const Rule rz = composite({cell.t0, cell.t1}, panels, order);
  std::vector<double> ct(rt.x.size()), st(rt.x.size());
  for (std::size_t i = 0; i < rt.x.size(); ++i) {
    ct[i] = std::cos(rt.x[i]);
    st[i] = std::sin(rt.x[i]);
  }
  double total = 0.0;
  double x[3];
  for (std::size_t a = 0; a < rr.x.size(); ++a) {
    const double r = rr.x[a];
    const double weight = north ? north_weight(r, cell.r0, cell.r1)
                                : (r == 0.0 ? 1.0 : 1.0 - north_weight(1.0 / r, cell.r0, cell.r1));
    if (weight == 0.0) continue;
    double ring = 0.0;
    for (std::size_t b = 0; b < rt.x.size(); ++b) {
      x[0] = r * ct[b];
      x[1] = r * st[b];
      double line = 0.0;
      for (std::size_t c = 0; c < rz.x.size(); ++c) {
        x[2] = rz.x[c];
        line += rz.w[c] * f(std::span<const double>(x, 3));
      }
      ring += rt.w[b] * line;
    }
    total += rr.w[a] * weight * r * ring;
  }
  return total;
}

std::string fixed(double x) {
  std::ostringstream s;
  s.precision(9);
  s << std::fixed << x;
  return s.str();
}

}  // namespace

Cover sphere_interval_cover() {
  using sym::CoordKind;
  Chart n({{"u", CoordKind::real}, {"v", CoordKind::real}, {"t", CoordKind::real}});
  Chart s({{"x", CoordKind::real}, {"y", CoordKind::real}, {"t", CoordKind::real}});
  // The inversion is its own inverse up to renaming.
  auto inversion = [](const Chart& from, const Chart& to) {
    const Scalar r2 = v(0) * v(0) + v(1) * v(1);
    std::vector<sym::CoordinateImage> im(3);
    im[0].expr = v(0) / r2;
    im[1].expr = -v(1) / r2;
    im[2].expr = v(2);
    return sym::ChartMap(from, to, im);
  };
  return Cover({{"N", n, {2}}, {"S", s, {2}}}, {{"N", "S", inversion(n, s)}, {"S", "N", inversion(s, n)}});
}

Scalar sphere_density(int p, int q) {
  const Scalar r2 = Scalar(1) + v(p) * v(p) + v(q) * v(q);
  return Scalar(1) / (Scalar::pi() * r2 * r2);
}

ChartForms sphere_area_form(const Cover& cover) {
  ChartForms out;
  for (const auto& c : cover.charts()) out.push_back(Form::basis(c.chart, {0, 1}, sphere_density(0, 1)));
  return out;
}

double north_weight(double r, double r0, double r1) {
  if (r <= r0) return 1.0;
  if (r >= r1) return 0.0;
  const double s = (r - r0) / (r1 - r0);
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

CellIntegral integrate_cell(const Cover& cover, const ChartForms& w, const SphereCell& cell, const QuadratureConfig& q) {
  if (cover.charts().size() != 2 || w.size() != 2) throw ValidationError("sphere cell needs exactly two charts");
  if (!(cell.r0 > 0.0 && cell.r1 > cell.r0)) throw ValidationError("partition radii must satisfy 0 < r0 < r1");
  if (cell.orientation != 1 && cell.orientation != -1) throw ValidationError("orientation must be +1 or -1");
  auto at = [&](int panels) {
    return cell.orientation *
           (chart_integral(w[0], true, cell, panels, q.order) + chart_integral(w[1], false, cell, panels, q.order));
  };
  return {at(q.panels), at(2 * q.panels)};
}

ObstructionResult obstruction_integral(const ObstructionIntegrand& in, const QuadratureConfig& q, double tolerance) {
  ObstructionResult out;
  out.report.subject = "obstruction integral";
  for (std::size_t j = 0; j < in.form.size(); ++j)
    if (!sym::d(in.form[j]).is_zero()) throw ValidationError("integrand is not closed on chart " + in.cover.charts()[j].id);
  out.report.merge(check_overlap_consistency(in.cover, in.form, "integrand"));
  const CellIntegral ci = integrate_cell(in.cover, in.form, in.cell, q);
  const double diff = std::abs(ci.value - ci.refined);
  if (!(diff <= tolerance)) throw NumericalError("quadrature does not converge under refinement (change " + fixed(diff) + ")");
  out.value = ci.refined;
  out.report.add(Check{"integral", Verdict::pass, fixed(out.value), out.value, tolerance});
  if (in.upsilon) {
    ChartForms dy;
    for (std::size_t j = 0; j < in.upsilon->size(); ++j) {
      if (!vanishes_on_leaves(in.cover.charts()[j], (*in.upsilon)[j]))
        throw ValidationError("upsilon does not vanish on leaves on chart " + in.cover.charts()[j].id);
      dy.push_back(sym::d((*in.upsilon)[j]));
    }
    out.report.merge(check_overlap_consistency(in.cover, *in.upsilon, "upsilon"));
    const CellIntegral s = integrate_cell(in.cover, dy, in.cell, q);
    out.stokes = s.refined;
    const bool ok = std::abs(s.refined) <= tolerance;
    out.report.add(Check{"stokes control", ok ? Verdict::pass : Verdict::fail, fixed(s.refined), s.refined, tolerance});
  }
  return out;
}

Report decide_relative_cocycle(const Cover& cover, const ChartForms& r, const CriterionInput& in) {
  Report rep;
  rep.subject = "criterion";
  bool zero = true;
  std::string text;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (!vanishes_on_leaves(cover.charts()[j], r[j]))
      throw ValidationError("relative cocycle does not vanish on leaves on chart " + cover.charts()[j].id);
    if (!r[j].is_zero()) zero = false;
    text += (j ? "; " : "") + cover.charts()[j].id + ": " + sym::to_string(r[j]);
  }
  rep.add(Check{"relative cocycle", Verdict::pass, text, std::nullopt, std::nullopt});
  if (zero) {
    rep.add(Check{"criterion", Verdict::pass, "cocycle vanishes identically (zero witness)", std::nullopt, std::nullopt});
    return rep;
  }
  if (in.witness) {
    const ChartForms& u = *in.witness;
    if (u.size() != r.size()) throw ValidationError("witness needs a form per chart");
    bool ok = true;
    std::string why;
    for (std::size_t j = 0; j < r.size() && ok; ++j) {
      if (!vanishes_on_leaves(cover.charts()[j], u[j])) {
        ok = false;
        why = "witness does not vanish on leaves on chart " + cover.charts()[j].id;
      } else if (!(sym::d(u[j]) == r[j])) {
        ok = false;
        why = "d(witness) differs from the cocycle on chart " + cover.charts()[j].id;
      }
    }
    if (ok && !check_overlap_consistency(cover, u, "witness").passed()) {
      ok = false;
      why = "witness does not agree on overlaps";
    }
    rep.add(Check{"witness", ok ? Verdict::pass : Verdict::undecided, ok ? "d(upsilon) = cocycle" : "rejected: " + why, std::nullopt,
                  std::nullopt});
    if (ok) {
      rep.add(Check{"criterion", Verdict::pass, "exact in the relative complex", std::nullopt, std::nullopt});
      return rep;
    }
  }
  if (in.cell) {
    const CellIntegral ci = integrate_cell(cover, r, *in.cell, in.quadrature);
    const double diff = std::abs(ci.value - ci.refined);
    if (diff > in.tolerance) {
      rep.add(Check{"criterion", Verdict::undecided, "cell quadrature did not settle", ci.refined, in.tolerance});
      return rep;
    }
    if (std::abs(ci.refined) > in.tolerance) {
      rep.add(Check{"criterion", Verdict::fail, "cell integral " + fixed(ci.refined) + " is nonzero", ci.refined,
                    in.tolerance});
      return rep;
    }
    rep.add(Check{"criterion", Verdict::undecided, "cell integral vanishes; no exactness witness", ci.refined,
                  in.tolerance});
    return rep;
  }
  rep.add(Check{"criterion", Verdict::undecided, "no witness and no cell supplied", std::nullopt, std::nullopt});
  return rep;
}

Report criterion_check(const LatticeBundle& l, const CriterionInput& in) {
  const ChartForms dd = dazord_delzant_trivial(l, in.c_rep, in.frame);
  if (in.characteristic.size() != dd.size()) throw ValidationError("characteristic residual needs a form per chart");
  ChartForms r;
  for (std::size_t j = 0; j < dd.size(); ++j) r.push_back(dd[j] - in.characteristic[j]);
  return decide_relative_cocycle(l.cover(), r, in);
}

}  // namespace twp::cohomo
