#include "twp/ncihs/ncihs.hpp"

#include <algorithm>
#include <set>

#include "twp/symcalc/text.hpp"

namespace twp::ncihs {

namespace {

std::vector<std::size_t> resolve(const Chart& chart, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  std::set<std::size_t> seen;
  for (const auto& n : names) {
    auto i = chart.find(n);
    if (!i) throw ValidationError("fibration names unknown coordinate " + n);
    if (!seen.insert(*i).second) throw ValidationError("fibration lists " + n + " twice");
    out.push_back(*i);
  }
  return out;
}

Chart base_of(const Chart& total, const std::vector<std::size_t>& idx) {
  std::vector<sym::Coordinate> c;
  for (auto i : idx) c.push_back(total.coord(i));
  return Chart(c);
}

std::string name(const IntegrableSystem& s, std::size_t total_index) { return s.chart().coord(total_index).name; }

}  // namespace

IntegrableSystem::IntegrableSystem(Form sigma, std::vector<std::string> fibration, int k)
    : sigma_(std::move(sigma)),
      k_(k),
      integrals_(resolve(sigma_.chart(), fibration)),
      base_(base_of(sigma_.chart(), integrals_)),
      almost_(sigma_),
      structure_(structures::twisted_from_form(almost_)) {
  const std::size_t dim = chart().dim();
  if (k < 1 || k > n()) throw ValidationError("fibre dimension must satisfy 1 <= k <= n");
  if (integrals_.size() != dim - static_cast<std::size_t>(k))
    throw ValidationError("fibration must list 2n-k coordinates");
  for (std::size_t i = 0; i < dim; ++i)
    if (std::find(integrals_.begin(), integrals_.end(), i) == integrals_.end()) {
      if (!chart().is_angle(i)) throw ValidationError("omitted coordinate " + chart().coord(i).name + " is not an angle");
      fibre_.push_back(i);
    }
}

ChartMap IntegrableSystem::projection() const {
  std::vector<sym::CoordinateImage> images;
  for (auto i : integrals_) {
    sym::CoordinateImage im;
    if (chart().is_angle(i))
      im.angle.terms = {{i, 1}};
    else
      im.expr = Scalar::variable(static_cast<int>(i));
    images.push_back(std::move(im));
  }
  return ChartMap(chart(), base_, std::move(images));
}

ChartMap IntegrableSystem::zero_section() const {
  std::vector<sym::CoordinateImage> images(chart().dim());
  for (std::size_t b = 0; b < integrals_.size(); ++b) {
    auto& im = images[integrals_[b]];
    if (chart().is_angle(integrals_[b]))
      im.angle.terms = {{b, 1}};
    else
      im.expr = Scalar::variable(static_cast<int>(b));
  }
  return ChartMap(base_, chart(), std::move(images));
}

Report check_nc1_strongly_hamiltonian(const IntegrableSystem& s) {
  Report r;
  r.subject = "NC1 strongly hamiltonian";
  const Form dsigma = s.structure().phi();
  for (int j = 0; j < s.k(); ++j) {
    const std::size_t f = s.integrals()[std::size_t(j)];
    Form res = sym::interior(s.hamiltonian(Scalar::variable(int(f))), dsigma);
    r.add("i(X_" + name(s, f) + ") d sigma = 0", res.is_zero(), res.is_zero() ? "" : "residual " + sym::to_string(res));
  }
  return r;
}

Report check_nc2_commutation(const IntegrableSystem& s) {
  Report r;
  r.subject = "NC2 commutation";
  const auto& f = s.integrals();
  for (int j = 0; j < s.k(); ++j)
    for (std::size_t l = 0; l < f.size(); ++l) {
      if (l == std::size_t(j)) continue;
      if (l < std::size_t(j)) continue;  // pairs among the first k are visited once
      Scalar b = s.bracket(Scalar::variable(int(f[std::size_t(j)])), Scalar::variable(int(f[l])));
      r.add("{" + name(s, f[std::size_t(j)]) + "," + name(s, f[l]) + "} = 0", b.is_zero(),
            b.is_zero() ? "" : "bracket " + sym::to_string(b, s.chart()));
    }
  return r;
}

Report check_nc3_submersion(const IntegrableSystem& s, const std::vector<std::vector<double>>& xs) {
  Report r;
  r.subject = "NC3 submersion";
  const std::size_t rows = s.integrals().size(), cols = s.chart().dim();
  // Jacobian of a coordinate projection: one unit entry per row.
  std::vector<double> jac(rows * cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) jac[i * cols + s.integrals()[i]] = 1.0;
  const int rank = structures::numeric_rank(jac, rows, cols);
  const bool ok = rank == int(rows);
  for (std::size_t p = 0; p < xs.size(); ++p) {
    Check c{"rank at sample " + std::to_string(p), ok ? Verdict::pass : Verdict::fail,
            "rank " + std::to_string(rank) + " of " + std::to_string(rows), double(rank), std::nullopt};
    r.add(std::move(c));
  }
  if (xs.empty()) r.add("rank", ok, "rank " + std::to_string(rank) + " of " + std::to_string(rows));
  return r;
}

Report check_all(const IntegrableSystem& s, const std::vector<std::vector<double>>& xs) {
  Report r;
  r.subject = "NCIHS";
  r.merge(check_nc1_strongly_hamiltonian(s), "NC1: ");
  r.merge(check_nc2_commutation(s), "NC2: ");
  r.merge(check_nc3_submersion(s, xs), "NC3: ");
  r.add("NC4 compact fibres", true, "fibre coordinates are angles");
  r.add("NC5 image is a manifold", true, "coordinate projection of a chart");
  return r;
}

BaseStructure induced_base_bracket(const IntegrableSystem& s) {
  const auto& f = s.integrals();
  const std::span<const std::size_t> fibre(s.fibre());
  const ChartMap section = s.zero_section();
  const ChartMap proj = s.projection();
  Multivector pi(s.base_chart(), 2);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      Scalar b = s.bracket(Scalar::variable(int(f[i])), Scalar::variable(int(f[j])));
      for (auto a : fibre)
        if (b.depends_on(int(a)))
          throw ValidationError("bracket {" + name(s, f[i]) + "," + name(s, f[j]) + "} depends on fibre coordinate " +
                                name(s, a));
      pi.accumulate({int(i), int(j)}, sym::pullback(b, section));
    }
  const Form dsigma = s.structure().phi();
  if (sym::touches(dsigma, fibre) || !sym::independent_of(dsigma, fibre))
    throw ValidationError("d sigma is not basic: " + sym::to_string(dsigma));
  Form phi = sym::pullback(dsigma, section);

  BaseStructure out{structures::TwistedPoisson(pi, phi), Report{}};
  out.report.subject = "induced base structure";
  out.report.add("brackets basic", true, "no bracket of base coordinates depends on fibre coordinates");
  const bool pulled = sym::pullback(phi, proj) == dsigma;
  out.report.add("F*phi_P = d sigma", pulled);
  auto tw = structures::verify_twisted(out.structure);
  out.report.merge(tw.report, "twisted");
  return out;
}

Chart normal_form_chart(int k, int n) {
  std::vector<sym::Coordinate> c;
  auto indexed = [](const std::string& stem, int i, int count) {
    return count == 1 && stem != "b" ? stem : stem + std::to_string(i + 1);
  };
  for (int l = 0; l < k; ++l) c.push_back({indexed("a", l, k), sym::CoordKind::real});
  for (int u = 0; u < 2 * (n - k); ++u) c.push_back({"b" + std::to_string(u + 1), sym::CoordKind::real});
  for (int l = 0; l < k; ++l) c.push_back({indexed("alpha", l, k), sym::CoordKind::angle});
  return Chart(c);
}

Form normal_form_sigma(const NormalFormSpec& spec) {
  const int k = spec.k, n = spec.n, m = 2 * (n - k);
  if (k < 1 || k > n) throw ValidationError("normal form needs 1 <= k <= n");
  const Chart chart = normal_form_chart(k, n);
  auto check_shape = [](const ScalarMatrix& x, int rows, int cols, const char* what) {
    if (x.empty()) return;
    if (int(x.size()) != rows) throw ValidationError(std::string("block ") + what + " has wrong shape");
    for (const auto& row : x)
      if (int(row.size()) != cols) throw ValidationError(std::string("block ") + what + " has wrong shape");
  };
  check_shape(spec.a, k, k, "A");
  check_shape(spec.b, k, m, "B");
  check_shape(spec.c, m, m, "C");
  auto antisymmetric = [](const ScalarMatrix& x) {
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j)
        if (!(x[i][j] == -x[j][i])) return false;
    return true;
  };
  if (!antisymmetric(spec.a)) throw ValidationError("block A is not antisymmetric");
  if (!antisymmetric(spec.c)) throw ValidationError("block C is not antisymmetric");
  std::vector<std::size_t> actions(static_cast<std::size_t>(k));
  for (int l = 0; l < k; ++l) actions[std::size_t(l)] = std::size_t(l);
  for (const auto& row : spec.a)
    for (const auto& e : row)
      for (std::size_t v = std::size_t(k); v < chart.dim(); ++v)
        if (e.depends_on(int(v))) throw ValidationError("block A may depend only on the actions");
  std::vector<std::size_t> angles;
  for (int l = 0; l < k; ++l) angles.push_back(std::size_t(k + m + l));
  for (const auto* blk : {&spec.b, &spec.c})
    for (const auto& row : *blk)
      for (const auto& e : row)
        for (auto v : angles)
          if (e.depends_on(int(v))) throw ValidationError("blocks B and C may not depend on angles");

  Form sigma(chart, 2);
  for (int l = 0; l < k; ++l) sigma.accumulate({l, k + m + l}, Scalar(1));
  for (int l = 0; l < k && !spec.a.empty(); ++l)
    for (int r = l + 1; r < k; ++r) sigma.accumulate({l, r}, spec.a[std::size_t(l)][std::size_t(r)]);
  for (int l = 0; l < k && !spec.b.empty(); ++l)
    for (int u = 0; u < m; ++u) sigma.accumulate({l, k + u}, spec.b[std::size_t(l)][std::size_t(u)]);
  for (int u = 0; u < m && !spec.c.empty(); ++u)
    for (int v = u + 1; v < m; ++v) sigma.accumulate({k + u, k + v}, spec.c[std::size_t(u)][std::size_t(v)]);
  return sigma;
}

IntegrableSystem build_normal_form(const NormalFormSpec& spec) {
  Form sigma = normal_form_sigma(spec);
  std::vector<std::string> f;
  const Chart& chart = sigma.chart();
  for (std::size_t i = 0; i < chart.dim(); ++i)
    if (!chart.is_angle(i)) f.push_back(chart.coord(i).name);
  IntegrableSystem s(std::move(sigma), std::move(f), spec.k);
  if (!check_nc1_strongly_hamiltonian(s).passed() || !check_nc2_commutation(s).passed() ||
      !check_nc3_submersion(s, {}).passed())
    throw ValidationError("normal form system fails its self-test");
  return s;
}

}  // namespace twp::ncihs
