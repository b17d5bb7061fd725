#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "twp/dynamics/dynamics.hpp"
#include "twp/structures/structures.hpp"
#include "twp/symcalc/text.hpp"

namespace twp::dynamics {

namespace {

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

Vec axpy(const Vec& x, double a, const Vec& y) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + a * y[i];
  return r;
}

}  // namespace

void FlowConfig::validate() const {
  if (!(h > 0.0)) throw ValidationError("step size must be positive");
  if (!(eps_ret > 0.0)) throw ValidationError("return tolerance must be positive");
  if (!(t_max > 0.0)) throw ValidationError("search horizon must be positive");
}

FlowChart::FlowChart(const realization::Realisation& r, std::size_t chart)
    : chart_(r.charts().at(chart)),
      dim_(chart_.total().dim()),
      base_dim_(chart_.base_dim()),
      sigma_(chart_.sigma) {
  for (const auto& f : chart_.domain) domain_.emplace_back(f);
}

Vec FlowChart::field(std::span<const double> m, std::span<const double> base_covector) const {
  const Vec s = sigma_(m);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> S(s.data(), long(dim_),
                                                                                            long(dim_));
  Eigen::VectorXd a = Eigen::VectorXd::Zero(long(dim_));
  for (std::size_t i = 0; i < base_dim_; ++i) a(long(i)) = base_covector[i];
  // i(X) sigma = a reads S^T X = a.
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(S.transpose());
  if (!(std::abs(lu.determinant()) > 1e-14))
    throw DegeneracyError("sigma is degenerate along the flow", Vec(m.begin(), m.end()));
  const Eigen::VectorXd x = lu.solve(a);
  return Vec(x.data(), x.data() + x.size());
}

bool FlowChart::in_domain(std::span<const double> m) const {
  const auto base = m.first(base_dim_);
  return std::all_of(domain_.begin(), domain_.end(), [&](const sym::CompiledScalar& f) { return f(base) > 0.0; });
}

double FlowChart::sigma(std::span<const double> m, std::span<const double> u, std::span<const double> v) const {
  const Vec s = sigma_(m);
  double r = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r += u[i] * s[i * dim_ + j] * v[j];
  return r;
}

CovectorField FlowChart::casimir_covector(const Vec& c) const {
  if (c.size() != casimirs().size())
    throw ValidationError("covector needs " + std::to_string(casimirs().size()) + " Casimir components");
  Vec full(base_dim_, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) full[casimirs()[i]] = c[i];
  return [full](std::span<const double>) { return full; };
}

CovectorField FlowChart::form_covector(const Form& alpha) const {
  if (alpha.degree() != 1 || !(alpha.chart() == chart_.base_chart()))
    throw ValidationError("alpha must be a 1-form on the base chart");
  if (!structures::vanishes_on_leaves(alpha, casimirs())) throw ValidationError("alpha is not conormal");
  std::vector<std::pair<std::size_t, sym::CompiledScalar>> parts;
  for (const auto& [idx, c] : alpha.coefficients()) parts.emplace_back(std::size_t(idx[0]), sym::CompiledScalar(c));
  const std::size_t n = base_dim_;
  return [parts, n](std::span<const double> x) {
    Vec out(n, 0.0);
    for (const auto& [i, f] : parts) out[i] = f(x);
    return out;
  };
}

Vec rk4_step(const FlowChart& c, const CovectorField& alpha, const Vec& m, double h) {
  const std::size_t nb = c.base_dim();
  auto f = [&](const Vec& y) { return c.field(y, alpha(std::span<const double>(y.data(), nb))); };
  const Vec k1 = f(m);
  const Vec k2 = f(axpy(m, h / 2, k1));
  const Vec k3 = f(axpy(m, h / 2, k2));
  const Vec k4 = f(axpy(m, h, k3));
  Vec out = m;
  for (std::size_t i = 0; i < m.size(); ++i) out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

FlowResult integrate_flow(const FlowChart& c, const CovectorField& alpha, const Vec& m0, double t, const FlowConfig& cfg) {
  cfg.validate();
  if (m0.size() != c.dim()) throw ValidationError("start point has the wrong dimension");
  const std::size_t steps = t == 0.0 ? 0 : std::max<std::size_t>(1, std::size_t(std::llround(std::abs(t) / cfg.h)));
  const double h = steps ? t / double(steps) : 0.0;
  const std::size_t nb = c.base_dim();
  Vec m = m0;
  if (!c.in_domain(m)) throw DomainEscape("start point outside the chart domain", m, 0.0);
  for (std::size_t s = 0; s < steps; ++s) {
    m = rk4_step(c, alpha, m, h);
    if (!c.in_domain(m)) throw DomainEscape("trajectory leaves the chart domain", m, double(s + 1) * h);
  }
  double drift = 0.0;
  for (std::size_t i = 0; i < nb; ++i) drift = std::max(drift, std::abs(m[i] - m0[i]));
  return {m, drift, steps};
}

double return_distance(const FlowChart& c, std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  const auto& total = c.chart().total();
  for (std::size_t i = 0; i < c.dim(); ++i) {
    const double diff = a[i] - b[i];
    d = std::max(d, total.is_angle(i) ? std::abs(diff - std::round(diff)) : std::abs(diff));
  }
  return d;
}

Report commuting_flow_check(const FlowChart& c, const Vec& a, const Vec& b, const Vec& m0, const FlowConfig& cfg) {
  const CovectorField fa = c.casimir_covector(a), fb = c.casimir_covector(b);
  const Vec ab = integrate_flow(c, fa, integrate_flow(c, fb, m0, 1.0, cfg).point, 1.0, cfg).point;
  const Vec ba = integrate_flow(c, fb, integrate_flow(c, fa, m0, 1.0, cfg).point, 1.0, cfg).point;
  const double dist = return_distance(c, ab, ba);
  const double tol = 100.0 * std::pow(cfg.h, 4);
  Report r;
  r.subject = "commuting flows";
  r.add(Check{"commuting flows", dist <= tol ? Verdict::pass : Verdict::fail, "distance " + sci(dist), dist, tol});
  return r;
}

Report pullback_identity_numeric(const FlowChart& c, const Form& alpha, const Vec& m0, const std::vector<TangentPair>& pairs,
                                 const FlowConfig& cfg, double delta, double tolerance) {
  const CovectorField field = c.form_covector(alpha);
  const std::size_t n = c.dim();
  auto flow = [&](const Vec& m) { return integrate_flow(c, field, m, 1.0, cfg).point; };
  auto push = [&](const Vec& u) {
    const Vec plus = flow(axpy(m0, delta, u)), minus = flow(axpy(m0, -delta, u));
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (plus[i] - minus[i]) / (2.0 * delta);
    return out;
  };
  const Vec m1 = flow(m0);
  const Form da = sym::lift(sym::d(alpha), c.chart().total());
  const sym::CompiledMatrix dalpha(da);
  const Vec dam = dalpha(m0);

  Report r;
  r.subject = "flow pullback identity (numeric)";
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& [u, v] = pairs[p];
    if (u.size() != n || v.size() != n) throw ValidationError("tangent vectors have the wrong dimension");
    const Vec pu = push(u), pv = push(v);
    for (double x : pu)
      if (!std::isfinite(x)) throw NumericalError("finite difference of the flow map is not finite");
    const double lhs = c.sigma(m1, pu, pv) - c.sigma(m0, u, v);
    double rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rhs += u[i] * dam[i * n + j] * v[j];
    const double err = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1.0);
    r.add(Check{"pair " + std::to_string(p + 1), err < tolerance ? Verdict::pass : Verdict::fail,
                "lhs " + sci(lhs) + ", p* d alpha " + sci(rhs), err, tolerance});
  }
  return r;
}

OrderCheck rk4_order_check(const FlowChart& c, const Vec& lambda, const Vec& m0, double h) {
  const CovectorField f = c.casimir_covector(lambda);
  FlowConfig coarse, fine;
  coarse.h = h;
  fine.h = h / 2.0;
  OrderCheck o;
  o.coarse = return_distance(c, integrate_flow(c, f, m0, 1.0, coarse).point, m0);
  o.fine = return_distance(c, integrate_flow(c, f, m0, 1.0, fine).point, m0);
  o.ratio = o.fine > 0.0 ? o.coarse / o.fine : INFINITY;
  return o;
}

}  // namespace twp::dynamics
