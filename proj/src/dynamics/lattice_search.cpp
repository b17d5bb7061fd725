#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "twp/dynamics/dynamics.hpp"

namespace twp::dynamics {

namespace {

using Mat = Eigen::MatrixXd;

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

std::string point_text(const Vec& x) {
  std::ostringstream s;
  s.precision(6);
  s << "(";
  for (std::size_t i = 0; i < x.size(); ++i) s << (i ? ", " : "") << x[i];
  s << ")";
  return s.str();
}

Mat to_mat(const Basis& b) {
  Mat m(long(b.size()), long(b.empty() ? 0 : b[0].size()));
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b[i].size(); ++j) m(long(i), long(j)) = b[i][j];
  return m;
}

Basis to_basis(const Mat& m) {
  Basis b(std::size_t(m.rows()), Vec(std::size_t(m.cols())));
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) b[std::size_t(i)][std::size_t(j)] = m(i, j);
  return b;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void positive_leading(Vec& v) {
  for (double x : v)
    if (std::abs(x) > 1e-9) {
      if (x < 0)
        for (double& y : v) y = -y;
      return;
    }
}

std::size_t leading_index(const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-9) return i;
  return v.size();
}

void require_compact(const FlowChart& c) {
  const auto& total = c.chart().total();
  for (auto f : c.chart().fibre())
    if (!total.is_angle(f)) throw NumericalError("fibre not compact within horizon");
  if (c.casimirs().size() != c.chart().fibre().size())
    throw ValidationError("period lattice needs as many Casimirs as fibre angles");
}

// Unwrapped fibre displacement of phi^1 for the covector t in the Casimir frame.
Vec displacement(const FlowChart& c, const Vec& t, const Vec& m0, const FlowConfig& cfg) {
  const Vec m1 = integrate_flow(c, c.casimir_covector(t), m0, 1.0, cfg).point;
  Vec out;
  for (auto f : c.chart().fibre()) out.push_back(m1[f] - m0[f]);
  return out;
}

double lattice_residual(const FlowChart& c, const Basis& b, const Vec& m0, const FlowConfig& cfg) {
  double r = 0.0;
  for (const auto& row : b)
    r = std::max(r, return_distance(c, integrate_flow(c, c.casimir_covector(row), m0, 1.0, cfg).point, m0));
  return r;
}

PeriodLattice finish(const FlowChart& c, Basis b, const Vec& m0, const FlowConfig& cfg) {
  PeriodLattice out;
  out.x0.assign(m0.begin(), m0.begin() + long(c.base_dim()));
  out.basis = canonical_basis(std::move(b));
  const double det = to_mat(out.basis).determinant();
  if (!(std::abs(det) > 1e-6)) throw NumericalError("rank-deficient returns: " + point_text(out.basis[0]));
  out.residual = lattice_residual(c, out.basis, m0, cfg);
  if (!(out.residual <= cfg.eps_ret))
    throw NumericalError("return residual " + sci(out.residual) + " exceeds tolerance " + sci(cfg.eps_ret));
  return out;
}

PeriodLattice scan_one(const FlowChart& c, const Vec& m0, const FlowConfig& cfg) {
  const CovectorField e = c.casimir_covector({1.0});
  const std::size_t f = c.chart().fibre()[0];
  Vec m = m0;
  double t = 0.0;
  while (t < cfg.t_max) {
    const Vec next = rk4_step(c, e, m, cfg.h);
    if (std::abs(next[f] - m0[f]) >= 1.0) {
      double lo = 0.0, hi = cfg.h;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(rk4_step(c, e, m, mid)[f] - m0[f]) >= 1.0) hi = mid;
        else lo = mid;
      }
      return finish(c, {{t + 0.5 * (lo + hi)}}, m0, cfg);
    }
    m = next;
    t += cfg.h;
  }
  throw NumericalError("fibre not compact within horizon");
}

PeriodLattice newton_two(const FlowChart& c, const Vec& m0, const FlowConfig& cfg) {
  const std::size_t k = 2;
  const auto fibre = c.chart().fibre();
  Mat j0 = Mat::Zero(long(k), long(k));
  for (std::size_t u = 0; u < k; ++u) {
    Vec base(c.base_dim(), 0.0);
    base[c.casimirs()[u]] = 1.0;
    const Vec x = c.field(m0, base);
    for (std::size_t a = 0; a < k; ++a) j0(long(a), long(u)) = x[fibre[a]];
  }
  if (!(std::abs(j0.determinant()) > 1e-12)) throw NumericalError("fibre generators are dependent at the start point");
  Basis rows;
  for (std::size_t u = 0; u < k; ++u) {
    Eigen::VectorXd target = Eigen::VectorXd::Zero(long(k));
    target(long(u)) = 1.0;
    Eigen::VectorXd t = j0.lu().solve(target);
    for (int it = 0; it < 30; ++it) {
      const Vec tv(t.data(), t.data() + k);
      const Vec th = displacement(c, tv, m0, cfg);
      Eigen::VectorXd r = Eigen::VectorXd::Zero(long(k));
      for (std::size_t a = 0; a < k; ++a) r(long(a)) = th[a] - target(long(a));
      if (r.cwiseAbs().maxCoeff() < 1e-12) break;
      const double delta = 1e-6 * std::max(1.0, t.cwiseAbs().maxCoeff());
      Mat jac = Mat::Zero(long(k), long(k));
      for (std::size_t b = 0; b < k; ++b) {
        Vec p = tv, q = tv;
        p[b] += delta;
        q[b] -= delta;
        const Vec dp = displacement(c, p, m0, cfg), dq = displacement(c, q, m0, cfg);
        for (std::size_t a = 0; a < k; ++a) jac(long(a), long(b)) = (dp[a] - dq[a]) / (2.0 * delta);
      }
      t -= jac.lu().solve(r);
      if (!(t.cwiseAbs().maxCoeff() <= cfg.t_max)) throw NumericalError("fibre not compact within horizon");
    }
    rows.push_back(Vec(t.data(), t.data() + k));
  }
  return finish(c, rows, m0, cfg);
}

// Express `b` in the basis `l` and round to integers.
std::pair<Mat, double> match(const Mat& b, const Mat& l) {
  const Mat coeff = b * l.inverse();
  const Mat rounded = coeff.array().round().matrix();
  return {rounded, (coeff - rounded).cwiseAbs().maxCoeff()};
}

}  // namespace

Basis canonical_basis(Basis b) {
  if (b.size() == 2) {
    for (int it = 0; it < 100; ++it) {
      if (dot(b[0], b[0]) > dot(b[1], b[1])) std::swap(b[0], b[1]);
      const double mu = std::round(dot(b[0], b[1]) / dot(b[0], b[0]));
      if (mu == 0.0) break;
      for (std::size_t i = 0; i < b[1].size(); ++i) b[1][i] -= mu * b[0][i];
    }
  }
  for (auto& row : b) positive_leading(row);
  std::sort(b.begin(), b.end(), [](const Vec& x, const Vec& y) {
    const double nx = dot(x, x), ny = dot(y, y);
    if (std::abs(nx - ny) > 1e-9 * std::max(nx, ny)) return nx < ny;
    if (leading_index(x) != leading_index(y)) return leading_index(x) < leading_index(y);
    return x < y;
  });
  return b;
}

PeriodLattice period_lattice(const FlowChart& c, const Vec& m0, const FlowConfig& cfg) {
  cfg.validate();
  if (m0.size() != c.dim()) throw ValidationError("start point has the wrong dimension");
  require_compact(c);
  const std::size_t k = c.casimirs().size();
  if (k == 1) return scan_one(c, m0, cfg);
  if (k == 2) return newton_two(c, m0, cfg);
  throw ValidationError("period lattice search supports k <= 2");
}

Report lattice_closedness_check(const FlowChart& c, const LatticeGrid& g, const FlowConfig& cfg, double tolerance) {
  Report r;
  r.subject = "lattice closedness";
  const std::size_t np = g.p_values.size(), nq = g.q_values.size();
  if (np == 0 || nq == 0) throw ValidationError("grid has no nodes");
  if (g.p >= c.base_dim() || g.q >= c.base_dim() || g.p == g.q) throw ValidationError("grid axes must be distinct base coordinates");
  if (np < 2 || nq < 2) {
    r.add("closed lattice section", true, "vacuous: grid has no 2-cell");
    return r;
  }
  std::vector<std::vector<Mat>> sec(np, std::vector<Mat>(nq));
  double worst_match = 0.0;
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < nq; ++j) {
      Vec m = g.m0;
      m[g.p] = g.p_values[i];
      m[g.q] = g.q_values[j];
      const Mat l = to_mat(period_lattice(c, m, cfg).basis);
      if (i == 0 && j == 0) {
        sec[i][j] = l;
        continue;
      }
      const Mat& ref = j > 0 ? sec[i][j - 1] : sec[i - 1][j];
      auto [coeff, res] = match(ref, l);
      worst_match = std::max(worst_match, res);
      if (res > 0.25) {
        r.add("basis matching", false, "basis jump near " + point_text(m));
        return r;
      }
      sec[i][j] = coeff * l;
    }
  r.add(Check{"basis matching", Verdict::pass, "largest rounding " + sci(worst_match), worst_match, 0.25});

  auto comp = [&](const Mat& l, long row, std::size_t axis) {
    for (std::size_t a = 0; a < c.casimirs().size(); ++a)
      if (c.casimirs()[a] == axis) return l(row, long(a));
    return 0.0;
  };
  double worst = 0.0;
  Vec where;
  const long k = sec[0][0].rows();
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < nq; ++j) {
      const std::size_t i0 = i ? i - 1 : i, i1 = i + 1 < np ? i + 1 : i;
      const std::size_t j0 = j ? j - 1 : j, j1 = j + 1 < nq ? j + 1 : j;
      const double dp = g.p_values[i1] - g.p_values[i0], dq = g.q_values[j1] - g.q_values[j0];
      for (long u = 0; u < k; ++u) {
        const double dlq = (comp(sec[i1][j], u, g.q) - comp(sec[i0][j], u, g.q)) / dp;
        const double dlp = (comp(sec[i][j1], u, g.p) - comp(sec[i][j0], u, g.p)) / dq;
        if (std::abs(dlq - dlp) > worst) {
          worst = std::abs(dlq - dlp);
          where = {g.p_values[i], g.q_values[j]};
        }
      }
    }
  r.add(Check{"closed lattice section", worst < tolerance ? Verdict::pass : Verdict::fail,
              "max |d lambda| " + sci(worst) + (where.empty() ? "" : " at " + point_text(where)), worst, tolerance});
  return r;
}

MonodromyMatrix monodromy(const realization::Realisation& r, const std::vector<LoopNode>& loop, const Vec& fibre,
                          const FlowConfig& cfg) {
  if (loop.size() < 2) throw ValidationError("loop needs at least two nodes");
  const LoopNode& first = loop.front();
  const LoopNode& last = loop.back();
  if (first.chart != last.chart || first.base.size() != last.base.size())
    throw ValidationError("loop does not close");
  for (std::size_t i = 0; i < first.base.size(); ++i)
    if (std::abs(first.base[i] - last.base[i]) > 1e-9) throw ValidationError("loop does not close");

  std::map<std::size_t, FlowChart> charts;
  auto flow_chart = [&](std::size_t j) -> const FlowChart& {
    auto it = charts.find(j);
    if (it == charts.end()) it = charts.emplace(j, FlowChart(r, j)).first;
    return it->second;
  };
  auto lattice_at = [&](const LoopNode& n) {
    const FlowChart& c = flow_chart(r.index(n.chart));
    Vec m = n.base;
    m.insert(m.end(), fibre.begin(), fibre.end());
    return to_mat(period_lattice(c, m, cfg).basis);
  };

  const Mat l0 = lattice_at(first);
  Mat b = l0;
  double residual = 0.0;
  for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
    const LoopNode& cur = loop[i];
    const LoopNode& nxt = loop[i + 1];
    if (cur.chart != nxt.chart) {
      const auto& from = r.chart(cur.chart);
      const auto& to = r.chart(nxt.chart);
      const realization::FibreTransition* best = nullptr;
      double best_dist = INFINITY;
      Vec m = cur.base;
      m.resize(from.total().dim(), 0.0);
      for (const auto& t : r.transitions()) {
        if (t.from != cur.chart || t.to != nxt.chart) continue;
        if (!std::all_of(t.domain.begin(), t.domain.end(), [&](const sym::Scalar& f) { return f.evaluate(cur.base) > 0.0; }))
          continue;
        double dist = 0.0;
        for (std::size_t a = 0; a < to.base_dim(); ++a)
          dist = std::max(dist, std::abs(t.map.images()[a].expr.evaluate(m) - nxt.base[a]));
        if (dist < best_dist) {
          best_dist = dist;
          best = &t;
        }
      }
      if (!best) throw ValidationError("no transition from " + cur.chart + " to " + nxt.chart + " at node " + std::to_string(i));
      const std::size_t k = to.casimirs.size();
      Mat jac = Mat::Zero(long(k), long(k));
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t c = 0; c < k; ++c)
          jac(long(a), long(c)) = best->map.images()[to.casimirs[a]].expr.derivative(int(from.casimirs[c])).evaluate(m);
      b = b * jac.inverse();
    }
    const Mat l = lattice_at(nxt);
    auto [coeff, res] = match(b, l);
    residual = std::max(residual, res);
    if (res > 0.25)
      throw NumericalError("basis matching is ambiguous between nodes " + std::to_string(i) + " and " +
                           std::to_string(i + 1) + "; refine the loop");
    b = coeff * l;
  }
  auto [n, res] = match(b, l0);
  residual = std::max(residual, res);
  MonodromyMatrix out;
  out.residual = residual;
  out.matrix.assign(std::size_t(n.rows()), std::vector<long>(std::size_t(n.cols())));
  for (long i = 0; i < n.rows(); ++i)
    for (long j = 0; j < n.cols(); ++j) out.matrix[std::size_t(i)][std::size_t(j)] = std::lround(n(i, j));
  out.det = cohomo::determinant(out.matrix);
  if (out.det != 1 && out.det != -1) throw NumericalError("transported basis is not unimodular");
  return out;
}

}  // namespace twp::dynamics
