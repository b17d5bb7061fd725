#include "twp/structures/structures.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace twp::structures {

using sym::coordinate_differential;
using sym::coordinate_field;

namespace {

using Matrix = std::vector<std::vector<Scalar>>;

Matrix transpose(const Matrix& m) {
  Matrix t(m.size(), std::vector<Scalar>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) t[j][i] = m[i][j];
  return t;
}

std::string point_text(const std::vector<double>& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

}  // namespace

AlmostSymplectic::AlmostSymplectic(Form sigma) : sigma_(std::move(sigma)) {
  if (sigma_.degree() != 2) throw DegreeError("almost symplectic form must have degree 2");
  const std::size_t n = sigma_.chart().dim();
  if (n % 2 != 0) throw ValidationError("almost symplectic form on odd-dimensional chart");
  det_ = sym::determinant(sym::full_matrix(sigma_));
  if (det_.is_zero()) throw DegeneracyError("form is degenerate: determinant is identically zero", std::vector<double>(n, 0.0));
}

void AlmostSymplectic::certify(const std::vector<std::vector<double>>& samples, double tolerance) const {
  const std::size_t n = chart().dim();
  for (const auto& x : samples) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& [idx, c] : sigma_.coefficients()) {
      const double v = c.evaluate(x);
      m(idx[0], idx[1]) = v;
      m(idx[1], idx[0]) = -v;
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double det = m.determinant();
    if (!std::isfinite(det) || std::abs(det) <= tolerance * std::pow(scale, static_cast<double>(n)))
      throw DegeneracyError("form is degenerate at " + point_text(x), x);
  }
}

TwistedPoisson::TwistedPoisson(Multivector pi, Form phi) : pi_(std::move(pi)), phi_(std::move(phi)) {
  if (pi_.degree() != 2) throw DegreeError("twisted Poisson structure needs a bivector");
  if (phi_.degree() != 3) throw DegreeError("twisting form must have degree 3");
  if (!(pi_.chart() == phi_.chart())) throw ChartMismatch("bivector and twisting form on different charts");
}

Multivector bivector_from_form(const AlmostSymplectic& m) {
  auto inv = sym::inverse(sym::full_matrix(m.sigma()));
  if (!inv) throw DegeneracyError("form is not invertible", std::vector<double>(m.chart().dim(), 0.0));
  return sym::from_matrix<sym::MultivectorKind>(m.chart(), *inv);
}

TwistedPoisson twisted_from_form(const AlmostSymplectic& m) {
  return TwistedPoisson(bivector_from_form(m), sym::d(m.sigma()));
}

Scalar bracket(const TwistedPoisson& s, const Scalar& h1, const Scalar& h2) { return sym::bracket(s.pi(), h1, h2); }

Multivector hamiltonian_vf(const TwistedPoisson& s, const Scalar& h) {
  return sym::sharp(s.pi(), sym::differential(s.chart(), h));
}

Multivector hamiltonian_vf(const AlmostSymplectic& m, const Scalar& h) {
  // (i(X)sigma)_j = sum_i X^i S_ij, so S^T X = grad h.
  auto inv = sym::inverse(transpose(sym::full_matrix(m.sigma())));
  if (!inv) throw DegeneracyError("form is not invertible", std::vector<double>(m.chart().dim(), 0.0));
  const std::size_t n = m.chart().dim();
  Multivector x(m.chart(), 1);
  for (std::size_t i = 0; i < n; ++i) {
    Scalar c;
    for (std::size_t j = 0; j < n; ++j)
      if (!(*inv)[i][j].is_zero()) c += (*inv)[i][j] * h.derivative(static_cast<int>(j));
    x.accumulate({static_cast<int>(i)}, c);
  }
  return x;
}

TwistedCheck verify_twisted(const TwistedPoisson& s) {
  if (!sym::d(s.phi()).is_zero()) throw ValidationError("twisting form not closed");
  TwistedCheck out;
  out.report.subject = "twisted Poisson";
  out.report.add("phi closed", true, "d(phi) = 0");

  const Chart& chart = s.chart();
  const std::size_t n = chart.dim();
  out.eq1_residual = sym::schouten(s.pi(), s.pi()) - Scalar(2) * sym::sharp(s.pi(), s.phi());
  out.eq1_zero = out.eq1_residual.is_zero();

  std::vector<Scalar> x(n);
  std::vector<Multivector> ham(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = Scalar::variable(static_cast<int>(i));
    ham[i] = hamiltonian_vf(s, x[i]);
  }
  std::map<std::pair<std::size_t, std::size_t>, Scalar> br;
  auto b = [&](std::size_t i, std::size_t j) -> const Scalar& {
    auto key = std::make_pair(i, j);
    auto it = br.find(key);
    if (it == br.end()) it = br.emplace(key, bracket(s, x[i], x[j])).first;
    return it->second;
  };
  out.jacobiator_zero = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Scalar jac = bracket(s, x[i], b(j, k)) + bracket(s, x[j], b(k, i)) + bracket(s, x[k], b(i, j));
        const Multivector xs[3] = {ham[i], ham[j], ham[k]};
        Scalar r = jac - sym::apply(s.phi(), std::span<const Multivector>(xs, 3));
        if (!r.is_zero()) {
          out.jacobiator_zero = false;
          out.jacobiator_residual.emplace(std::array<int, 3>{int(i), int(j), int(k)}, std::move(r));
        }
      }

  out.report.add("jacobiator", out.jacobiator_zero,
                 out.jacobiator_zero ? "jacobiator equals phi(X,X,X) on all coordinate triples"
                                     : std::to_string(out.jacobiator_residual.size()) + " coordinate triples fail");
  out.report.add("bracket identity", out.eq1_zero,
                 out.eq1_zero ? "[pi,pi] - 2 sharp(phi) = 0" : "[pi,pi] - 2 sharp(phi) has nonzero components");
  out.report.add("convention consistency", out.eq1_zero == out.jacobiator_zero,
                 "tensorial and coordinate forms of the identity agree");
  return out;
}

Form algebroid_bracket(const TwistedPoisson& s, const Form& alpha, const Form& beta) {
  if (alpha.degree() != 1 || beta.degree() != 1) throw DegreeError("algebroid bracket acts on 1-forms");
  const Multivector xa = sym::sharp(s.pi(), alpha);
  const Multivector xb = sym::sharp(s.pi(), beta);
  const Scalar pab = sym::pair(s.pi(), sym::wedge(alpha, beta));
  Form r = sym::lie_derivative(xa, beta) - sym::lie_derivative(xb, alpha) - sym::differential(s.chart(), pab);
  // The twist enters with a minus sign so that pi^# is a bracket homomorphism.
  return r - sym::interior(xb, sym::interior(xa, s.phi()));
}

Report check_vf_bracket_identity(const TwistedPoisson& s, const Scalar& h1, const Scalar& h2) {
  const Multivector x1 = hamiltonian_vf(s, h1);
  const Multivector x2 = hamiltonian_vf(s, h2);
  const Multivector lhs = sym::schouten(x1, x2);
  const Form defect = sym::interior(x2, sym::interior(x1, s.phi()));
  const Multivector rhs = hamiltonian_vf(s, bracket(s, h1, h2)) - sym::sharp(s.pi(), defect);
  Report r;
  r.subject = "hamiltonian bracket";
  const bool ok = (lhs - rhs).is_zero();
  r.add("vector field bracket", ok,
        ok ? "[X1,X2] = X_{h1,h2} - pi^#(phi(X1,X2,.))" : "[X1,X2] differs from X_{h1,h2} - pi^#(phi(X1,X2,.))");
  return r;
}

int numeric_rank(const std::vector<double>& row_major, std::size_t rows, std::size_t cols, double tol) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(Eigen::Index(i), Eigen::Index(j)) = row_major[i * cols + j];
  if (!m.allFinite()) throw NumericalError("non-finite matrix entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++r;
  return r;
}

std::vector<int> rank_at(const TwistedPoisson& s, const std::vector<std::vector<double>>& xs, double tol) {
  const std::size_t n = s.chart().dim();
  std::vector<int> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    std::vector<double> m(n * n, 0.0);
    for (const auto& [idx, c] : s.pi().coefficients()) {
      const double v = c.evaluate(x);
      m[std::size_t(idx[0]) * n + std::size_t(idx[1])] = v;
      m[std::size_t(idx[1]) * n + std::size_t(idx[0])] = -v;
    }
    out.push_back(numeric_rank(m, n, n, tol));
  }
  return out;
}

bool vanishes_on_leaves(const Form& w, const std::vector<std::size_t>& casimirs) {
  for (const auto& [idx, c] : w.coefficients()) {
    const bool all_leaf = std::none_of(idx.begin(), idx.end(), [&](int i) {
      return std::find(casimirs.begin(), casimirs.end(), std::size_t(i)) != casimirs.end();
    });
    if (all_leaf) return false;
  }
  return true;
}

LeafDecomposition::LeafDecomposition(TwistedPoisson base, std::vector<std::size_t> casimirs, Form tau)
    : base_(std::move(base)), casimirs_(std::move(casimirs)), tau_(std::move(tau)) {
  const Chart& chart = base_.chart();
  if (tau_.degree() != 2) throw DegreeError("leaf form must have degree 2");
  if (!(tau_.chart() == chart)) throw ChartMismatch("leaf form on a different chart");
  std::sort(casimirs_.begin(), casimirs_.end());
  for (std::size_t c : casimirs_) {
    if (c >= chart.dim()) throw ValidationError("Casimir index out of range");
    if (!sym::sharp(base_.pi(), coordinate_differential(chart, c)).is_zero())
      throw ValidationError("coordinate " + chart.coord(c).name + " is not a Casimir");
  }
  const std::size_t n = chart.dim();
  std::vector<Multivector> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = sym::sharp(base_.pi(), coordinate_differential(chart, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Scalar lhs = sym::apply(tau_, images[i], images[j]);
      const Scalar rhs = -base_.pi().coefficient({int(i), int(j)});
      if (!(lhs == rhs))
        throw ValidationError("leaf form does not match the bivector on d" + chart.coord(i).name + ", d" +
                              chart.coord(j).name);
    }
}

std::vector<std::size_t> LeafDecomposition::leaf_coordinates() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < base_.chart().dim(); ++i)
    if (!std::binary_search(casimirs_.begin(), casimirs_.end(), i)) out.push_back(i);
  return out;
}

CharacteristicData characteristic_residual(const LeafDecomposition& l, const Form& phi) {
  if (phi.degree() != 3) throw DegreeError("twisting form must have degree 3");
  CharacteristicData out{l.tau(), phi, sym::d(l.tau()) - phi};
  if (!vanishes_on_leaves(out.residual, l.casimirs()))
    throw ValidationError("d(tau) - phi does not vanish on leaves");
  return out;
}

}  // namespace twp::structures
