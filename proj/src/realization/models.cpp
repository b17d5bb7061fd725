#include "twp/realization/models.hpp"

#include "twp/cohomo/obstruction.hpp"

namespace twp::realization {

namespace {

using sym::CoordKind;

Scalar v(int i) { return Scalar::variable(i); }

sym::ChartMap affine_map(const Chart& from, const Chart& to, std::vector<Scalar> images) {
  std::vector<sym::CoordinateImage> im(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) im[i].expr = images[i];
  return sym::ChartMap(from, to, im);
}

Form area_tau(const Chart& c) {
  return Form::basis(c, {0, 1}, (Scalar(1) + v(2) * v(2)) * cohomo::sphere_density(0, 1));
}

Multivector area_pi(const Chart& c) {
  return Multivector::basis(c, {0, 1}, -(Scalar(1) / ((Scalar(1) + v(2) * v(2)) * cohomo::sphere_density(0, 1))));
}

}  // namespace

CocycleData sphere_cocycle(SphereCocycle kind) {
  cohomo::Cover cover = cohomo::sphere_interval_cover();
  std::vector<std::vector<Form>> basis;
  for (const auto& c : cover.charts()) basis.push_back({sym::coordinate_differential(c.chart, 2)});
  cohomo::LatticeBundle lattice(cover, basis, {cohomo::identity_matrix(1), cohomo::identity_matrix(1)});

  cohomo::ChartForms tau, zeta, eta;
  for (const auto& c : cover.charts()) {
    tau.push_back(area_tau(c.chart));
    zeta.push_back(Form(c.chart, 2));
  }
  std::vector<std::vector<Scalar>> kappa = {{Scalar()}, {Scalar()}};
  if (kind == SphereCocycle::interval_shift) {
    const Scalar h = v(2) * v(2) + Scalar(sym::Rational(1, 3));
    kappa = {{h}, {-h}};
  }
  if (kind == SphereCocycle::exact_zeta) {
    const Chart& s = cover.charts()[1].chart;
    const Scalar f = v(0) * v(2) / (Scalar(1) + v(0) * v(0) + v(1) * v(1));
    zeta[1] = sym::d(Form::basis(s, {2}, f));
    kappa = {{-sym::pullback(f, cover.overlaps()[0].map)}, {f}};
  }
  if (kind == SphereCocycle::eta_correction) {
    for (std::size_t j = 0; j < 2; ++j) {
      const Chart& c = cover.charts()[j].chart;
      const Scalar r2 = v(0) * v(0) + v(1) * v(1);
      const Scalar h1 = j == 0 ? Scalar(1) / (Scalar(1) + r2) : r2 / (Scalar(1) + r2);
      const Scalar h2 = v(0) / (Scalar(1) + r2);
      eta.push_back(sym::wedge(h1 * sym::differential(c, h2), sym::coordinate_differential(c, 2)));
    }
  }
  std::vector<structures::TwistedPoisson> base;
  for (std::size_t j = 0; j < 2; ++j) {
    Form phi = sym::d(tau[j]);
    if (kind == SphereCocycle::eta_correction) phi = phi - sym::d(eta[j]);
    base.emplace_back(area_pi(cover.charts()[j].chart), phi);
  }
  CocycleData d{lattice, base, tau, zeta, kappa, std::nullopt};
  if (kind == SphereCocycle::eta_correction) d.eta = eta;
  return d;
}

CocycleData mapping_torus_cocycle() {
  const Chart c({{"x", CoordKind::real}, {"y", CoordKind::real}});
  const Scalar x = v(0), y = v(1);
  const Scalar quarter(sym::Rational(1, 4));
  cohomo::Cover cover(
      {{"A", c, {0, 1}, {x + quarter * y, Scalar(3) * quarter * y - x, y}},
       {"B", c, {0, 1}, {x - quarter * y, Scalar(5) * quarter * y - x, y}}},
      {{"A", "B", affine_map(c, c, {x, y}), {x - quarter * y}},
       {"B", "A", affine_map(c, c, {x, y}), {Scalar(3) * quarter * y - x}},
       {"B", "A", affine_map(c, c, {x - y, y}), {x - y}},
       {"A", "B", affine_map(c, c, {x + y, y}), {quarter * y - x}}});
  const std::vector<Form> frame = {sym::coordinate_differential(c, 0), sym::coordinate_differential(c, 1)};
  const cohomo::IntMatrix id = cohomo::identity_matrix(2);
  cohomo::LatticeBundle lattice(cover, {frame, frame}, {id, id, {{1, -1}, {0, 1}}, {{1, 1}, {0, 1}}});
  const structures::TwistedPoisson zero(Multivector(c, 2), Form(c, 3));
  const cohomo::ChartForms none = {Form(c, 2), Form(c, 2)};
  return {lattice, {zero, zero}, none, none, std::vector<std::vector<Scalar>>(4, {Scalar(), Scalar()}), std::nullopt};
}

CocycleData split_interval_cocycle(const Scalar& g) {
  const Chart c({{"a", CoordKind::real}, {"b1", CoordKind::real}, {"b2", CoordKind::real}});
  const Scalar a = v(0);
  cohomo::Cover cover({{"I1", c, {0}, {Scalar(1) - a}}, {"I2", c, {0}, {a}}},
                      {{"I1", "I2", sym::ChartMap::identity(c)}, {"I2", "I1", sym::ChartMap::identity(c)}});
  const std::vector<Form> frame = {sym::coordinate_differential(c, 0)};
  cohomo::LatticeBundle lattice(cover, {frame, frame}, {cohomo::identity_matrix(1), cohomo::identity_matrix(1)});
  const Scalar q = Scalar(1) + a * a;
  const Form tau = Form::basis(c, {1, 2}, q);
  const structures::TwistedPoisson base(Multivector::basis(c, {1, 2}, -(Scalar(1) / q)), sym::d(tau));
  const cohomo::ChartForms zero = {Form(c, 2), Form(c, 2)};
  return {lattice, {base, base}, {tau, tau}, zero, {{g}, {-g}}, std::nullopt};
}

}  // namespace twp::realization
