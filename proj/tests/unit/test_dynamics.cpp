#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "twp/dynamics/dynamics.hpp"
#include "twp/realization/models.hpp"

using namespace twp;
using namespace twp::sym;
using namespace twp::dynamics;
using realization::Realisation;
using testing::var;

namespace {

// One action a and one angle with sigma = f da ^ dalpha.
Realisation planar(const Scalar& f) {
  const Chart base({{"a", CoordKind::real}});
  const Chart total({{"a", CoordKind::real}, {"alpha", CoordKind::angle}});
  return Realisation({{"U", Form::basis(total, {0, 1}, f), structures::TwistedPoisson(Multivector(base, 2), Form(base, 3)), {0}}},
                     {});
}

// k = 2 with sigma = s1 da1 ^ dalpha1 + s2 da2 ^ dalpha2.
Realisation two_actions(const Scalar& s1, const Scalar& s2) {
  const Chart base({{"a1", CoordKind::real}, {"a2", CoordKind::real}});
  const Chart total({{"a1", CoordKind::real}, {"a2", CoordKind::real}, {"alpha1", CoordKind::angle}, {"alpha2", CoordKind::angle}});
  const Form sigma = Form::basis(total, {0, 2}, s1) + Form::basis(total, {1, 3}, s2);
  return Realisation({{"U", sigma, structures::TwistedPoisson(Multivector(base, 2), Form(base, 3)), {0, 1}}}, {});
}

bool near(const Basis& a, const Basis& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (std::abs(a[i][j] - b[i][j]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("flows of System B are vertical angle translations") {
  Realisation b = realization::one_chart_realisation(testing::system_b());
  FlowChart c(b, 0);
  const Vec m0 = {0.3, 0.1, -0.2, 0.25};
  FlowResult r = integrate_flow(c, c.casimir_covector({1.0}), m0, 1.0);
  CHECK(r.point[3] - m0[3] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r.drift < 1e-10);
  CHECK(r.steps == 1000);
  CHECK(return_distance(c, r.point, m0) < 1e-10);
  FlowResult z = integrate_flow(c, c.casimir_covector({0.0}), m0, 3.0);
  CHECK(return_distance(c, z.point, m0) == 0.0);

  FlowChart two(planar(Scalar(2)), 0);
  FlowResult h = integrate_flow(two, two.casimir_covector({1.0}), {0.0, 0.1}, 1.0);
  CHECK(h.point[1] - 0.1 == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("period lattices") {
  Realisation a = realization::one_chart_realisation(testing::system_a());
  PeriodLattice la = period_lattice(FlowChart(a, 0), {0.2, -0.4, 0.1, 0.7});
  CHECK(near(la.basis, {{1, 0}, {0, 1}}, 1e-6));
  CHECK(la.residual <= 1e-6);

  Realisation b = realization::one_chart_realisation(testing::system_b());
  FlowChart cb(b, 0);
  for (double a0 : {0.0, 1.0}) CHECK(near(period_lattice(cb, {a0, 0.5, 0.5, 0.0}).basis, {{1}}, 1e-6));
  // Same base point, different fibre point.
  CHECK(near(period_lattice(cb, {0.4, 0.5, 0.5, 0.0}).basis, period_lattice(cb, {0.4, 0.5, 0.5, 0.6}).basis, 1e-6));

  CHECK(near(period_lattice(FlowChart(planar(Scalar(2)), 0), {0.3, 0.0}).basis, {{2}}, 1e-6));
  // Angle-dependent speed: the return time is the mean of f.
  FlowChart wobble(planar(Scalar(1) + Scalar(Rational(1, 2)) * Scalar::sin(1, 1)), 0);
  CHECK(near(period_lattice(wobble, {0.0, 0.1}).basis, {{1}}, 1e-6));

  // A sheared lattice is reduced to its canonical basis.
  const Chart base({{"a1", CoordKind::real}, {"a2", CoordKind::real}});
  const Chart total({{"a1", CoordKind::real}, {"a2", CoordKind::real}, {"alpha1", CoordKind::angle}, {"alpha2", CoordKind::angle}});
  const Form sheared = Form::basis(total, {0, 2}) + Form::basis(total, {0, 3}) + Form::basis(total, {1, 3});
  Realisation s({{"U", sheared, structures::TwistedPoisson(Multivector(base, 2), Form(base, 3)), {0, 1}}}, {});
  CHECK(near(period_lattice(FlowChart(s, 0), {0, 0, 0, 0}).basis, {{1, 0}, {0, 1}}, 1e-6));

  FlowChart scaled(two_actions(Scalar(2), Scalar(3)), 0);
  CHECK(near(period_lattice(scaled, {0, 0, 0, 0}).basis, {{2, 0}, {0, 3}}, 1e-6));
}

TEST_CASE("quotient model round trip through the period lattice") {
  const Chart c({{"a", CoordKind::real}, {"b1", CoordKind::real}, {"b2", CoordKind::real}});
  const Scalar q = Scalar(1) + var(0) * var(0);
  const Form tau = Form::basis(c, {1, 2}, q);
  structures::LeafDecomposition l(structures::TwistedPoisson(Multivector::basis(c, {1, 2}, -(Scalar(1) / q)), d(tau)), {0}, tau);
  cohomo::Cover one({{"U", c, {0}}}, {});
  cohomo::LatticeBundle two(one, {{Scalar(2) * coordinate_differential(c, 0)}}, {});
  Realisation r = realization::quotient_model(l, two, tau);
  CHECK(near(period_lattice(FlowChart(r, 0), {0.5, 0.0, 1.0, 0.3}).basis, {{2}}, 1e-6));
}

TEST_CASE("non-compact fibres and escapes") {
  const Chart xy({{"x", CoordKind::real}, {"y", CoordKind::real}});
  Realisation z = realization::conormal_model({structures::TwistedPoisson(Multivector(xy, 2), Form(xy, 3)), {0, 1}, Form(xy, 2)});
  CHECK_THROWS_AS(period_lattice(FlowChart(z, 0), {0, 0, 0, 0}), NumericalError);
  Realisation m = realization::glue_realisation(realization::mapping_torus_cocycle()).realisation;
  FlowChart ca(m, 0);
  CHECK_THROWS_AS(integrate_flow(ca, ca.casimir_covector({1, 0}), {0.9, 1.0, 0, 0}, 1.0), DomainEscape);
  FlowConfig bad;
  bad.h = 0.0;
  CHECK_THROWS_AS(integrate_flow(ca, ca.casimir_covector({1, 0}), {0.1, 1.0, 0, 0}, 1.0, bad), ValidationError);
}

TEST_CASE("commuting flows") {
  FlowChart a(realization::one_chart_realisation(testing::system_a()), 0);
  CHECK(commuting_flow_check(a, {1, 0}, {0, 1}, {0.1, 0.2, 0.3, 0.4}).passed());
  FlowChart b(realization::one_chart_realisation(testing::system_b()), 0);
  CHECK(commuting_flow_check(b, {1.0}, {0.37}, {0.3, 0.1, -0.2, 0.25}).passed());
  // d sigma contains d alpha1: the fibre generators no longer commute.
  FlowChart bad(two_actions(Scalar(1), Scalar(1) + Scalar(Rational(1, 2)) * Scalar::sin(2, 1)), 0);
  Report r = commuting_flow_check(bad, {0.5, 0}, {0, 1}, {0, 0, 0.25, 0});
  CHECK(r.overall() == Verdict::fail);
}

TEST_CASE("RK4 order") {
  FlowChart wobble(planar(Scalar(1) + Scalar(Rational(1, 2)) * Scalar::sin(1, 1)), 0);
  OrderCheck o = rk4_order_check(wobble, {1.0}, {0.0, 0.1}, 0.05);
  CHECK(o.coarse > 1e-9);
  CHECK(o.ratio >= 8.0);
}

TEST_CASE("lattice closedness") {
  FlowChart b(realization::one_chart_realisation(testing::system_b()), 0);
  LatticeGrid g{0, 1, {-1, -0.5, 0, 0.5, 1}, {-1, 0, 1}, {0, 0, 0.3, 0.1}};
  CHECK(lattice_closedness_check(b, g).passed());
  LatticeGrid single{0, 1, {0.2}, {0.1}, {0, 0, 0.3, 0.1}};
  Report s = lattice_closedness_check(b, single);
  CHECK(s.passed());
  CHECK(s.checks[0].detail.find("vacuous") != std::string::npos);

  // Period covector (1 + a2) da1 is not closed.
  FlowChart bad(two_actions(Scalar(1) + var(1), Scalar(1)), 0);
  LatticeGrid gg{0, 1, {-0.2, -0.1, 0, 0.1, 0.2}, {-0.2, -0.1, 0, 0.1, 0.2}, {0, 0, 0.1, 0.2}};
  Report r = lattice_closedness_check(bad, gg);
  REQUIRE(r.find("closed lattice section") != nullptr);
  CHECK(r.find("closed lattice section")->verdict == Verdict::fail);
  CHECK(*r.find("closed lattice section")->value == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("monodromy") {
  Realisation b = realization::one_chart_realisation(testing::system_b());
  std::vector<LoopNode> square = {{"U", {0, 0, 0}}, {"U", {1, 0, 0}}, {"U", {1, 1, 0}}, {"U", {0, 1, 0}}, {"U", {0, 0, 0}}};
  MonodromyMatrix id = monodromy(b, square, {0.2});
  CHECK(id.matrix == cohomo::IntMatrix{{1}});

  Realisation m = realization::glue_realisation(realization::mapping_torus_cocycle()).realisation;
  std::vector<LoopNode> loop = {{"A", {0.0, 1}}, {"A", {0.2, 1}}, {"A", {0.4, 1}}, {"B", {0.6, 1}},
                                {"B", {0.8, 1}}, {"B", {1.1, 1}}, {"A", {0.0, 1}}};
  MonodromyMatrix mm = monodromy(m, loop, {0.1, 0.3});
  CHECK(mm.matrix == cohomo::IntMatrix{{1, 1}, {0, 1}});
  CHECK(mm.det == 1);
  CHECK(mm.residual < 1e-3);
  // Refining the loop does not change the class.
  std::vector<LoopNode> fine = {{"A", {0.0, 1}}, {"A", {0.1, 1}}, {"A", {0.2, 1}}, {"A", {0.3, 1}}, {"A", {0.4, 1}},
                                {"B", {0.5, 1}}, {"B", {0.7, 1}}, {"B", {0.9, 1}}, {"B", {1.1, 1}}, {"A", {0.05, 1}},
                                {"A", {0.0, 1}}};
  CHECK(monodromy(m, fine, {0.1, 0.3}).matrix == mm.matrix);
  // Going the other way round inverts it.
  std::vector<LoopNode> back(loop.rbegin(), loop.rend());
  CHECK(monodromy(m, back, {0.1, 0.3}).matrix == cohomo::IntMatrix{{1, -1}, {0, 1}});

  Realisation s = realization::glue_realisation(realization::sphere_cocycle(realization::SphereCocycle::trivial)).realisation;
  std::vector<LoopNode> sl = {{"N", {0, 0, 0}}, {"N", {1, 0, 0}}, {"N", {1, 0, 1}}, {"N", {0, 0, 1}}, {"N", {0, 0, 0}}};
  CHECK(monodromy(s, sl, {0.0}).matrix == cohomo::IntMatrix{{1}});
  CHECK_THROWS_AS(monodromy(b, {{"U", {0, 0, 0}}, {"U", {1, 0, 0}}}, {0.2}), ValidationError);
}

TEST_CASE("flow pullback identity, numerically") {
  Realisation b = realization::one_chart_realisation(testing::system_b());
  FlowChart c(b, 0);
  const Chart& base = b.charts()[0].base_chart();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  auto rand_vec = [&] { return Vec{u(rng), u(rng), u(rng), u(rng)}; };
  std::vector<TangentPair> pairs;
  for (int i = 0; i < 5; ++i) pairs.push_back({rand_vec(), rand_vec()});
  const Vec m0 = {0.4, -0.3, 0.2, 0.1};

  CHECK(pullback_identity_numeric(c, Form::basis(base, {0}, var(0) * var(0)), m0, pairs).passed());
  Report r = pullback_identity_numeric(c, Form::basis(base, {0}, var(0) * (Scalar(1) + var(1) * var(1))), m0, pairs);
  CHECK(r.passed());
  CHECK(pullback_identity_numeric(c, Form::basis(base, {0}, Rational(3, 2)), m0, pairs).passed());
  CHECK_THROWS_AS(pullback_identity_numeric(c, coordinate_differential(base, 1), m0, pairs), ValidationError);
  // Dropping the p* d alpha term makes the comparison fail.
  Realisation bare = realization::one_chart_realisation(testing::system_b());
  FlowChart cc(bare, 0);
  Report strict = pullback_identity_numeric(cc, Form::basis(base, {0}, Scalar(3) * var(1)), m0, pairs);
  CHECK(strict.passed());
}
