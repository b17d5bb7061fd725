#include <random>

#include "doctest.h"
#include "random_exprs.hpp"
#include "twp/structures/structures.hpp"

using namespace twp;
using namespace twp::sym;
using namespace twp::structures;

namespace {

Scalar v(int i) { return Scalar::variable(i); }

Chart total_b() {
  return Chart({{"a", CoordKind::real}, {"b1", CoordKind::real}, {"b2", CoordKind::real}, {"alpha", CoordKind::angle}});
}
Chart base_b() { return Chart({{"a", CoordKind::real}, {"b1", CoordKind::real}, {"b2", CoordKind::real}}); }

Form sigma_b() {
  Chart c = total_b();
  return Form::basis(c, {0, 3}) + Form::basis(c, {1, 2}, Scalar(1) + v(0) * v(0));
}

Multivector pi_b() {
  return Multivector::basis(base_b(), {1, 2}, Scalar(-1) / (Scalar(1) + v(0) * v(0)));
}

Form tau_b() { return Form::basis(base_b(), {1, 2}, Scalar(1) + v(0) * v(0)); }

Chart sphere_chart() { return Chart({{"u", CoordKind::real}, {"v", CoordKind::real}, {"t", CoordKind::real}}); }

Scalar area_density() {
  Scalar r2 = Scalar(1) + v(0) * v(0) + v(1) * v(1);
  return Scalar(1) / (Scalar::pi() * r2 * r2);
}

Form tau_sphere() { return Form::basis(sphere_chart(), {0, 1}, (Scalar(1) + v(2) * v(2)) * area_density()); }

Multivector pi_sphere() {
  return Multivector::basis(sphere_chart(), {0, 1}, Scalar(-1) / ((Scalar(1) + v(2) * v(2)) * area_density()));
}

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<std::vector<double>> out(n, std::vector<double>(dim));
  for (auto& p : out)
    for (auto& x : p) x = u(rng);
  return out;
}

}  // namespace

TEST_CASE("bivector_from_form inverts sigma") {
  Chart c({{"a", CoordKind::real}, {"alpha", CoordKind::angle}});
  AlmostSymplectic m(Form::basis(c, {0, 1}));
  Multivector p = bivector_from_form(m);
  CHECK(p.coefficient({0, 1}) == Scalar(-1));

  AlmostSymplectic m2(Scalar(2) * m.sigma());
  CHECK(bivector_from_form(m2) == Scalar(Rational(1, 2)) * p);

  AlmostSymplectic mb(sigma_b());
  Multivector pb = bivector_from_form(mb);
  CHECK(pb.coefficient({1, 2}) == Scalar(-1) / (Scalar(1) + v(0) * v(0)));
  for (std::size_t i = 0; i < 4; ++i) {
    Form dh = coordinate_differential(mb.chart(), i);
    CHECK(interior(sharp(pb, dh), mb.sigma()) == dh);
  }
}

TEST_CASE("degenerate forms are rejected with a witness") {
  Chart c = total_b();
  CHECK_THROWS_AS(AlmostSymplectic(Form::basis(c, {0, 3})), DegeneracyError);
  CHECK_THROWS_AS(AlmostSymplectic(Form::basis(base_b(), {0, 1})), ValidationError);
  AlmostSymplectic m(Form::basis(c, {0, 3}, v(0)) + Form::basis(c, {1, 2}));
  try {
    m.certify({{1, 0, 0, 0}, {0, 1, 1, 0.5}});
    FAIL("expected degeneracy");
  } catch (const DegeneracyError& e) {
    CHECK(e.witness() == std::vector<double>{0, 1, 1, 0.5});
  }
  CHECK_NOTHROW(AlmostSymplectic(sigma_b()).certify(random_points(50, 4, 3)));
}

TEST_CASE("hamiltonian fields agree between the two definitions") {
  AlmostSymplectic mb(sigma_b());
  TwistedPoisson s = twisted_from_form(mb);
  CHECK(hamiltonian_vf(mb, v(0)) == -coordinate_field(mb.chart(), 3));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Scalar h = testing::random_poly(rng, mb.chart(), 3, 4, true);
    CHECK(hamiltonian_vf(mb, h) == hamiltonian_vf(s, h));
  }
  for (std::size_t i = 0; i < 4; ++i) CHECK(hamiltonian_vf(mb, v(int(i))) == hamiltonian_vf(s, v(int(i))));
  CHECK(hamiltonian_vf(mb, Scalar(7)).is_zero());

  TwistedPoisson sph(pi_sphere(), d(tau_sphere()));
  CHECK(hamiltonian_vf(sph, v(2)).is_zero());
}

TEST_CASE("bracket is antisymmetric and Leibniz") {
  TwistedPoisson sph(pi_sphere(), d(tau_sphere()));
  CHECK(bracket(sph, v(2), v(0)).is_zero());
  TwistedPoisson base(pi_b(), d(tau_b()));
  CHECK(bracket(base, v(1), v(2)) == Scalar(-1) / (Scalar(1) + v(0) * v(0)));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    Scalar h1 = testing::random_poly(rng, base.chart(), 2, 3);
    Scalar h2 = testing::random_poly(rng, base.chart(), 2, 3);
    Scalar h3 = testing::random_poly(rng, base.chart(), 2, 3);
    CHECK(bracket(base, h1, h1).is_zero());
    CHECK(bracket(base, h1, h2) == -bracket(base, h2, h1));
    CHECK(bracket(base, h1, h2 * h3) == bracket(base, h1, h2) * h3 + h2 * bracket(base, h1, h3));
  }
}

TEST_CASE("verify_twisted on the corpus") {
  auto sph = verify_twisted(TwistedPoisson(pi_sphere(), d(tau_sphere())));
  CHECK(sph.passed());
  CHECK(schouten(pi_sphere(), pi_sphere()).is_zero());

  auto base = verify_twisted(TwistedPoisson(pi_b(), d(tau_b())));
  CHECK(base.passed());
  // The base bivector depends only on its Casimir, so it is Poisson as well.
  auto base0 = verify_twisted(TwistedPoisson(pi_b(), Form(base_b(), 3)));
  CHECK(base0.passed());

  // A genuinely twisted structure: the total space of System B.
  TwistedPoisson total = twisted_from_form(AlmostSymplectic(sigma_b()));
  auto tw = verify_twisted(total);
  CHECK(tw.passed());
  CHECK(!schouten(total.pi(), total.pi()).is_zero());
  auto untw = verify_twisted(TwistedPoisson(total.pi(), Form(total.chart(), 3)));
  CHECK(!untw.passed());
  CHECK(!untw.eq1_zero);
  CHECK(!untw.jacobiator_residual.empty());
  CHECK(untw.report.find("convention consistency")->verdict == Verdict::pass);

  TwistedPoisson total_open = twisted_from_form(AlmostSymplectic(sigma_b()));
  Form open = Form::basis(total_b(), {1, 2, 3}, v(0));
  CHECK_THROWS_WITH_AS(verify_twisted(TwistedPoisson(total_open.pi(), open)), "twisting form not closed", ValidationError);
}

TEST_CASE("twisted identity is insensitive to forms vanishing on the image") {
  std::mt19937_64 rng(17);
  TwistedPoisson total = twisted_from_form(AlmostSymplectic(sigma_b()));
  for (int trial = 0; trial < 3; ++trial) {
    Rational c = testing::random_rational(rng, 5);
    TwistedPoisson base(pi_b(), d(tau_b()) + Form::basis(base_b(), {0, 1, 2}, Scalar(c)));
    auto r = verify_twisted(base);
    CHECK(r.passed());
    CHECK(r.eq1_zero == r.jacobiator_zero);
    // Perturbing the total space twist breaks the identity in both forms.
    TwistedPoisson bad(total.pi(), total.phi() + Form::basis(total.chart(), {0, 1, 2}, Scalar(c) + Scalar(1) / 7));
    auto rb = verify_twisted(bad);
    CHECK(rb.eq1_zero == rb.jacobiator_zero);
  }
}

TEST_CASE("random structures lock the two residual forms together") {
  std::mt19937_64 rng(23);
  Chart c = testing::real_chart({"x1", "x2", "x3", "x4"});
  for (int trial = 0; trial < 6; ++trial) {
    Multivector p = testing::random_tensor<Multivector>(rng, c, 2, 1);
    Form phi = d(testing::random_tensor<Form>(rng, c, 2, 2));
    auto r = verify_twisted(TwistedPoisson(p, phi));
    CHECK(r.eq1_zero == r.jacobiator_zero);
  }
}

TEST_CASE("algebroid bracket") {
  TwistedPoisson total = twisted_from_form(AlmostSymplectic(sigma_b()));
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    Scalar h1 = testing::random_poly(rng, total.chart(), 2, 3);
    Scalar h2 = testing::random_poly(rng, total.chart(), 2, 3);
    Form d1 = differential(total.chart(), h1), d2 = differential(total.chart(), h2);
    Form expected = differential(total.chart(), bracket(total, h1, h2)) -
                    interior(hamiltonian_vf(total, h2), interior(hamiltonian_vf(total, h1), total.phi()));
    CHECK(algebroid_bracket(total, d1, d2) == expected);
    CHECK(algebroid_bracket(total, d1, d1).is_zero());
    CHECK(algebroid_bracket(total, d1, d2) == -algebroid_bracket(total, d2, d1));
    CHECK(sharp(total.pi(), algebroid_bracket(total, d1, d2)) ==
          schouten(hamiltonian_vf(total, h1), hamiltonian_vf(total, h2)));
  }
  TwistedPoisson base(pi_b(), d(tau_b()));
  Form da = coordinate_differential(base.chart(), 0), db1 = coordinate_differential(base.chart(), 1);
  Form br = algebroid_bracket(base, da, db1);
  CHECK(sharp(base.pi(), br) == schouten(sharp(base.pi(), da), sharp(base.pi(), db1)));
  // Anchor property on non-exact forms of the total space.
  Form a1 = Form::basis(total.chart(), {1}, v(0)), a2 = Form::basis(total.chart(), {2}, v(2) * v(1));
  CHECK(sharp(total.pi(), algebroid_bracket(total, a1, a2)) ==
        schouten(sharp(total.pi(), a1), sharp(total.pi(), a2)));
}

TEST_CASE("hamiltonian vector field bracket identity") {
  TwistedPoisson base(pi_b(), d(tau_b()));
  CHECK(check_vf_bracket_identity(base, v(1), v(2)).passed());
  Form defect = interior(hamiltonian_vf(base, v(2)), interior(hamiltonian_vf(base, v(1)), base.phi()));
  CHECK(!defect.is_zero());
  CHECK(check_vf_bracket_identity(base, v(1), Scalar(3)).passed());

  TwistedPoisson total = twisted_from_form(AlmostSymplectic(sigma_b()));
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    Scalar h1 = testing::random_poly(rng, total.chart(), 2, 3, true);
    Scalar h2 = testing::random_poly(rng, total.chart(), 2, 3, true);
    CHECK(check_vf_bracket_identity(total, h1, h2).passed());
  }
  TwistedPoisson wrong(total.pi(), Form(total.chart(), 3));
  CHECK(!check_vf_bracket_identity(wrong, v(1), v(2)).passed());
}

TEST_CASE("rank of the characteristic distribution") {
  TwistedPoisson sph(pi_sphere(), d(tau_sphere()));
  for (int r : rank_at(sph, random_points(100, 3, 7))) CHECK(r == 2);
  TwistedPoisson base(pi_b(), d(tau_b()));
  for (int r : rank_at(base, random_points(100, 3, 8))) CHECK(r == 2);
  TwistedPoisson zero(Multivector(base_b(), 2), Form(base_b(), 3));
  for (int r : rank_at(zero, random_points(5, 3, 9))) CHECK(r == 0);
  TwistedPoisson total = twisted_from_form(AlmostSymplectic(sigma_b()));
  for (int r : rank_at(total, random_points(20, 4, 10))) CHECK(r == 4);
}

TEST_CASE("leaf decompositions and characteristic residuals") {
  TwistedPoisson sph(pi_sphere(), d(tau_sphere()));
  LeafDecomposition ls(sph, {2}, tau_sphere());
  CHECK(ls.leaf_coordinates() == std::vector<std::size_t>{0, 1});
  CHECK(characteristic_residual(ls, sph.phi()).residual.is_zero());

  TwistedPoisson base(pi_b(), d(tau_b()));
  LeafDecomposition lb(base, {0}, tau_b());
  CHECK(characteristic_residual(lb, d(tau_b())).residual.is_zero());
  CHECK(characteristic_residual(lb, d(tau_b()) + Scalar(0) * Form::basis(base_b(), {0, 1, 2})).residual.is_zero());

  // A twist differing by a relative 3-form gives a nonzero residual.
  Form shifted = d(tau_b()) + Form::basis(base_b(), {0, 1, 2}, Scalar(3));
  CHECK(!characteristic_residual(lb, shifted).residual.is_zero());

  CHECK_THROWS_AS(LeafDecomposition(base, {1}, tau_b()), ValidationError);
  CHECK_THROWS_AS(LeafDecomposition(base, {0}, Scalar(2) * tau_b()), ValidationError);
  CHECK(!vanishes_on_leaves(Form::basis(sphere_chart(), {0, 1}), {2}));
  CHECK(vanishes_on_leaves(Form::basis(sphere_chart(), {0, 1, 2}), {2}));
}
