#include "corpus.hpp"
#include "doctest.h"
#include "twp/cohomo/obstruction.hpp"
#include "twp/realization/models.hpp"

using namespace twp;
using namespace twp::sym;
using namespace twp::realization;
using testing::var;

namespace {

// Same coefficients up to renaming of coordinates.
bool same_coefficients(const Form& a, const Form& b) {
  if (a.degree() != b.degree() || a.chart().dim() != b.chart().dim()) return false;
  for (const auto& [idx, c] : a.coefficients())
    if (!(b.coefficient(idx) == c)) return false;
  for (const auto& [idx, c] : b.coefficients())
    if (!(a.coefficient(idx) == c)) return false;
  return true;
}

Chart base_b_chart() { return Chart({{"a", CoordKind::real}, {"b1", CoordKind::real}, {"b2", CoordKind::real}}); }

structures::LeafDecomposition base_b_leaves() {
  const Chart c = base_b_chart();
  const Scalar q = Scalar(1) + var(0) * var(0);
  const Form tau = Form::basis(c, {1, 2}, q);
  return {structures::TwistedPoisson(Multivector::basis(c, {1, 2}, -(Scalar(1) / q)), d(tau)), {0}, tau};
}

structures::LeafDecomposition sphere_leaves(bool poisson_only) {
  const CocycleData s = sphere_cocycle(SphereCocycle::trivial);
  const auto& b = s.base[0];
  return {poisson_only ? structures::TwistedPoisson(b.pi(), Form(b.chart(), 3)) : b, {2}, s.tau[0]};
}

Verdict criterion_verdict(const CocycleData& d) {
  cohomo::CriterionInput in;
  in.witness = glued_witness(d);
  return cohomo::decide_relative_cocycle(d.lattice.cover(), glued_relative_cocycle(d), in).overall();
}

}  // namespace

TEST_CASE("normal forms as one-chart realisations") {
  Realisation b = one_chart_realisation(testing::system_b());
  Report rb = verify_ir(b);
  CHECK(rb.passed());
  CHECK(b.charts()[0].casimirs == std::vector<std::size_t>{0});
  CHECK(rb.find("IR4 U")->detail == "fibres are tori");

  Realisation a = one_chart_realisation(testing::system_a());
  CHECK(verify_ir(a).passed());
  CHECK(a.charts()[0].base.phi().is_zero());
  CHECK(a.charts()[0].casimirs.size() == 2);
}

TEST_CASE("IR3 reports the fibre coefficient") {
  const Chart base({{"a1", CoordKind::real}, {"a2", CoordKind::real}});
  const Chart total({{"a1", CoordKind::real}, {"a2", CoordKind::real}, {"alpha1", CoordKind::angle}, {"alpha2", CoordKind::angle}});
  const Form sigma = Form::basis(total, {0, 2}) + Form::basis(total, {1, 3}) + Form::basis(total, {2, 3}, Rational(1, 2));
  Realisation r({{"U", sigma, structures::TwistedPoisson(Multivector(base, 2), Form(base, 3)), {0, 1}}}, {});
  Report rep = verify_ir(r);
  CHECK(rep.find("IR3 U")->verdict == Verdict::fail);
  CHECK(rep.find("IR3 U")->detail.find("= 1/2") != std::string::npos);
  CHECK(rep.find("IR2 U")->verdict == Verdict::pass);
}

TEST_CASE("conormal model") {
  // S^2 x R in the north chart: d sigma_0 = pr* d tau = 2t dt ^ omega.
  Realisation s = conormal_model(sphere_leaves(true));
  const auto& c = s.charts()[0];
  CHECK(c.total().coord(3).name == "p_t");
  CHECK(!c.compact());
  const Form expected = Form::basis(c.total(), {2, 0, 1}, Scalar(2) * var(2) * cohomo::sphere_density(0, 1));
  CHECK(d(c.sigma) == expected);
  Report rs = verify_ir(s);
  CHECK(rs.passed());
  CHECK(rs.find("IR4 U")->detail.find("waived") != std::string::npos);

  // Over System B's base it agrees with System B once p is read as the angle.
  Realisation b = conormal_model(base_b_leaves());
  CHECK(same_coefficients(b.charts()[0].sigma, testing::system_b().sigma()));
  CHECK(verify_ir(b).passed());

  // Zero rank: the canonical form of the cotangent chart.
  const Chart xy({{"x", CoordKind::real}, {"y", CoordKind::real}});
  Realisation z = conormal_model({structures::TwistedPoisson(Multivector(xy, 2), Form(xy, 3)), {0, 1}, Form(xy, 2)});
  const Chart& zt = z.charts()[0].total();
  CHECK(z.charts()[0].sigma == Form::basis(zt, {0, 2}) + Form::basis(zt, {1, 3}));
  CHECK(verify_ir(z).passed());
  CHECK_THROWS_AS(conormal_model({structures::TwistedPoisson(Multivector(xy, 2), Form(xy, 3)), {}, Form(xy, 2)}),
                  ValidationError);
}

TEST_CASE("quotient model") {
  const auto leaves = base_b_leaves();
  const Chart c = base_b_chart();
  cohomo::Cover one({{"U", c, {0}}}, {});
  cohomo::LatticeBundle da(one, {{coordinate_differential(c, 0)}}, {});
  Realisation b = quotient_model(leaves, da, leaves.tau());
  CHECK(same_coefficients(b.charts()[0].sigma, testing::system_b().sigma()));
  CHECK(b.charts()[0].compact());
  CHECK(verify_ir(b).passed());

  cohomo::LatticeBundle two(one, {{Scalar(2) * coordinate_differential(c, 0)}}, {});
  Realisation b2 = quotient_model(leaves, two, leaves.tau());
  CHECK(b2.charts()[0].sigma.coefficient({0, 3}) == Scalar(2));

  const Chart a({{"a1", CoordKind::real}, {"a2", CoordKind::real}});
  cohomo::Cover ca({{"U", a, {0, 1}}}, {});
  cohomo::LatticeBundle la(ca, {{coordinate_differential(a, 0), coordinate_differential(a, 1)}}, {});
  structures::LeafDecomposition trivial(structures::TwistedPoisson(Multivector(a, 2), Form(a, 3)), {0, 1}, Form(a, 2));
  Realisation ra = quotient_model(trivial, la, Form(a, 2));
  CHECK(same_coefficients(ra.charts()[0].sigma, testing::system_a().sigma()));
  CHECK(verify_ir(ra).passed());

  // A frame form with a Casimir-dependent scale is not closed: refused.
  CHECK_THROWS_AS(cohomo::LatticeBundle(ca, {{Form::basis(a, {0}, Scalar(1) + var(1)), coordinate_differential(a, 1)}}, {}),
                  ValidationError);
}

TEST_CASE("gluing over the sphere cover") {
  for (auto kind : {SphereCocycle::trivial, SphereCocycle::interval_shift, SphereCocycle::exact_zeta,
                    SphereCocycle::eta_correction}) {
    CAPTURE(int(kind));
    const CocycleData data = sphere_cocycle(kind);
    GluedRealisation g = glue_realisation(data);
    CHECK(g.certificate.passed());
    CHECK(g.realisation.charts().size() == 2);
    CHECK(g.realisation.transitions().size() == 2);
    CHECK(criterion_verdict(data) == Verdict::pass);
  }
  // Trivial cocycle: product realisation with d sigma = p* d tau exactly.
  GluedRealisation t = glue_realisation(sphere_cocycle(SphereCocycle::trivial));
  const auto& n = t.realisation.charts()[0];
  CHECK(d(n.sigma) == lift(d(sphere_cocycle(SphereCocycle::trivial).tau[0]), n.total()));
  // The transition for kappa = h(t) dt shifts the angle by -h.
  GluedRealisation h = glue_realisation(sphere_cocycle(SphereCocycle::interval_shift));
  const auto& img = h.realisation.transitions()[0].map.images()[3].angle;
  CHECK(img.shift == -(var(2) * var(2) + Scalar(Rational(1, 3))));

  // Without the eta correction IR2 fails on both charts.
  CocycleData bare = sphere_cocycle(SphereCocycle::eta_correction);
  bare.eta.reset();
  GluedRealisation gb = glue_realisation(bare);
  CHECK(gb.certificate.find("IR2 N")->verdict == Verdict::fail);
  CHECK(gb.certificate.find("IR2 S")->verdict == Verdict::fail);
}

TEST_CASE("gluing rejects inconsistent cocycles") {
  CocycleData bad = sphere_cocycle(SphereCocycle::interval_shift);
  bad.kappa[0][0] = var(0) * var(2);
  CHECK_THROWS_AS(glue_realisation(bad), ValidationError);

  CocycleData sym_bad = sphere_cocycle(SphereCocycle::interval_shift);
  sym_bad.kappa[1][0] = sym_bad.kappa[0][0];
  CHECK_THROWS_AS(glue_realisation(sym_bad), ValidationError);

  CocycleData eta_bad = sphere_cocycle(SphereCocycle::eta_correction);
  (*eta_bad.eta)[1] = Scalar(2) * (*eta_bad.eta)[1];
  CHECK_THROWS_AS(glue_realisation(eta_bad), ValidationError);

  CocycleData zeta_bad = sphere_cocycle(SphereCocycle::exact_zeta);
  zeta_bad.zeta[0] = d(Form::basis(zeta_bad.lattice.cover().charts()[0].chart, {2}, var(0) * var(2)));
  CHECK_THROWS_AS(glue_realisation(zeta_bad), ValidationError);
}

TEST_CASE("coboundary shifts of kappa") {
  // kappa + (lambda_N - lambda_S) with lambda constant multiples of dt.
  CocycleData shifted = sphere_cocycle(SphereCocycle::exact_zeta);
  shifted.kappa[0][0] += Scalar(Rational(3, 7));
  shifted.kappa[1][0] -= Scalar(Rational(3, 7));
  CHECK(glue_realisation(shifted).certificate.passed());
  // An integer shift is a lattice translation and keeps antisymmetry.
  CocycleData lattice_shift = sphere_cocycle(SphereCocycle::trivial);
  lattice_shift.kappa[0][0] = Scalar(1);
  CHECK(glue_realisation(lattice_shift).certificate.passed());
}

TEST_CASE("two-interval base of System B") {
  GluedRealisation g = glue_realisation(split_interval_cocycle(var(0) * var(0)));
  CHECK(g.certificate.passed());
  CHECK(g.realisation.charts()[0].domain.size() == 1);
  CHECK_THROWS_AS(glue_realisation(split_interval_cocycle(var(0) * var(1))), ValidationError);
}

TEST_CASE("mapping torus") {
  const CocycleData m = mapping_torus_cocycle();
  GluedRealisation g = glue_realisation(m);
  CHECK(g.certificate.passed());
  const auto& shear = g.realisation.transitions()[3];
  CHECK(shear.from == "A");
  CHECK(shear.to == "B");
  // theta_B = A^{-T} theta_A with A = [[1,1],[0,1]].
  CHECK(shear.map.images()[2].angle.terms == std::vector<std::pair<std::size_t, int>>{{2, 1}});
  CHECK(shear.map.images()[3].angle.terms == std::vector<std::pair<std::size_t, int>>{{2, -1}, {3, 1}});
  CHECK(!m.lattice.trivial());
}

TEST_CASE("flow pullback identity in closed form") {
  Realisation b = one_chart_realisation(testing::system_b());
  const Chart& base = b.charts()[0].base_chart();
  const Form alpha = Form::basis(base, {0}, Scalar(1) + var(1) * var(1) * var(0));
  Report r = pullback_identity_symbolic(b, 0, alpha);
  CHECK(r.passed());
  CHECK(r.checks[0].detail != "(phi^1)* sigma - sigma = 0");
  Report closed = pullback_identity_symbolic(b, 0, Form::basis(base, {0}, Rational(5, 3)));
  CHECK(closed.passed());
  CHECK(closed.checks[0].detail == "(phi^1)* sigma - sigma = 0");
  CHECK_THROWS_AS(pullback_identity_symbolic(b, 0, coordinate_differential(base, 1)), ValidationError);

  const auto leaves = base_b_leaves();
  cohomo::Cover one({{"U", base, {0}}}, {});
  cohomo::LatticeBundle two(one, {{Scalar(2) * coordinate_differential(base, 0)}}, {});
  Realisation q = quotient_model(leaves, two, leaves.tau());
  CHECK(pullback_identity_symbolic(q, 0, Form::basis(base, {0}, var(2))).passed());

  Realisation s = conormal_model(sphere_leaves(true));
  const Chart& sb = s.charts()[0].base_chart();
  CHECK(pullback_identity_symbolic(s, 0, Form::basis(sb, {2}, var(0) * var(2))).passed());
}

TEST_CASE("unimodular inverse") {
  CHECK(unimodular_inverse({{1, 1}, {0, 1}}) == cohomo::IntMatrix{{1, -1}, {0, 1}});
  CHECK(unimodular_inverse({{2, 1}, {1, 1}}) == cohomo::IntMatrix{{1, -1}, {-1, 2}});
  CHECK_THROWS_AS(unimodular_inverse({{2, 0}, {0, 1}}), ValidationError);
}
