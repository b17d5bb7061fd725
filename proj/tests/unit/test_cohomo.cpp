#include <chrono>

#include "corpus.hpp"
#include "doctest.h"
#include "twp/cohomo/obstruction.hpp"

using namespace twp;
using namespace twp::sym;
using namespace twp::cohomo;
using testing::var;

namespace {

Chart line(const char* name) { return Chart({{name, CoordKind::real}}); }

sym::ChartMap shift_map(const Chart& from, const Chart& to, const Scalar& shift) {
  std::vector<CoordinateImage> im(1);
  im[0].expr = var(0) + shift;
  return sym::ChartMap(from, to, im);
}

Cover base_b_cover() {
  Chart c({{"a", CoordKind::real}, {"b1", CoordKind::real}, {"b2", CoordKind::real}});
  return Cover({{"U", c, {0}}}, {});
}

ChartForms scaled(const ChartForms& w, const Scalar& s) {
  ChartForms out;
  for (const auto& f : w) out.push_back(s * f);
  return out;
}

ChartForms class_integrand(const Cover& cover, long d) {
  ChartForms out;
  const ChartForms area = sphere_area_form(cover);
  for (std::size_t j = 0; j < area.size(); ++j)
    out.push_back(Scalar(d) * wedge(area[j], coordinate_differential(cover.charts()[j].chart, 2)));
  return out;
}

// upsilon = k(t) h1 dh2 ^ dt with h1 = 1/(1+r^2), h2 = u/(1+r^2) written on both charts.
ChartForms stokes_upsilon(const Cover& cover) {
  ChartForms out;
  for (std::size_t j = 0; j < 2; ++j) {
    const Chart& c = cover.charts()[j].chart;
    const Scalar r2 = var(0) * var(0) + var(1) * var(1);
    const Scalar h1 = j == 0 ? Scalar(1) / (Scalar(1) + r2) : r2 / (Scalar(1) + r2);
    const Scalar h2 = var(0) / (Scalar(1) + r2);
    const Scalar k = Scalar(1) + var(2) * var(2) * var(2);
    out.push_back(wedge(k * h1 * differential(c, h2), coordinate_differential(c, 2)));
  }
  return out;
}

LatticeBundle sphere_lattice(const Cover& cover) {
  std::vector<std::vector<Form>> basis;
  for (const auto& c : cover.charts()) basis.push_back({coordinate_differential(c.chart, 2)});
  return LatticeBundle(cover, basis, {identity_matrix(1), identity_matrix(1)});
}

}  // namespace

TEST_CASE("sphere cover data is consistent on the overlap") {
  Cover cover = sphere_interval_cover();
  CHECK(check_overlap_consistency(cover, sphere_area_form(cover), "area").passed());
  CHECK(check_overlap_consistency(cover, stokes_upsilon(cover), "upsilon").passed());
  CHECK(check_overlap_consistency(cover, class_integrand(cover, 2), "integrand").passed());
  ChartForms bad = sphere_area_form(cover);
  bad[1] = Scalar(2) * bad[1];
  CHECK(!check_overlap_consistency(cover, bad, "area").passed());
  CHECK(north_weight(0.3, 0.5, 2.0) == 1.0);
  CHECK(north_weight(2.5, 0.5, 2.0) == 0.0);
  CHECK(north_weight(1.25, 0.5, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("obstruction integral of the class-d integrand") {
  Cover cover = sphere_interval_cover();
  for (long d = -3; d <= 3; ++d) {
    const auto start = std::chrono::steady_clock::now();
    ObstructionResult r = obstruction_integral({cover, class_integrand(cover, d), std::nullopt, {}});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(std::abs(r.value + double(d)) < 1e-6);
    CHECK(secs < 10.0);
  }
  // Orientation flip changes the sign; linearity in the integrand.
  SphereCell flipped;
  flipped.orientation = 1;
  CHECK(std::abs(integrate_cell(cover, class_integrand(cover, 1), flipped, {}).refined - 1.0) < 1e-6);
  SphereCell tall;
  tall.t1 = 3.0;
  CHECK(std::abs(integrate_cell(cover, class_integrand(cover, 1), tall, {}).refined + 3.0) < 1e-6);
}

TEST_CASE("Stokes control with a leaf-vanishing 2-form") {
  Cover cover = sphere_interval_cover();
  ObstructionResult r = obstruction_integral({cover, class_integrand(cover, 1), stokes_upsilon(cover), {}});
  REQUIRE(r.stokes);
  CHECK(std::abs(*r.stokes) < 1e-6);
  CHECK(r.report.passed());
  // d(upsilon) is not identically zero, so the check is not vacuous.
  CHECK(!d(stokes_upsilon(cover)[0]).is_zero());
  ChartForms not_relative = sphere_area_form(cover);
  CHECK_THROWS_AS(obstruction_integral({cover, class_integrand(cover, 1), not_relative, {}}), ValidationError);
}

TEST_CASE("lattice bundles from atlases and back") {
  Cover b = base_b_cover();
  TIAStructure t(b, {{var(0)}}, {});
  LatticeBundle l = lattice_from_atlas(t);
  CHECK(l.basis(0)[0] == coordinate_differential(b.charts()[0].chart, 0));
  CHECK(l.trivial());

  // Two overlapping intervals with r2 = r1 + 1/2.
  Chart c1 = line("a"), c2 = line("a");
  Cover two({{"I1", c1, {0}}, {"I2", c2, {0}}}, {{"I1", "I2", shift_map(c1, c2, Scalar())}});
  TIAStructure shifted(two, {{var(0)}, {var(0) + Scalar(Rational(1, 2))}}, {{{{1}}, {Rational(1, 2)}}});
  LatticeBundle ls = lattice_from_atlas(shifted);
  CHECK(ls.basis(0)[0] == ls.basis(1)[0]);
  CHECK_THROWS_AS(TIAStructure(two, {{var(0)}, {var(0) + Scalar(Rational(1, 2))}}, {{{{1}}, {Rational(0)}}}),
                  ValidationError);

  // Round trip with primitives.
  TIAStructure back = atlas_from_lattice(ls, {{var(0)}, {var(0) + Scalar(Rational(1, 2))}});
  CHECK(back.transition(0).c[0] == Rational(1, 2));
  LatticeBundle ll = lattice_from_atlas(back);
  CHECK(ll.basis(1)[0] == ls.basis(1)[0]);

  LatticeBundle two_da(b, {{Scalar(2) * coordinate_differential(b.charts()[0].chart, 0)}}, {});
  TIAStructure r2 = atlas_from_lattice(two_da, {{Scalar(2) * var(0)}});
  CHECK(r2.submersion(0)[0] == Scalar(2) * var(0));
  CHECK_THROWS_AS(atlas_from_lattice(two_da, {{var(0)}}), ValidationError);

  Cover s = sphere_interval_cover();
  TIAStructure st(s, {{var(2)}, {var(2)}}, {{{{1}}, {Rational(0)}}, {{{1}}, {Rational(0)}}});
  LatticeBundle sl = lattice_from_atlas(st);
  CHECK(sl.trivial());
  CHECK(sl.certificate().passed());
}

TEST_CASE("lattice bundle invariants") {
  Cover b = base_b_cover();
  const Chart& c = b.charts()[0].chart;
  CHECK_THROWS_AS(LatticeBundle(b, {{Form::basis(c, {0}, Scalar(1) + var(0) * var(1))}}, {}), ValidationError);
  CHECK_THROWS_AS(LatticeBundle(b, {{coordinate_differential(c, 1)}}, {}), ValidationError);
  Chart c1 = line("a"), c2 = line("a");
  Cover two({{"I1", c1, {0}}, {"I2", c2, {0}}}, {{"I1", "I2", shift_map(c1, c2, Scalar())}});
  std::vector<std::vector<Form>> basis = {{coordinate_differential(c1, 0)}, {coordinate_differential(c2, 0)}};
  CHECK_THROWS_AS(LatticeBundle(two, basis, {{{2}}}), ValidationError);
  CHECK_NOTHROW(LatticeBundle(two, basis, {{{1}}}));
  CHECK(cohomo::determinant(IntMatrix{{1, 1}, {0, 1}}) == 1);
  CHECK(cohomo::determinant(IntMatrix{{2, 1}, {1, 1}}) == 1);
}

TEST_CASE("Dazord-Delzant map on a trivial lattice") {
  Cover cover = sphere_interval_cover();
  LatticeBundle l = sphere_lattice(cover);
  ChartForms c = scaled(sphere_area_form(cover), Scalar(2));
  ChartForms dd = dazord_delzant_trivial(l, c, 0);
  CHECK(dd[0] == class_integrand(cover, 2)[0]);
  CHECK(dd[1] == class_integrand(cover, 2)[1]);
  ChartForms zero = {Form(cover.charts()[0].chart, 2), Form(cover.charts()[1].chart, 2)};
  CHECK(dazord_delzant_trivial(l, zero, 0)[0].is_zero());
  // An exact leaf-valued class dλ with λ = f dt gives an exact (here zero) image.
  ChartForms exact;
  for (const auto& ch : cover.charts()) exact.push_back(d(Form::basis(ch.chart, {2}, var(0) * var(2))));
  ChartForms img = dazord_delzant_trivial(l, exact, 0);
  CHECK(std::abs(integrate_cell(cover, img, {}, {}).refined) < 1e-12);
  CHECK_THROWS_AS(dazord_delzant_trivial(l, c, 1), ValidationError);
}

TEST_CASE("criterion on the sphere example") {
  Cover cover = sphere_interval_cover();
  LatticeBundle l = sphere_lattice(cover);
  ChartForms zero = {Form(cover.charts()[0].chart, 3), Form(cover.charts()[1].chart, 3)};
  ChartForms zero2 = {Form(cover.charts()[0].chart, 2), Form(cover.charts()[1].chart, 2)};

  CriterionInput pass_in{zero2, 0, zero, std::nullopt, SphereCell{}, {}, 1e-6};
  Report pass = criterion_check(l, pass_in);
  CHECK(pass.overall() == Verdict::pass);

  for (long dd : {-2L, 1L, 3L}) {
    CriterionInput in{scaled(sphere_area_form(cover), Scalar(dd)), 0, zero, std::nullopt, SphereCell{}, {}, 1e-6};
    Report r = criterion_check(l, in);
    CHECK(r.overall() == Verdict::fail);
    CHECK(std::abs(*r.find("criterion")->value + double(dd)) < 1e-6);
  }
  // Without a cell and without a witness nothing is decided.
  CriterionInput open{scaled(sphere_area_form(cover), Scalar(1)), 0, zero, std::nullopt, std::nullopt, {}, 1e-6};
  CHECK(criterion_check(l, open).overall() == Verdict::undecided);
}

TEST_CASE("criterion with an exactness witness") {
  Cover b = base_b_cover();
  const Chart& c = b.charts()[0].chart;
  LatticeBundle l(b, {{coordinate_differential(c, 0)}}, {});
  CriterionInput in;
  in.c_rep = {Form::basis(c, {1, 2})};
  in.characteristic = {Form(c, 3)};
  in.witness = ChartForms{Form::basis(c, {2, 0}, var(1))};
  CHECK(criterion_check(l, in).overall() == Verdict::pass);
  in.witness = ChartForms{Form::basis(c, {2, 0}, var(2))};
  CHECK(criterion_check(l, in).overall() == Verdict::undecided);
  // The characteristic residual of System B's base vanishes, so c = 0 passes outright.
  in.c_rep = {Form(c, 2)};
  in.witness.reset();
  CHECK(criterion_check(l, in).overall() == Verdict::pass);
}
