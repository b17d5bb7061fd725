#include "corpus.hpp"
#include "doctest.h"

using namespace twp;
using namespace twp::sym;
using namespace twp::ncihs;
using testing::var;

TEST_CASE("normal form charts and the corpus systems") {
  CHECK(normal_form_chart(1, 2).describe() == testing::system_b().chart().describe());
  CHECK(normal_form_chart(1, 2).coord(0).name == "a");
  CHECK(normal_form_chart(1, 2).coord(3).name == "alpha");
  CHECK(normal_form_chart(2, 2).coord(2).name == "alpha1");

  IntegrableSystem b = testing::system_b();
  Form expected = Form::basis(b.chart(), {0, 3}) + Form::basis(b.chart(), {1, 2}, Scalar(1) + var(0) * var(0));
  CHECK(b.sigma() == expected);
  IntegrableSystem a = testing::system_a();
  CHECK(d(a.sigma()).is_zero());
  CHECK(a.base_chart().dim() == 2);
}

TEST_CASE("system construction invariants") {
  IntegrableSystem b = testing::system_b();
  CHECK_THROWS_AS(IntegrableSystem(b.sigma(), {"a", "b1", "alpha"}, 1), ValidationError);
  CHECK_THROWS_AS(IntegrableSystem(b.sigma(), {"a", "b1", "b1"}, 1), ValidationError);
  CHECK_THROWS_AS(IntegrableSystem(b.sigma(), {"a", "b1"}, 1), ValidationError);
  CHECK_THROWS_AS(IntegrableSystem(b.sigma(), {"a", "b1", "b2"}, 3), ValidationError);
}

TEST_CASE("NC1 strongly hamiltonian integrals") {
  CHECK(check_nc1_strongly_hamiltonian(testing::system_b()).passed());
  CHECK(check_nc1_strongly_hamiltonian(testing::system_a()).passed());
  IntegrableSystem wrong(testing::system_b().sigma(), {"b1", "a", "b2"}, 1);
  Report r = check_nc1_strongly_hamiltonian(wrong);
  CHECK(!r.passed());
  CHECK(r.checks.front().detail.find("da") != std::string::npos);
}

TEST_CASE("NC2 commutation") {
  IntegrableSystem a = testing::system_a();
  CHECK(check_nc2_commutation(a).passed());
  CHECK(a.bracket(var(0), var(1)).is_zero());
  IntegrableSystem b = testing::system_b();
  CHECK(check_nc2_commutation(b).passed());
  CHECK(b.bracket(var(0), var(1)).is_zero());
  CHECK(b.bracket(var(0), var(2)).is_zero());
  // With b1 declared as the integral, {b1, b2} = -1/(1+a^2) does not vanish.
  IntegrableSystem wrong(b.sigma(), {"b1", "a", "b2"}, 1);
  Report r = check_nc2_commutation(wrong);
  CHECK(!r.passed());
  CHECK(r.find("{b1,b2} = 0")->verdict == Verdict::fail);
  CHECK(r.find("{b1,a} = 0")->verdict == Verdict::pass);
}

TEST_CASE("NC3 submersion") {
  auto pts = testing::random_points(10, 4, 1);
  Report ra = check_nc3_submersion(testing::system_a(), pts);
  CHECK(ra.passed());
  CHECK(*ra.checks.front().value == 2.0);
  Report rb = check_nc3_submersion(testing::system_b(), pts);
  CHECK(*rb.checks.front().value == 3.0);
}

TEST_CASE("induced base structure") {
  IntegrableSystem b = testing::system_b();
  BaseStructure base = induced_base_bracket(b);
  CHECK(base.report.passed());
  CHECK(base.structure.pi().coefficient({1, 2}) == Scalar(-1) / (Scalar(1) + var(0) * var(0)));
  CHECK(base.structure.phi() == Form::basis(b.base_chart(), {0, 1, 2}, Scalar(2) * var(0)));

  BaseStructure a = induced_base_bracket(testing::system_a());
  CHECK(a.structure.pi().is_zero());
  CHECK(a.structure.phi().is_zero());

  NormalFormSpec s{2, 2, {{Scalar(), var(0)}, {-var(0), Scalar()}}, {}, {}};
  IntegrableSystem nf = build_normal_form(s);
  CHECK(d(nf.sigma()).is_zero());
  BaseStructure nb = induced_base_bracket(nf);
  CHECK(nb.structure.pi().is_zero());
  CHECK(nb.structure.phi().is_zero());

  // A fibre-dependent sigma gives non-basic brackets.
  Chart c = b.chart();
  Form bad = b.sigma() + Form::basis(c, {1, 2}, Scalar::cos(3, 1) * Scalar(Rational(1, 4)));
  IntegrableSystem nb2(bad, {"a", "b1", "b2"}, 1);
  CHECK_THROWS_AS(induced_base_bracket(nb2), ValidationError);
}

TEST_CASE("normal form examples") {
  NormalFormSpec s{1, 2, {}, {}, {{Scalar(), Scalar(1)}, {Scalar(-1), Scalar()}}};
  s.b = {{var(1), Scalar()}};
  IntegrableSystem sys = build_normal_form(s);
  CHECK(d(sys.sigma()).is_zero());
  CHECK(check_nc1_strongly_hamiltonian(sys).passed());

  NormalFormSpec bad{1, 2, {}, {}, {{Scalar(), Scalar(1)}, {Scalar(1), Scalar()}}};
  CHECK_THROWS_AS(build_normal_form(bad), ValidationError);
  NormalFormSpec angle_dep{1, 2, {}, {{Scalar::cos(3, 1), Scalar()}}, {{Scalar(), Scalar(1)}, {Scalar(-1), Scalar()}}};
  CHECK_THROWS_AS(build_normal_form(angle_dep), ValidationError);
}

TEST_CASE("random normal forms round trip through the base structure") {
  std::mt19937_64 rng(2024);
  const std::pair<int, int> shapes[] = {{1, 1}, {1, 2}, {2, 2}, {1, 3}, {2, 3}};
  for (auto [k, n] : shapes)
    for (int trial = 0; trial < 2; ++trial) {
      NormalFormSpec spec = testing::random_normal_form_spec(rng, k, n);
      IntegrableSystem sys = build_normal_form(spec);
      auto pts = testing::random_points(20, sys.chart().dim(), unsigned(trial + 10 * k + n));
      CHECK(check_all(sys, pts).passed());
      BaseStructure base = induced_base_bracket(sys);
      CHECK(base.report.passed());
      CHECK(pullback(base.structure.phi(), sys.projection()) == d(sys.sigma()));
      // Morphism identity on random base functions.
      Scalar h1 = testing::random_poly(rng, sys.base_chart(), 2, 3);
      Scalar h2 = testing::random_poly(rng, sys.base_chart(), 2, 3);
      CHECK(sys.bracket(pullback(h1, sys.projection()), pullback(h2, sys.projection())) ==
            pullback(structures::bracket(base.structure, h1, h2), sys.projection()));
      auto base_pts = testing::random_points(20, sys.base_chart().dim(), unsigned(trial));
      for (int r : structures::rank_at(base.structure, base_pts)) CHECK(r == 2 * (n - k));
    }
}
