#pragma once

#include <string>
#include <vector>

#include "twp/core/report.hpp"
#include "twp/structures/structures.hpp"
#include "twp/symcalc/chart_map.hpp"

namespace twp::ncihs {

using sym::Chart;
using sym::ChartMap;
using sym::Form;
using sym::Multivector;
using sym::Scalar;
using ScalarMatrix = std::vector<std::vector<Scalar>>;

// Almost symplectic manifold with a coordinate-projection fibration. The first
// k names of `fibration` are the strongly Hamiltonian integrals; the k omitted
// coordinates must be angles, so fibres are tori.
class IntegrableSystem {
 public:
  IntegrableSystem(Form sigma, std::vector<std::string> fibration, int k);

  const Chart& chart() const { return sigma_.chart(); }
  const Form& sigma() const { return sigma_; }
  int k() const { return k_; }
  int n() const { return static_cast<int>(chart().dim() / 2); }
  // Total-chart indices of F, in declared order.
  const std::vector<std::size_t>& integrals() const { return integrals_; }
  const std::vector<std::size_t>& fibre() const { return fibre_; }
  const Chart& base_chart() const { return base_; }
  const structures::AlmostSymplectic& almost_symplectic() const { return almost_; }
  // (pi_sigma, d sigma) on the total chart.
  const structures::TwistedPoisson& structure() const { return structure_; }

  // F as a chart map onto the base, and the zero section back.
  ChartMap projection() const;
  ChartMap zero_section() const;

  Scalar bracket(const Scalar& f, const Scalar& g) const { return structures::bracket(structure_, f, g); }
  Multivector hamiltonian(const Scalar& h) const { return structures::hamiltonian_vf(structure_, h); }

 private:
  Form sigma_;
  int k_;
  std::vector<std::size_t> integrals_, fibre_;
  Chart base_;
  structures::AlmostSymplectic almost_;
  structures::TwistedPoisson structure_;
};

Report check_nc1_strongly_hamiltonian(const IntegrableSystem& s);
Report check_nc2_commutation(const IntegrableSystem& s);
Report check_nc3_submersion(const IntegrableSystem& s, const std::vector<std::vector<double>>& xs);
Report check_all(const IntegrableSystem& s, const std::vector<std::vector<double>>& xs);

struct BaseStructure {
  structures::TwistedPoisson structure;
  Report report;
};

// pi_P(dx^i, dx^j) = {F*x^i, F*x^j}_sigma and F*phi_P = d sigma. Throws
// ValidationError naming the offending pair or term when something is not basic.
BaseStructure induced_base_bracket(const IntegrableSystem& s);

// sigma = sum da^l^dalpha^l + 1/2 A_lr da^l^da^r + B_lu da^l^db^u + 1/2 C_uv db^u^db^v
// on the chart returned by normal_form_chart. Matrix entries are expressions in
// that chart.
struct NormalFormSpec {
  int k = 1;
  int n = 1;
  ScalarMatrix a, b, c;
};

// Coordinates a.., b1.., alpha..; with k = 1 the single pair is named a, alpha.
Chart normal_form_chart(int k, int n);
Form normal_form_sigma(const NormalFormSpec& spec);
// Builds the system and self-tests NC1-NC3; throws ValidationError on failure.
IntegrableSystem build_normal_form(const NormalFormSpec& spec);

}  // namespace twp::ncihs
