#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twp/cohomo/lattice.hpp"
#include "twp/core/report.hpp"
#include "twp/ncihs/ncihs.hpp"
#include "twp/structures/structures.hpp"

namespace twp::realization {

using sym::Chart;
using sym::ChartMap;
using sym::Form;
using sym::Multivector;
using sym::Scalar;

// One chart of a realisation: base coordinates followed by fibre coordinates.
struct RealisationChart {
  std::string id;
  Form sigma;
  structures::TwistedPoisson base;  // (pi, phi) on the base chart, a prefix of sigma's chart
  std::vector<std::size_t> casimirs;
  std::vector<Scalar> domain = {};  // base inequalities f > 0

  const Chart& total() const { return sigma.chart(); }
  const Chart& base_chart() const { return base.chart(); }
  std::size_t base_dim() const { return base_chart().dim(); }
  std::vector<std::size_t> fibre() const;
  bool compact() const;
};

// psi maps total coordinates of `from` to total coordinates of `to`.
struct FibreTransition {
  std::string from, to;
  ChartMap map;
  std::vector<Scalar> domain = {};  // in base coordinates of `from`
};

class Realisation {
 public:
  // Checks chart shapes, that each sigma is almost symplectic and that every
  // transition covers a base map (base images independent of the fibre).
  Realisation(std::vector<RealisationChart> charts, std::vector<FibreTransition> transitions);

  const std::vector<RealisationChart>& charts() const { return charts_; }
  const std::vector<FibreTransition>& transitions() const { return transitions_; }
  std::size_t index(const std::string& id) const;
  const RealisationChart& chart(const std::string& id) const { return charts_[index(id)]; }
  std::size_t fibre_rank() const { return charts_[0].total().dim() - charts_[0].base_dim(); }
  const structures::AlmostSymplectic& almost_symplectic(std::size_t j) const { return almost_[j]; }
  // p as a chart map from total to base on chart j.
  ChartMap projection(std::size_t j) const;
  bool in_domain(std::size_t j, std::span<const double> base_point) const;

 private:
  std::vector<RealisationChart> charts_;
  std::vector<FibreTransition> transitions_;
  std::vector<structures::AlmostSymplectic> almost_;
};

// IR1-IR4 per chart, strong Hamiltonicity of the fibre generators and
// psi* sigma_to = sigma_from on every transition.
Report verify_ir(const Realisation& r);

// A system in normal form whose integrals are the leading coordinates.
Realisation one_chart_realisation(const ncihs::IntegrableSystem& s, const std::string& id = "U");

// sigma_0 = sum dc^i ^ dp_i + pr* tau with real fibres p_i; realises (pi, d tau).
Realisation conormal_model(const structures::LeafDecomposition& l);

// sigma = sum lambda_u ^ d theta_u + pr*(s_pullback) over a one-chart lattice.
Realisation quotient_model(const structures::LeafDecomposition& l, const cohomo::LatticeBundle& lattice,
                           const Form& s_pullback);

struct CocycleData {
  cohomo::LatticeBundle lattice;  // cover with its conormal frame and transitions
  std::vector<structures::TwistedPoisson> base;
  cohomo::ChartForms tau, zeta;
  // Per overlap: components of kappa in the `to` frame pulled back, as functions
  // of `from` coordinates. kappa = sum_u k_u map* e_to^u.
  std::vector<std::vector<Scalar>> kappa;
  std::optional<cohomo::ChartForms> eta;
};

struct GluedRealisation {
  Realisation realisation;
  Report certificate;
};

// kappa as a 1-form on the `from` chart of each overlap.
cohomo::ChartForms kappa_forms(const CocycleData& d);

// Builds sigma_j = sum e_j^u ^ d theta_u + p*(tau + zeta_j - eta) and the angle
// transitions theta_to = A^{-T} theta_from - k. Throws ValidationError when the
// cocycle data are inconsistent.
GluedRealisation glue_realisation(const CocycleData& d);

// Relative cocycle -d(zeta) - (d tau - phi) of the glued data and the witness -eta.
cohomo::ChartForms glued_relative_cocycle(const CocycleData& d);
std::optional<cohomo::ChartForms> glued_witness(const CocycleData& d);

// Time-1 flow of pi_sigma^#(p* alpha) as a fibre translation, pulled back
// symbolically and compared with p* d alpha.
Report pullback_identity_symbolic(const Realisation& r, std::size_t chart, const Form& alpha);

// Integer inverse of a unimodular matrix.
cohomo::IntMatrix unimodular_inverse(const cohomo::IntMatrix& a);

}  // namespace twp::realization
