#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "twp/cohomo/lattice.hpp"
#include "twp/core/report.hpp"
#include "twp/realization/realization.hpp"
#include "twp/symcalc/numeric.hpp"

namespace twp::dynamics {

using sym::Form;
using Vec = std::vector<double>;
using Basis = std::vector<Vec>;

struct FlowConfig {
  double h = 1e-3;        // RK4 step in time units
  double eps_ret = 1e-6;  // return tolerance in the angle metric
  double t_max = 10.0;    // search horizon for returns
  void validate() const;
};

// Base covector components (all base coordinates) at a base point.
using CovectorField = std::function<Vec(std::span<const double>)>;

// Numeric view of one realisation chart: X = pi_sigma^#(p* alpha), i.e. i(X) sigma = p* alpha.
class FlowChart {
 public:
  FlowChart(const realization::Realisation& r, std::size_t chart);

  const realization::RealisationChart& chart() const { return chart_; }
  std::size_t dim() const { return dim_; }
  std::size_t base_dim() const { return base_dim_; }
  const std::vector<std::size_t>& casimirs() const { return chart_.casimirs; }

  Vec field(std::span<const double> m, std::span<const double> base_covector) const;
  bool in_domain(std::span<const double> m) const;
  double sigma(std::span<const double> m, std::span<const double> u, std::span<const double> v) const;

  // Covector sum_i c_i dc^i with constant components in the Casimir frame.
  CovectorField casimir_covector(const Vec& c) const;
  // Coefficients of a base 1-form; rejects forms that are not conormal.
  CovectorField form_covector(const Form& alpha) const;

 private:
  realization::RealisationChart chart_;
  std::size_t dim_, base_dim_;
  sym::CompiledMatrix sigma_;
  std::vector<sym::CompiledScalar> domain_;
};

struct FlowResult {
  Vec point;     // angles are not reduced
  double drift;  // max |p(result) - p(m0)|
  std::size_t steps;
};

// One classical RK4 step of size h.
Vec rk4_step(const FlowChart& c, const CovectorField& alpha, const Vec& m, double h);

// Fixed-step RK4 of the flow for time t with round(|t| / h) steps. Throws
// DomainEscape when the trajectory leaves the chart domain.
FlowResult integrate_flow(const FlowChart& c, const CovectorField& alpha, const Vec& m0, double t,
                          const FlowConfig& cfg = {});

// Max over angle coordinates of the distance to the nearest integer of the
// difference, and max |difference| over real coordinates.
double return_distance(const FlowChart& c, std::span<const double> a, std::span<const double> b);

// phi^1_a o phi^1_b (m0) against phi^1_b o phi^1_a (m0) within 100 h^4.
Report commuting_flow_check(const FlowChart& c, const Vec& a, const Vec& b, const Vec& m0, const FlowConfig& cfg = {});

struct TangentPair {
  Vec u, v;
};

// (phi^1_alpha)* sigma - sigma against p* d alpha on tangent pairs, using
// central differences of the flow map. Error relative to max(|rhs|, 1).
Report pullback_identity_numeric(const FlowChart& c, const Form& alpha, const Vec& m0,
                                 const std::vector<TangentPair>& pairs, const FlowConfig& cfg = {},
                                 double delta = 1e-5, double tolerance = 1e-4);

struct PeriodLattice {
  Vec x0;
  Basis basis;  // rows in the Casimir frame
  double residual = 0.0;
};

// k = 1: scan for the first return and refine inside the last step.
// k = 2: Newton on the unwrapped angle displacement, then Gauss reduction.
PeriodLattice period_lattice(const FlowChart& c, const Vec& m0, const FlowConfig& cfg = {});

// Reduced basis with positive leading entries; rows ordered by length, then by
// the position of the leading entry.
Basis canonical_basis(Basis b);

// A grid over base coordinates p and q; the other coordinates come from m0.
struct LatticeGrid {
  std::size_t p = 0, q = 1;
  Vec p_values, q_values;
  Vec m0;
};

// Central-difference d of each lattice section on the grid, after matching
// bases between neighbouring nodes.
Report lattice_closedness_check(const FlowChart& c, const LatticeGrid& g, const FlowConfig& cfg = {},
                                double tolerance = 1e-3);

struct LoopNode {
  std::string chart;
  Vec base;
};

struct MonodromyMatrix {
  cohomo::IntMatrix matrix;
  double residual = 0.0;  // largest distance to an integer before rounding
  long det = 0;
};

// Transports the period lattice along the loop (first node = last node) and
// expresses the final basis in the initial one.
MonodromyMatrix monodromy(const realization::Realisation& r, const std::vector<LoopNode>& loop, const Vec& fibre,
                          const FlowConfig& cfg = {});

struct OrderCheck {
  double coarse = 0.0, fine = 0.0, ratio = 0.0;
};

// Return residual of phi^1_lambda at step h against step h / 2.
OrderCheck rk4_order_check(const FlowChart& c, const Vec& lambda, const Vec& m0, double h);

}  // namespace twp::dynamics
