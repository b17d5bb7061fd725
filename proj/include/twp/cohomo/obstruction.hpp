#pragma once

#include <optional>

#include "twp/cohomo/lattice.hpp"
#include "twp/structures/structures.hpp"

namespace twp::cohomo {

// Two stereographic charts N = (u, v, t) and S = (x, y, t) of S^2 x R with
// (u, v) = (x, -y) / (x^2 + y^2) on the overlap; t is the Casimir.
Cover sphere_interval_cover();
// 1 / (pi (1 + p^2 + q^2)^2) in coordinates p, q; area 1 on S^2.
Scalar sphere_density(int p, int q);
// The area form density * dp^dq on each chart of sphere_interval_cover.
ChartForms sphere_area_form(const Cover& cover);

struct QuadratureConfig {
  int order = 8;   // Gauss-Legendre points per panel and axis
  int panels = 4;  // panels per radial segment; angular and t panels scale with it
};

// S^2 x [t0, t1]. The chart frames (u, v, t) and (x, y, t) are negatively
// oriented with respect to the outward-normal orientation of S^2 times dt,
// which is the default cell orientation.
struct SphereCell {
  double t0 = 0.0, t1 = 1.0;
  double r0 = 0.5, r1 = 2.0;  // partition of unity switches between these radii
  int orientation = -1;       // sign of the chart frame relative to the cell orientation
};

// Weight of the north chart: 1 for r <= r0, 0 for r >= r1, quintic smoothstep between.
double north_weight(double r, double r0, double r1);

struct CellIntegral {
  double value = 0.0;
  double refined = 0.0;  // same integral with twice as many panels
};

// Integral of a 3-form given on the two charts of sphere_interval_cover.
CellIntegral integrate_cell(const Cover& cover, const ChartForms& w, const SphereCell& cell, const QuadratureConfig& q);

struct ObstructionIntegrand {
  Cover cover;
  ChartForms form;
  std::optional<ChartForms> upsilon;  // leaf-vanishing 2-form; d(upsilon) must integrate to 0
  SphereCell cell;
};

struct ObstructionResult {
  double value = 0.0;
  std::optional<double> stokes;  // integral of d(upsilon)
  Report report;
};

// Throws NumericalError when the integral does not settle under refinement.
ObstructionResult obstruction_integral(const ObstructionIntegrand& in, const QuadratureConfig& q = {},
                                       double tolerance = 1e-6);

struct CriterionInput {
  ChartForms c_rep;                    // closed leaf-valued class representative
  std::size_t frame = 0;               // lattice frame form paired with c_rep
  ChartForms characteristic;           // d(tau) - phi per chart
  std::optional<ChartForms> witness;   // upsilon with d(upsilon) = D(c) - (d(tau) - phi)
  std::optional<SphereCell> cell;      // cell for the necessary integral condition
  QuadratureConfig quadrature;
  double tolerance = 1e-6;
};

// PASS on an exactness witness (the zero witness when the cocycle vanishes),
// FAIL when a cell integral is nonzero, UNDECIDED otherwise.
Report criterion_check(const LatticeBundle& l, const CriterionInput& in);
// As above for an already formed relative cocycle.
Report decide_relative_cocycle(const Cover& cover, const ChartForms& r, const CriterionInput& in);

}  // namespace twp::cohomo
