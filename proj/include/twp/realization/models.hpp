#pragma once

#include "twp/realization/realization.hpp"

namespace twp::realization {

// Cocycle data over the two stereographic charts of S^2 x R with
// tau = (1 + t^2) omega, omega the area-1 form, and lattice frame dt.
enum class SphereCocycle {
  trivial,         // kappa = 0, zeta = 0, phi = d tau
  interval_shift,  // kappa = h(t) dt, zeta = 0
  exact_zeta,      // zeta_S = d(F dt), kappa = -F dt on N->S
  eta_correction,  // eta = h1 dh2 ^ dt, phi = d tau - d eta
};
CocycleData sphere_cocycle(SphereCocycle kind);

// Base {y > 0} with x ~ x + y, covered by two strips, pi = 0 and sigma
// = dx ^ d theta1 + dy ^ d theta2 on each chart. Going once around x
// changes the lattice frame by a shear.
CocycleData mapping_torus_cocycle();

// Base of System B split into a < 1 and a > 0 with kappa = g(a) da.
CocycleData split_interval_cocycle(const Scalar& g);

}  // namespace twp::realization
