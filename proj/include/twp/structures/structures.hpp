#pragma once

#include <array>
#include <map>
#include <vector>

#include "twp/core/report.hpp"
#include "twp/symcalc/calculus.hpp"

namespace twp::structures {

using sym::Chart;
using sym::Form;
using sym::Multivector;
using sym::Scalar;

// Non-degenerate 2-form on an even-dimensional chart. Construction checks that
// the determinant of the coefficient matrix is not the zero expression.
class AlmostSymplectic {
 public:
  explicit AlmostSymplectic(Form sigma);

  const Form& sigma() const { return sigma_; }
  const Chart& chart() const { return sigma_.chart(); }
  const Scalar& determinant() const { return det_; }

  // Numeric spot check; throws DegeneracyError with the first failing sample.
  void certify(const std::vector<std::vector<double>>& samples, double tolerance = 1e-9) const;

 private:
  Form sigma_;
  Scalar det_;
};

class TwistedPoisson {
 public:
  TwistedPoisson(Multivector pi, Form phi);

  const Multivector& pi() const { return pi_; }
  const Form& phi() const { return phi_; }
  const Chart& chart() const { return pi_.chart(); }

 private:
  Multivector pi_;
  Form phi_;
};

// pi_sigma with i(pi_sigma^# dh) sigma = dh.
Multivector bivector_from_form(const AlmostSymplectic& m);
TwistedPoisson twisted_from_form(const AlmostSymplectic& m);

Scalar bracket(const TwistedPoisson& s, const Scalar& h1, const Scalar& h2);
Multivector hamiltonian_vf(const TwistedPoisson& s, const Scalar& h);
// Solves i(X)sigma = dh directly from the transposed coefficient matrix.
Multivector hamiltonian_vf(const AlmostSymplectic& m, const Scalar& h);

struct TwistedCheck {
  // [pi,pi] - 2 (wedge^3 pi^#) phi; zero iff the twisted Jacobi identity holds.
  Multivector eq1_residual;
  // {x^i,{x^j,x^k}} + cyclic - phi(X_i, X_j, X_k) for increasing coordinate triples.
  std::map<std::array<int, 3>, Scalar> jacobiator_residual;
  bool eq1_zero = false;
  bool jacobiator_zero = false;
  Report report;
  bool passed() const { return eq1_zero && jacobiator_zero; }
};

// Throws ValidationError("twisting form not closed") when d(phi) != 0.
TwistedCheck verify_twisted(const TwistedPoisson& s);

// L_{pi^# a} b - L_{pi^# b} a - d pi(a,b) - phi(pi^# a, pi^# b, .)
Form algebroid_bracket(const TwistedPoisson& s, const Form& alpha, const Form& beta);
// [X1,X2] = X_{h1,h2} - pi^#(phi(X1,X2,.))
Report check_vf_bracket_identity(const TwistedPoisson& s, const Scalar& h1, const Scalar& h2);

// Numeric rank of pi at each sample; singular values below tol * largest count as zero.
std::vector<int> rank_at(const TwistedPoisson& s, const std::vector<std::vector<double>>& xs, double tol = 1e-9);
int numeric_rank(const std::vector<double>& row_major, std::size_t rows, std::size_t cols, double tol = 1e-9);

// True if the pullback of w to every leaf {casimirs = const} vanishes, i.e. every
// component whose indices all lie outside the Casimir coordinates is zero.
bool vanishes_on_leaves(const Form& w, const std::vector<std::size_t>& casimirs);

class LeafDecomposition {
 public:
  // Checks pi^#(dc) = 0 for each Casimir coordinate and that tau restricts to
  // the leaf forms of pi: tau(pi^# a, pi^# b) = pi(b, a) for coordinate covectors.
  LeafDecomposition(TwistedPoisson base, std::vector<std::size_t> casimirs, Form tau);

  const TwistedPoisson& base() const { return base_; }
  const std::vector<std::size_t>& casimirs() const { return casimirs_; }
  const Form& tau() const { return tau_; }
  std::vector<std::size_t> leaf_coordinates() const;

 private:
  TwistedPoisson base_;
  std::vector<std::size_t> casimirs_;
  Form tau_;
};

struct CharacteristicData {
  Form tau;
  Form phi;
  Form residual;  // d(tau) - phi, vanishing on leaves
};

CharacteristicData characteristic_residual(const LeafDecomposition& l, const Form& phi);

}  // namespace twp::structures
