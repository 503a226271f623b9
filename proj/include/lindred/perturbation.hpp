// perturbation.hpp — Polynomial-in-epsilon generator families, their reduction
// through fixed CPTP maps, and finite-time error bounds for the reduced
// dynamics against the full one.
#pragma once

#include <string>
#include <vector>

#include "lindred/reduction.hpp"
#include "lindred/types.hpp"

namespace lindred::perturbation {

// Generator family L(eps) = sum_k eps^k terms[k].  Individual terms need not
// generate CPTP semigroups on their own; only assembled members must.
struct PerturbedGenerator {
  std::vector<SuperOperator> terms;
  double eps0 = 1.0;  // natural magnitude of the expansion parameter

  void validate() const;  // shape consistency across terms
  SuperOperator evaluate(double eps) const;
};

// Splits l0 + delta into a two-term family with a unit-norm first-order term;
// eps0 carries the magnitude of delta.  The family is checked to stay a valid
// generator on a sample grid over [0, eps0].
PerturbedGenerator from_additive(const SuperOperator& l0, const SuperOperator& delta);

// R0 L(eps) J0 on the reduced block algebra, certified to generate a CPTP
// semigroup there.  Certification failure is a hard error.
SuperOperator reduced_perturbed(const PerturbedGenerator& gen,
                                const reduction::ReductionMaps& maps0, double eps);

struct ErrorBoundReport {
  RealVector times;
  double eps = 0.0;
  double l1_norm = 0.0;            // spectral norm of the first-order term
  RealVector lhs_i, rhs_i;         // state-level distance and its linear bound
  RealVector lhs_ii, rhs_ii;       // projected distance and its quadratic bound
  std::vector<bool> in_window_i;   // rhs_i <= 0.5, where the linear bound is informative
  std::vector<bool> in_window_ii;  // rhs_ii <= 0.5
  std::string norm_kind = "hs_induced_spectral";
};

// Propagator-level errors of the reduced model, in the superoperator norm
// induced by the Hilbert-Schmidt norm (largest singular value):
//   lhs_i(t)  = || e^{t L(eps)} P0 - J0 e^{t Lred(eps)} R0 ||
//   lhs_ii(t) = || P0 e^{t L(eps)} P0 - J0 e^{t Lred(eps)} R0 ||
// with P0 = J0 R0 and bounds rhs_i = t |eps| ||L1||, rhs_ii = (t eps ||L1||)^2 / 2.
// Requires a two-term family.
ErrorBoundReport error_bounds(const PerturbedGenerator& gen,
                              const reduction::ReductionMaps& maps0, double eps,
                              const RealVector& times);

}  // namespace lindred::perturbation
