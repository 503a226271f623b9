// verify.hpp — Named invariant suites over the built-in model zoo, one per
// library module, plus a plain-text summary.  Each check records the measured
// value against its pinned limit so failures carry a witness.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lindred/reduction.hpp"
#include "lindred/rng.hpp"
#include "lindred/types.hpp"

namespace lindred::verify {

struct CheckResult {
  std::string name;
  double value = 0.0;  // measured residual or 0/1 for predicate checks
  double limit = 0.0;
  bool ok = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool ok() const;
};

// Suites: operator_core, spectral, algebra, reduction, perturbation,
// adiabatic, dynamics, models.
std::vector<std::string> suite_names();

// Runs one suite on the zoo at chain length n.  Throws on unknown names.
SuiteReport run_suite(const std::string& name, int n, int seed);

std::vector<SuiteReport> run_all(int n, int seed);

// Fixed-width pass/fail table with per-check values.
std::string summary_text(const std::vector<SuiteReport>& reports);

// Random d-dimensional model: GUE Hamiltonian plus n_jumps Ginibre jumps.
LindbladModel random_model(Index d, int n_jumps, Rng& rng);

// Random invariant-algebra maps on C^d: a random unitary conjugates the block
// structure given by (factor, multiplicity) pairs with full-rank multiplicity
// states.  The pairs must tile the space, sum d_k * m_k = d.
reduction::ReductionMaps random_reduction_maps(
    Index d, const std::vector<std::pair<Index, Index>>& blocks, Rng& rng);

}  // namespace lindred::verify
