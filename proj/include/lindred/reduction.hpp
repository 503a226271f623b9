// reduction.hpp — CPTP factorization P = J R of the spectral projector,
// reduced generators, Lindblad-form certification on block algebras, canonical
// Hamiltonian/jump extraction, and the end-to-end reduction pipeline.
#pragma once

#include <vector>

#include "lindred/algebra.hpp"
#include "lindred/spectral.hpp"
#include "lindred/types.hpp"

namespace lindred::reduction {

struct ReductionMaps {
  SuperOperator r;       // full space -> reduced block algebra coordinates
  SuperOperator j;       // reduced -> full; j.mat * r.mat = projector
  BlockAlgebra algebra;  // reduced algebra ⊕_k B(C^{d_k})
  Index check_dim = 0;   // Σ d_k^2 = dimension of the reduced algebra
};

// R(X) = ⊕_k tr_mult(W_k^H X W_k) composed with the projector (so it is trace
// preserving off the algebra support); J(Y) = Σ_k W_k (Y_k ⊗ tau_k) W_k^H on
// block-diagonal Y, extended by the pinching onto the block algebra.  Both are
// certified CPTP; R J equals the pinch and J R equals the projector.
ReductionMaps build_reduction_maps(const algebra::WedderburnStructure& w, const SuperOperator& p);

// builds the canonical projector J ∘ R from the structure itself; requires the
// blocks to span the full space (no remainder)
ReductionMaps build_reduction_maps(const algebra::WedderburnStructure& w);

struct LindbladCheckReport {
  bool ok = false;
  double min_conditional_eig = 0.0;  // off the per-block maximally entangled span
  double tp_residual = 0.0;
  double herm_residual = 0.0;
  double leak_residual = 0.0;  // generator component leaving the block algebra
};

// Certifies that gen generates a CPTP semigroup on the given block algebra:
// Hermiticity preservation, trace annihilation, and conditional complete
// positivity of the Choi matrix off span{ |Omega_k> }.
LindbladCheckReport lindblad_check(const SuperOperator& gen, const BlockAlgebra& alg);
LindbladCheckReport lindblad_check(const SuperOperator& gen);  // full matrix algebra

// Reduced generator R L J, hard-certified in Lindblad form (CPTP maps cannot
// yield anything else; failure signals broken inputs).
SuperOperator reduced_generator(const SuperOperator& lv, const ReductionMaps& maps);

struct GklsForm {
  Matrix hamiltonian;          // block diagonal, traceless on each block
  std::vector<Matrix> jumps;   // rate-weighted noise operators
  Matrix kossakowski;          // PSD certificate: per-block rates ⊕ cross-block Chois
  double reconstruction_residual = 0.0;
};

// Canonical GKLS data: per-block Hamiltonians in the traceless gauge with the
// Kossakowski matrix in the generalized Gell-Mann basis, plus cross-block jump
// operators from the sector Choi matrices.
GklsForm extract_hamiltonian_jumps(const SuperOperator& gen, const BlockAlgebra& alg);
GklsForm extract_hamiltonian_jumps(const SuperOperator& gen);

struct AsymptoticReport {
  RealVector times;
  RealVector errors;  // trace-norm distance between full and injected reduced evolution
  RealVector bound;   // Gamma * exp(-(gap - delta) t)
  double gamma = 0.0;
  double antihermitian_residual = 0.0;  // unitarity defect of the reduced generator
};

// Compares e^{L t} rho0 against J e^{L_red t} R rho0 and checks the
// exponential error bound and reduced-generator unitarity.
AsymptoticReport verify_asymptotic_reduction(const SuperOperator& lv, const ReductionMaps& maps,
                                             const SuperOperator& lred, double gap,
                                             const Matrix& rho0, const RealVector& times,
                                             double delta);

// End-to-end reduction of a model: spectrum -> projector -> algebra ->
// factorization -> maps -> certified reduced generator -> GKLS data.
struct Pipeline {
  SuperOperator projector;
  double gap = 0.0;
  Index center_dim = 0;  // peripheral eigenvalue count
  Index kernel_dim = 0;
  RealVector frequencies;  // peripheral imaginary parts
  algebra::WedderburnStructure wedderburn;
  ReductionMaps maps;
  SuperOperator reduced_gen;
  LindbladCheckReport cert;
  GklsForm reduced_form;
};

Pipeline reduce_generator(const SuperOperator& lv, int seed = 0);
Pipeline reduce_model(const LindbladModel& model, int seed = 0);

}  // namespace lindred::reduction
