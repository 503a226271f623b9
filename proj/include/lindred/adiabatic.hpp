// adiabatic.hpp — First-order adiabatic elimination: splitting the generator
// into peripheral and stable sectors, Sylvester solves for the first-order
// projector correction, gauge-parameterized reduced generators, and truncated
// injection/reduction families with a Lindblad-form certificate.
#pragma once

#include <string>
#include <vector>

#include "lindred/perturbation.hpp"
#include "lindred/reduction.hpp"
#include "lindred/types.hpp"

namespace lindred::adiabatic {

// Similarity transform splitting the unperturbed generator into the rotating
// peripheral sector L0 (purely imaginary spectrum) and the decaying sector LS
// (spectrum strictly in the open left half-plane).
struct BlockSplit {
  Matrix basis_from_block;  // T: block coordinates -> full coordinates
  Matrix basis_to_block;    // T^{-1}
  Matrix l0_block;          // peripheral sector, peripheral_dim^2 entries
  Matrix ls_block;          // stable sector
  Index peripheral_dim = 0;
  Index stable_dim = 0;
  double offdiag_residual = 0.0;  // leakage of T^{-1} L T outside the blocks
};

// Splits along the ranges of the spectral projector p0 and its complement.
// Throws when p0 is not an idempotent commuting with l0 or when the two
// sector spectra are not disjoint.
BlockSplit block_split(const SuperOperator& l0, const SuperOperator& p0);

// Same split, but the peripheral coordinates are the reduced block-algebra
// coordinates of the maps: the first rows of T^{-1} act as the reduction and
// the first columns of T as the injection.
BlockSplit block_split(const SuperOperator& l0, const reduction::ReductionMaps& maps);

// Off-diagonal Sylvester blocks of the first-order projector correction.
struct SylvesterBlocks {
  Matrix xb;  // solves L0 XB - XB LS = LB1
  Matrix xc;  // solves LS XC - XC L0 = -LC1
  double residual_b = 0.0;
  double residual_c = 0.0;
  double separation = 0.0;  // min |lambda(L0) - lambda(LS)|
};

// Solves the two Sylvester equations coupling the sectors through the
// perturbation l1; residuals are checked against 1e-8 * ||l1||.
SylvesterBlocks solve_P1(const BlockSplit& split, const SuperOperator& l1);

// P1 = T [[0, XB], [XC, 0]] T^{-1}; satisfies P0 P1 + P1 P0 = P1.
Matrix assemble_p1(const BlockSplit& split, const SylvesterBlocks& blocks);

enum class GaugeKind { zero, random_uniform, random_commutant };

// The gauge G = R0 J1 is the free variable of first-order elimination:
// zero, i.i.d. U([0,1]) entries, or a random element commuting with the
// order-zero reduced generator (uniform diagonal in its eigenbasis).
struct GaugeStrategy {
  GaugeKind kind = GaugeKind::zero;
  int seed = 0;

  static GaugeStrategy zero() { return {GaugeKind::zero, 0}; }
  static GaugeStrategy random_uniform(int seed) { return {GaugeKind::random_uniform, seed}; }
  static GaugeStrategy random_commutant(int seed) { return {GaugeKind::random_commutant, seed}; }
  std::string name() const;
};

// First-order elimination data on the reduced block algebra.  The reduced
// operators act on the reduced space and are supported on the algebra
// coordinates; truncated families are affine in epsilon.
struct AEFirstOrder {
  SuperOperator l_hat_0;  // R0 L0 J0
  SuperOperator l_hat_1;  // R0 L1 J0 + [l_hat_0, gauge]
  Matrix gauge;           // realized as R0 J1
  SuperOperator j1;       // first-order injection correction
  SuperOperator r1;       // first-order reduction correction
  reduction::ReductionMaps maps0;
  GaugeStrategy strategy;
  double invariance_residual = 0.0;  // ||L1 J0 + L0 J1 - J1 l_hat_0 - J0 l_hat_1||
  double gauge_residual = 0.0;       // ||R0 J1 - gauge||
  double commutator_norm = 0.0;      // ||[l_hat_0, gauge]||

  SuperOperator l_tilde(double eps) const;  // l_hat_0 + eps l_hat_1
  SuperOperator j_tilde(double eps) const;  // J0 + eps J1
  SuperOperator r_tilde(double eps) const;  // R0 + eps R1
};

// Builds the first-order elimination for the leading two orders of gen around
// the invariant subspace described by maps0.  Enforces the order-one
// invariance identity and the realized gauge on construction.
AEFirstOrder first_order_AE(const perturbation::PerturbedGenerator& gen,
                            const reduction::ReductionMaps& maps0,
                            const GaugeStrategy& strategy = GaugeStrategy::zero());

// Gauge-independent part of the elimination: the sector split and the
// Sylvester solves, which dominate the cost.  Realizing a gauge afterwards is
// cheap, so sweeps over many gauge draws should prepare once.
struct AEWorkspace {
  reduction::ReductionMaps maps0;
  BlockSplit split;
  SylvesterBlocks sylvester;
  Matrix l0, l1;  // leading generator orders in full coordinates
  Matrix la;      // peripheral block of the first-order term
};

AEWorkspace prepare_AE(const perturbation::PerturbedGenerator& gen,
                       const reduction::ReductionMaps& maps0);
AEFirstOrder realize_gauge(const AEWorkspace& ws, const GaugeStrategy& strategy);

// Lindblad-form certificate of the truncated generator across an eps grid.  A
// commuting gauge guarantees a pass; a failed check carries the witness in
// the per-eps report (the condition is sufficient, not necessary).
struct AECertification {
  RealVector eps_grid;
  std::vector<reduction::LindbladCheckReport> checks;
  double commutator_norm = 0.0;
  double invariance_residual = 0.0;
  bool all_pass = false;
};
AECertification certify_first_order(const AEFirstOrder& ae, const RealVector& eps_grid);

}  // namespace lindred::adiabatic
