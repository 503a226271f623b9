// algebra.hpp — Structure theory of the projector range: reference fixed
// state, undistortion to a genuine *-algebra on its support, and the
// block factorization (unitary U, factor dimensions, multiplicity states).
#pragma once

#include <vector>

#include "lindred/types.hpp"

namespace lindred::algebra {

// Reference state rho_bar = P(1/n); its support equals the support of Im P.
// Validated Hermitian, trace one, positive within tolerance.
Matrix fixed_state(const SuperOperator& p);

struct SupportAlgebra {
  Matrix support;             // d x s isometry onto supp(rho_bar)
  Matrix rho_support;         // s x s restriction of rho_bar, full rank
  std::vector<Matrix> basis;  // s x s matrices spanning the undistorted algebra
  double closure_residual = 0.0;
};

// Right-multiplies the projector-range basis by rho_bar^{-1} on the support,
// turning the distorted product into the ordinary one; verifies closure under
// multiplication and adjoint.  Throws when the result is not a *-algebra.
SupportAlgebra undistort(const std::vector<Matrix>& a_basis, const Matrix& rho_bar);

struct FactorBlock {
  Index dim_factor = 0;  // matrix-algebra factor dimension
  Index dim_mult = 0;    // multiplicity-space dimension carrying tau
  Matrix tau;            // full-rank density on the multiplicity space
};

struct WedderburnStructure {
  Matrix u;  // full-space unitary: columns ordered block by block, then remainder
  std::vector<FactorBlock> blocks;
  Index support_dim = 0;
  Index remainder_dim = 0;
  int seed_used = 0;

  // Reduced algebra ⊕_k B(C^{dim_factor_k}).
  BlockAlgebra reduced_algebra() const;
  // Columns of u spanning block k (d x dim_factor_k * dim_mult_k).
  Matrix block_isometry(size_t k) const;
  Index block_offset(size_t k) const;  // column offset of block k in u
};

// Factorizes the undistorted algebra: finds the center via the commutant,
// splits into central blocks, pairs factor and multiplicity coordinates with
// generic algebra elements, and reads the multiplicity states off rho_bar.
// Deterministic given the seed; retries internally on degenerate draws.
WedderburnStructure wedderburn_decompose(const SupportAlgebra& sa, int seed = 0);

// Commutant { X : [X, b] = 0 for all b in basis } inside B(C^s).
std::vector<Matrix> commutant(const std::vector<Matrix>& basis, Index s);

}  // namespace lindred::algebra
