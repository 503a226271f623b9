// spectral.hpp — Eigen-analysis of Lindblad generators: peripheral spectrum,
// spectral gap, center-manifold basis, spectral projector, CPTP certification,
// and exponential-convergence verification.
#pragma once

#include <vector>

#include "lindred/dynamics.hpp"
#include "lindred/types.hpp"

namespace lindred::spectral {

struct SpectralData {
  Matrix gen;              // generator matrix the decomposition refers to
  Vector values;           // eigenvalues
  Matrix right;            // right eigenvector columns, cluster-orthonormal
  Matrix left;             // dual columns, left.adjoint()*right = 1 per cluster
  std::vector<Index> peripheral;  // indices with |Re lambda| <= tol_peripheral
  double gap = 0.0;        // min |Re lambda| over the non-peripheral set
  double tol_peripheral = 0.0;
  double scale = 0.0;      // max |lambda|
  bool no_dissipative_part = false;   // every eigenvalue is peripheral
  double peripheral_overlap_cond = 0.0;  // worst cluster overlap condition
  bool defective_nonperipheral = false;  // decaying sector had a Jordan defect
};

// Full eigendecomposition with biorthogonalized left/right pairs.  Warns on
// inputs that are not Hermiticity-preserving and trace-annihilating; throws if
// any eigenvalue has real part above tol_peripheral (unstable input) or the
// kernel is empty.  tol_peripheral < 0 selects the default 1e-7 * max(1, scale).
SpectralData eig_superoperator(const SuperOperator& lv, double tol_peripheral = -1.0);
SpectralData eig_superoperator(const Matrix& gen, double tol_peripheral = -1.0);

struct CenterManifold {
  Matrix basis;            // vectorized peripheral right eigen-operators
  Matrix dual;             // biorthogonal duals, dual.adjoint()*basis = 1
  RealVector frequencies;  // Im lambda per basis column
  Index kernel_dim = 0;    // columns with |frequency| below tolerance
  double gap = 0.0;
};

// Peripheral eigenspace with trivial-Jordan-block verification; throws when the
// peripheral overlap matrix is too ill-conditioned (defective sector).
CenterManifold center_manifold(const SpectralData& sd);

// P = sum over peripheral pairs of |right><left|; checks idempotency,
// commutation with the generator, and CPTP via the Choi matrix.  Throws with
// the violating eigenvalue on certification failure.
SuperOperator spectral_projector(const SpectralData& sd);

struct CptpReport {
  double herm_residual = 0.0;  // Choi Hermiticity defect
  double min_choi_eig = 0.0;
  double tp_residual = 0.0;    // ||tr_out Choi - 1||
  bool cp = false;
  bool tp = false;
  bool ok = false;
};

// Complete-positivity and trace-preservation certificate for a (possibly
// rectangular) superoperator.
CptpReport certify_cptp(const SuperOperator& s, double cp_tol = tol::conditional_cp,
                        double tp_tol = tol::projector);

struct ConvergenceReport {
  RealVector times;
  RealVector errors;   // trace-norm distance from rho(t) to P rho(t)
  RealVector bound;    // Gamma * exp(-(gap - delta) t)
  double gamma = 0.0;  // max of error * exp((gap - delta) t) above noise floor
  double fitted_rate = 0.0;  // late-time log-linear decay rate of the error
};

// Propagates rho0 and checks exponential convergence to the peripheral range
// at rate gap - delta.
ConvergenceReport verify_exponential_convergence(const Matrix& gen, const Matrix& projector,
                                                 double gap, const Matrix& rho0,
                                                 const RealVector& times, double delta);

}  // namespace lindred::spectral
