// dynamics.hpp — Time evolution of vectorized states, trajectory errors, and
// exponential decay-rate fitting.
#pragma once

#include <vector>

#include "lindred/linalg.hpp"
#include "lindred/types.hpp"

namespace lindred::dynamics {

// Default sampling grid: a geometric head (resolving early transients) merged
// with a uniform tail, deduplicated, always containing 0 and t_max.
RealVector time_grid(double t_max, int points = 200);

struct PropagateOptions {
  double residual_limit = 1e-8;  // eigenbasis reconstruction residual gate
  bool force_stepper = false;    // skip the eigenbasis route
};

struct Trajectory {
  RealVector times;
  std::vector<Matrix> states;
  bool used_stepper = false;  // scaling-and-squaring fallback was taken
};

// Evolve rho0 under exp(t * gen).  Default route diagonalizes gen once; if the
// eigenbasis is too ill-conditioned to represent rho0, falls back to stepwise
// scaling-and-squaring exponentials (logged to stderr).
Trajectory propagate(const Matrix& gen, const Matrix& rho0, const RealVector& times,
                     const PropagateOptions& opt = {});
Trajectory propagate_with(const linalg::EigGeneral& eig, const Matrix& gen, const Matrix& rho0,
                          const RealVector& times, const PropagateOptions& opt = {});

double expectation(const Matrix& obs, const Matrix& rho);  // Re tr(obs rho)

// Full propagator matrices exp(t * gen), one per entry of times.  Diagonalizes
// gen once when the eigenbasis reconstructs it accurately, otherwise steps
// through sorted times with incremental matrix exponentials.
std::vector<Matrix> propagator_family(const Matrix& gen, const RealVector& times,
                                      const PropagateOptions& opt = {});

struct DecayFit {
  double rate = 0.0;       // decay exponent (positive for decaying signals)
  double intercept = 0.0;  // log-amplitude at t = 0
  int points_used = 0;
  bool window_shrunk = false;
};

// Least-squares fit of log(errors) vs t on the trailing window of the grid.
// Non-positive entries are dropped (window shrunk, flagged).
DecayFit decay_fit(const RealVector& times, const RealVector& errors,
                   double window_fraction = 0.4);

}  // namespace lindred::dynamics
