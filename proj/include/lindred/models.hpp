// models.hpp — Case-study model zoo: a dissipative XXZ chain with its
// magnetization-sector structure, a site-disordered Hamiltonian perturbation,
// and a dephasing chain whose first-order reduction is a classical rate model.
#pragma once

#include <cstdint>
#include <vector>

#include "lindred/perturbation.hpp"
#include "lindred/reduction.hpp"
#include "lindred/types.hpp"

namespace lindred::models {

struct XxzSpec {
  int n = 3;           // spins, periodic chain
  double omega = 1.2;  // on-site splitting
  double a_xy = 2.0;   // in-plane exchange coupling
  double a_z = 4.6;    // longitudinal coupling
  double gamma = 1.2;  // incoherent hopping amplitude

  void validate() const;  // n >= 2, gamma > 0, a_xy >= 0
};

// Chain Hamiltonian
//   H = sum_j [ (omega/2) sz_j + (a_xy/2)(sx_j sx_{j+1} + sy_j sy_{j+1}) + a_z sz_j sz_{j+1} ]
// with periodic boundaries and incoherent-hopping jumps gamma sp_j sm_{j+1}.
// Self-checks that total magnetization Jz commutes with H and every jump and is
// conserved in the Heisenberg picture (within 1e-9).
LindbladModel build_xxz(const XxzSpec& spec);

struct SectorData {
  RealVector m_values;                         // sector magnetizations, descending
  std::vector<Index> dims;                     // binomial dimensions, sum 2^n
  Operator permutation;                        // columns: |0L>, |1L>, then interior sectors
  std::vector<DensityOperator> steady_states;  // maximally mixed sector states, aligned with m_values
  Operator logical_x, logical_y, logical_z;    // full-space logical qubit operators
  Matrix logical_isometry;                     // d x 2, columns |0L>, |1L>
  double omega0 = 0.0;                         // logical precession frequency n * omega
};

// Magnetization sectors of the chain: dims d_m = C(n, n/2 - m), the fully
// polarized states spanning a decoherence-free logical qubit, and one
// maximally mixed steady state per sector.
SectorData sector_data(const XxzSpec& spec);

struct DisorderPerturbation {
  Operator h1;
  double omega_bar = 0.0;                    // sum of the drawn on-site frequencies
  std::vector<double> omega, a_x, a_y, a_z;  // per-site draws, uniform on [0, 2)
};

// Site-disordered chain Hamiltonian
//   H1 = sum_j [ (omega_j/2) sz_j + a_xj sx_j sx_{j+1} + a_yj sy_j sy_{j+1} + a_zj sz_j sz_{j+1} ]
// with all parameters i.i.d. uniform on [0, 2); deterministic in the seed
// (draw order: per site, omega then the three couplings).
DisorderPerturbation disorder_perturbation(int n, std::uint64_t seed);

// Two-term family L(eps) = L(model0) + eps * (-i[h1, .]).
perturbation::PerturbedGenerator hamiltonian_family(const LindbladModel& model0,
                                                    const Operator& h1);

struct DephasingSpec {
  int n = 3;
  double a_z = 1.0;
  std::vector<double> mu_x, mu_plus, mu_minus;  // per-site non-negative amplitudes

  void validate() const;
};

// Random transverse-noise amplitudes, i.i.d. uniform on [0, 1)
// (draw order: per site, mu_x then mu_plus then mu_minus).
DephasingSpec dephasing_random(int n, double a_z, std::uint64_t seed);

struct DephasingChain {
  LindbladModel model0;                     // H0 = a_z sum sz_j sz_{j+1}, one sz jump per site
  perturbation::PerturbedGenerator family;  // terms [L0, L1], L1 = transverse dissipators
  reduction::ReductionMaps classical;       // diagonal-algebra maps, r = j = pinch
  RealMatrix metzler;                       // classical rate matrix M; reduced L1 equals M
  double metzler_residual = 0.0;            // entrywise match of the reduction against M
};

// Dephasing-dominated chain with transverse noise sum_j {mu_x sx, mu_+ s+, mu_- s-}.
// The unperturbed center manifold is the diagonal algebra; the first-order
// reduced generator is the classical rate matrix
//   M = sum_j 1 (x) [[-alpha_j, beta_j], [alpha_j, -beta_j]] (x) 1,
// alpha_j = mu_x^2 + mu_-^2 (excitation), beta_j = mu_x^2 + mu_+^2 (decay).
DephasingChain build_dephasing(const DephasingSpec& spec);

}  // namespace lindred::models
