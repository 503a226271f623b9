// kernels.hpp — Dense matrix kernels used throughout the library.  Each kernel
// has an OpenMP-parallel entry point (default) and a serial reference
// implementation under kernels::serial used for testing and benchmarking.
// Parallel loops carry no reductions, so results are identical to the serial
// versions bit for bit regardless of thread count.
#pragma once

#include <vector>

#include "lindred/types.hpp"

namespace lindred::kernels {

// Kronecker product, row-major pair convention: (A ⊗ B)[(i*p + k), (j*q + l)] = A(i,j) B(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

// GKLS generator in column-stacking vectorization:
//   L = -i (1 ⊗ H - H^T ⊗ 1) + Σ_k [ conj(L_k) ⊗ L_k - 1/2 1 ⊗ (L_k^† L_k) - 1/2 (L_k^† L_k)^T ⊗ 1 ].
Matrix liouvillian(const Matrix& h, const std::vector<Matrix>& jumps);

// Choi matrix of a superoperator on B(C^d):  C[(i*d + k), (j*d + l)] = S[(l*d + k), (j*d + i)].
Matrix choi_reshuffle(const Matrix& superop, Index d);

// Columns t of the result are V * (exp(eigs * times[t]) .* c0): batched
// propagation of one vectorized initial condition through an eigenbasis.
Matrix phase_propagate(const Matrix& v, const Vector& c0, const Vector& eigs,
                       const RealVector& times);

void set_threads(int n);  // clamp to >= 1; also reachable via LINDRED_THREADS
int threads();

namespace serial {
Matrix kron(const Matrix& a, const Matrix& b);
Matrix liouvillian(const Matrix& h, const std::vector<Matrix>& jumps);
Matrix choi_reshuffle(const Matrix& superop, Index d);
Matrix phase_propagate(const Matrix& v, const Vector& c0, const Vector& eigs,
                       const RealVector& times);
}  // namespace serial

}  // namespace lindred::kernels
