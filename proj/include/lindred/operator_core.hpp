// operator_core.hpp — Elementary operators, spin-chain embeddings, the
// column-stacking vectorization, GKLS superoperator construction, Choi
// matrices, and JSON model ingestion.
#pragma once

#include <string>
#include <vector>

#include "lindred/types.hpp"

namespace lindred::ops {

// ---- elementary qubit operators (|0> = spin up, sigma_z |0> = |0>) ----
Matrix id2();
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix sigma_plus();   // [[0,1],[0,0]]
Matrix sigma_minus();  // [[0,0],[1,0]]
Matrix basis_op(Index d, Index i, Index j);  // E_ij = |i><j|

// Embed a local operator at `site` (1-based) of an n-site qubit chain.
// Site 1 is the leftmost (most significant) Kronecker factor; site n+1 wraps to 1.
Matrix embed_site(const Matrix& local, int site, int n_sites);

// ---- vectorization (column stacking: vec(X)[j*d + i] = X(i,j)) ----
Vector vectorize(const Matrix& x);
Matrix devectorize(const Vector& v, Index d);
Matrix apply_superop(const Matrix& superop, const Matrix& x);

// ---- superoperator builders ----
Matrix hamiltonian_superop(const Matrix& h);          // -i[H, .]
Matrix dissipator(const Matrix& l);                   // L . L^dag - 1/2 {L^dag L, .}
Matrix liouvillian_matrix(const Matrix& h, const std::vector<Matrix>& jumps);
SuperOperator liouvillian(const LindbladModel& model);

// HS-adjoint (Heisenberg picture) of a superoperator matrix.
Matrix heisenberg_adjoint(const Matrix& superop);

// ---- Choi matrices ----
// C[(i*dout + k), (j*dout + l)] = map(E_ij)[k, l]; square maps use dout = din.
Matrix choi_matrix(const Matrix& superop);
Matrix choi_matrix_rect(const Matrix& superop, Index d_in, Index d_out);
// Partial trace over the output factor of a (d_in*d_out)^2 Choi matrix.
Matrix choi_output_trace(const Matrix& choi, Index d_in, Index d_out);

bool is_hermitian(const Matrix& x, double tol = tol::hermitian);

// Trace-orthonormal Hermitian basis of B(C^d): identity/sqrt(d) first, then
// the generalized Gell-Mann operators in lexicographic order (symmetric and
// antisymmetric pairs (j,k), j < k, then diagonal ones).
std::vector<Matrix> hermitian_basis(Index d);

// ---- JSON model ingestion ----
// Schema (all other keys rejected):
// {
//   "sites": int >= 1, "local_dim": 2,
//   "hamiltonian_terms": [ {"coeff": real, "paulis": [[op, site], ...]}, ... ],
//   "jump_terms": [ {"coeff": real | [re, im], "paulis": [[op, site], ...]}, ... ],
//   "params": { ... }   // optional, free-form, carried through to reports
// }
// op in {"x","y","z","+","-"}; sites 1-based; factors multiply in listed order.
LindbladModel model_from_json(const std::string& text);
LindbladModel model_from_json_file(const std::string& path);

}  // namespace lindred::ops
