// linalg.hpp — LAPACK-backed decompositions and small solvers shared by the
// spectral, algebra, and adiabatic modules.
#pragma once

#include <utility>
#include <vector>

#include "lindred/types.hpp"

namespace lindred::linalg {

// General (non-Hermitian) eigendecomposition.  right.col(j) is a right
// eigenvector; left.col(j) satisfies left.col(j)^H A = values[j] left.col(j)^H.
struct EigGeneral {
  Vector values;
  Matrix right;
  Matrix left;
};
EigGeneral eig_general(const Matrix& a, bool want_left = true);

// Hermitian eigendecomposition (ascending eigenvalues).
struct EigHermitian {
  RealVector values;
  Matrix vectors;
};
EigHermitian eig_hermitian(const Matrix& a);

// Complex Schur decomposition a = q t q^H with t upper triangular.
struct SchurDecomp {
  Matrix t, q;
};
SchurDecomp schur(const Matrix& a);

Matrix expm(const Matrix& a);

double sop_norm(const Matrix& a);    // largest singular value
double trace_norm(const Matrix& a);  // sum of singular values
double hs_norm(const Matrix& a);     // Frobenius norm
double max_abs(const Matrix& a);
double cond2(const Matrix& a);       // sigma_max / sigma_min

// Orthonormal basis of the kernel / column space, cut at rel_tol * sigma_max.
// A positive scale replaces sigma_max as the cut anchor; use it when the
// input may be near zero as a whole (every direction is then kernel).
Matrix nullspace(const Matrix& a, double rel_tol = tol::rank, double scale = -1.0);
Matrix range_basis(const Matrix& a, double rel_tol = tol::rank);

// Singular values with right singular vectors only; factor.s is descending
// and vt has min(rows, cols) rows.  diag(s) * vt has the same Gram matrix as
// the input, so it serves as a memory-light stand-in for stacked systems.
struct SvdRight {
  RealVector s;
  Matrix vt;
};
SvdRight svd_right(const Matrix& a);

// Gram-Schmidt via Householder QR: orthonormal basis of span(columns).
Matrix orthonormalize(const Matrix& a, double rel_tol = tol::rank);

// Solve A X - X B = C.  Dense Kronecker-lifted solve when max dim <= 200,
// Schur-based substitution above.
Matrix sylvester(const Matrix& a, const Matrix& b, const Matrix& c);

// Unitary polar factor (left singular vectors times right^H).
Matrix polar_unitary(const Matrix& a);

// Cluster a set of complex values with relative gap threshold; returns groups
// of indices, values within a group pairwise closer than rel_gap * scale.
std::vector<std::vector<Index>> cluster_values(const Vector& values,
                                               double rel_gap = tol::cluster_rel_gap);

}  // namespace lindred::linalg
