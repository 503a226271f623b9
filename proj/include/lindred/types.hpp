// types.hpp — Core value types: Hilbert spaces, operators, superoperators,
// Lindblad models, block algebras, and the pinned numerical tolerances.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lindred {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// ---- pinned tolerances (used across modules and tests) ----
namespace tol {
inline constexpr double hermitian = 1e-10;        // Hermiticity residuals
inline constexpr double positivity = 1e-10;       // density-operator min eigenvalue
inline constexpr double biorthogonality = 1e-8;   // <left_i, right_j> = delta_ij
inline constexpr double projector = 1e-8;         // idempotence, commutation, CPTP cert
inline constexpr double conditional_cp = 1e-8;    // min conditional Choi eigenvalue
inline constexpr double closure = 1e-7;           // algebra closure / reconstruction
inline constexpr double reconstruction = 1e-7;    // GKLS reconstruction residual
inline constexpr double unitary = 1e-9;           // U^dag U = 1
inline constexpr double metzler = 1e-9;           // classical generator comparison
inline constexpr double ae_invariance = 1e-7;     // first-order invariance residual
inline constexpr double gauge_realized = 1e-10;   // gauge construction residual
inline constexpr double consistency = 1e-9;       // AE vs algebraic-route agreement
inline constexpr double peripheral_scale = 1e-7;  // x spectral radius -> peripheral cut
inline constexpr double tau_full_rank = 1e-10;    // min eigenvalue of factor states
inline constexpr double cluster_rel_gap = 1e-6;   // eigenvalue clustering threshold
inline constexpr double rank = 1e-10;             // generic numerical rank cut
}  // namespace tol

// ---- HilbertSpace ----
struct HilbertSpace {
  Index dim = 0;
  std::vector<Index> site_dims;  // empty when the space carries no site structure

  HilbertSpace() = default;
  explicit HilbertSpace(Index d) : dim(d) {
    if (d <= 0) throw std::invalid_argument("HilbertSpace: dim must be positive");
  }
  static HilbertSpace qubits(int n) {
    if (n < 1 || n > 12) throw std::invalid_argument("HilbertSpace: site count out of range");
    HilbertSpace h(Index(1) << n);
    h.site_dims.assign(size_t(n), 2);
    return h;
  }
  int sites() const { return int(site_dims.size()); }
};

// ---- Operator ----
struct Operator {
  HilbertSpace space;
  Matrix mat;

  Operator() = default;
  Operator(HilbertSpace s, Matrix m) : space(std::move(s)), mat(std::move(m)) {
    if (mat.rows() != mat.cols() || mat.rows() != space.dim)
      throw std::invalid_argument("Operator: matrix shape does not match space");
  }
};

// ---- DensityOperator ----
struct DensityOperator {
  Operator op;

  DensityOperator() = default;
  explicit DensityOperator(Operator o) : op(std::move(o)) {}
  // Throws unless Hermitian, unit trace, and min eigenvalue > -tol.
  void validate(double eig_tol = tol::positivity) const;
};

// ---- SuperOperator ----
// Matrix representation in column-stacking convention: vec(X)[j*d + i] = X(i, j).
struct SuperOperator {
  Index dim_in = 0;   // Hilbert dim of input operators
  Index dim_out = 0;  // Hilbert dim of output operators
  Matrix mat;         // (dim_out^2) x (dim_in^2)

  SuperOperator() = default;
  SuperOperator(Index din, Index dout, Matrix m)
      : dim_in(din), dim_out(dout), mat(std::move(m)) {
    if (mat.rows() != dout * dout || mat.cols() != din * din)
      throw std::invalid_argument("SuperOperator: matrix shape mismatch");
  }
};

// ---- LindbladModel ----
struct LindbladModel {
  HilbertSpace space;
  Matrix hamiltonian;          // Hermitian
  std::vector<Matrix> jumps;   // noise operators
  std::string name;

  void validate(double herm_tol = tol::hermitian) const;
};

// ---- BlockAlgebra ----
// The operator algebra  A = ⊕_k B(C^{d_k})  of block-diagonal matrices inside
// B(C^D), D = Σ d_k.  Reduced generators live on this algebra; helpers expose
// the block-diagonal coordinate set of the vectorized space C^{D^2}.
struct BlockAlgebra {
  std::vector<Index> dims;

  BlockAlgebra() = default;
  explicit BlockAlgebra(std::vector<Index> d) : dims(std::move(d)) {
    for (Index x : dims)
      if (x <= 0) throw std::invalid_argument("BlockAlgebra: block dims must be positive");
  }
  static BlockAlgebra full(Index d) { return BlockAlgebra(std::vector<Index>{d}); }

  Index total_dim() const;                 // D
  Index op_dim() const;                    // Σ d_k^2
  std::vector<Index> offsets() const;      // block start indices in C^D
  std::vector<Index> block_coords() const; // vec indices of block-diagonal entries
  Matrix selector() const;                 // D^2 x op_dim, 0/1, orthonormal columns
  Matrix pinch() const;                    // D^2 x D^2 projector onto block coords
  Matrix maxent_projector() const;         // projector onto span{ |Omega_k> } in C^D ⊗ C^D
  Index block_of(Index i) const;           // block index containing basis state i
};

}  // namespace lindred
