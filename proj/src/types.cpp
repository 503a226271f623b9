#include "lindred/types.hpp"

#include <Eigen/Eigenvalues>
#include <numeric>

namespace lindred {

void DensityOperator::validate(double eig_tol) const {
  const Matrix& m = op.mat;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol::hermitian)
    throw std::invalid_argument("DensityOperator: not Hermitian");
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > 1e-10)
    throw std::invalid_argument("DensityOperator: trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -eig_tol)
    throw std::invalid_argument("DensityOperator: negative eigenvalue");
}

void LindbladModel::validate(double herm_tol) const {
  if (hamiltonian.rows() != space.dim || hamiltonian.cols() != space.dim)
    throw std::invalid_argument("LindbladModel: Hamiltonian shape mismatch");
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
    throw std::invalid_argument("LindbladModel: Hamiltonian not Hermitian");
  for (const Matrix& l : jumps)
    if (l.rows() != space.dim || l.cols() != space.dim)
      throw std::invalid_argument("LindbladModel: jump shape mismatch");
}

Index BlockAlgebra::total_dim() const {
  return std::accumulate(dims.begin(), dims.end(), Index(0));
}

Index BlockAlgebra::op_dim() const {
  Index s = 0;
  for (Index d : dims) s += d * d;
  return s;
}

std::vector<Index> BlockAlgebra::offsets() const {
  std::vector<Index> off(dims.size());
  Index s = 0;
  for (size_t k = 0; k < dims.size(); ++k) {
    off[k] = s;
    s += dims[k];
  }
  return off;
}

std::vector<Index> BlockAlgebra::block_coords() const {
  const Index d = total_dim();
  std::vector<Index> idx;
  idx.reserve(size_t(op_dim()));
  auto off = offsets();
  // Column-stacking order within each block: (k, j, i) -> (off+j)*d + (off+i).
  for (size_t k = 0; k < dims.size(); ++k)
    for (Index j = 0; j < dims[k]; ++j)
      for (Index i = 0; i < dims[k]; ++i)
        idx.push_back((off[k] + j) * d + (off[k] + i));
  return idx;
}

Matrix BlockAlgebra::selector() const {
  const Index d = total_dim();
  auto idx = block_coords();
  Matrix s = Matrix::Zero(d * d, Index(idx.size()));
  for (Index c = 0; c < Index(idx.size()); ++c) s(idx[size_t(c)], c) = 1.0;
  return s;
}

Matrix BlockAlgebra::pinch() const {
  const Index d = total_dim();
  Matrix p = Matrix::Zero(d * d, d * d);
  for (Index i : block_coords()) p(i, i) = 1.0;
  return p;
}

Matrix BlockAlgebra::maxent_projector() const {
  // |Omega_k> = (1/sqrt(d_k)) Σ_{i in block k} |i i>, pair index (i, j) -> i*d + j.
  const Index d = total_dim();
  auto off = offsets();
  Matrix p = Matrix::Zero(d * d, d * d);
  for (size_t k = 0; k < dims.size(); ++k) {
    Vector omega = Vector::Zero(d * d);
    for (Index i = 0; i < dims[k]; ++i) {
      Index a = off[k] + i;
      omega(a * d + a) = 1.0 / std::sqrt(double(dims[k]));
    }
    p += omega * omega.adjoint();
  }
  return p;
}

Index BlockAlgebra::block_of(Index i) const {
  auto off = offsets();
  for (size_t k = 0; k < dims.size(); ++k)
    if (i < off[k] + dims[k]) return Index(k);
  throw std::out_of_range("BlockAlgebra::block_of");
}

}  // namespace lindred
