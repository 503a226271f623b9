#include "lindred/rng.hpp"

#include <Eigen/QR>

namespace lindred {

Matrix Rng::ginibre(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = cnormal();
  return m;
}

Matrix Rng::hermitian(Index n) {
  Matrix g = ginibre(n, n);
  return 0.5 * (g + g.adjoint());
}

Matrix Rng::unitary(Index n) {
  Matrix g = ginibre(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the factorization is unique (diag(R) > 0).
  for (Index j = 0; j < n; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix Rng::density(Index n, double min_eig) {
  Matrix g = ginibre(n, n);
  Matrix rho = g * g.adjoint();
  rho += min_eig * double(n) * Matrix::Identity(n, n);
  rho /= rho.trace().real();
  return rho;
}

Vector Rng::state(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = cnormal();
  return v / v.norm();
}

}  // namespace lindred
