#include "lindred/kernels.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lindred::kernels {

namespace {
int g_threads = 0;  // 0: library default

int env_threads() {
  const char* s = std::getenv("LINDRED_THREADS");
  if (!s) return 0;
  int v = std::atoi(s);
  return v > 0 ? v : 0;
}
}  // namespace

void set_threads(int n) {
  g_threads = std::max(0, n);
#ifdef _OPENMP
  if (g_threads > 0) omp_set_num_threads(g_threads);
#endif
}

int threads() {
  if (g_threads > 0) return g_threads;
  int e = env_threads();
  if (e > 0) return e;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

Matrix kron(const Matrix& a, const Matrix& b) {
  const Index n = a.rows(), m = a.cols(), p = b.rows(), q = b.cols();
  Matrix c(n * p, m * q);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) c.block(i * p, j * q, p, q) = a(i, j) * b;
  return c;
}

namespace detail {
// Column (l*n + k) of the GKLS superoperator, written into col (length n^2):
// rows j*n + i get  delta_{jl} A(i,k) + delta_{ik} B(l,j) + sum_m conj(L_m(j,l)) L_m(i,k)
// with A = -iH - K/2, B = iH - K/2, K = sum_m L_m^dag L_m.
inline void liouvillian_column(Index l, Index k, const Matrix& a, const Matrix& b,
                               const std::vector<Matrix>& jumps, Complex* col, Index n) {
  for (Index j = 0; j < n; ++j) {
    Eigen::Map<Vector> seg(col + j * n, n);
    seg.setZero();
    if (j == l) seg += a.col(k);
    seg(k) += b(l, j);
    for (const Matrix& lm : jumps) {
      Complex w = std::conj(lm(j, l));
      if (w != Complex(0.0, 0.0)) seg += w * lm.col(k);
    }
  }
}

inline std::pair<Matrix, Matrix> gkls_ab(const Matrix& h, const std::vector<Matrix>& jumps) {
  const Index n = h.rows();
  Matrix kk = Matrix::Zero(n, n);
  for (const Matrix& l : jumps) kk += l.adjoint() * l;
  const Complex mi(0.0, -1.0);
  Matrix a = mi * h - 0.5 * kk;
  Matrix b = -mi * h - 0.5 * kk;
  return {std::move(a), std::move(b)};
}
}  // namespace detail

Matrix liouvillian(const Matrix& h, const std::vector<Matrix>& jumps) {
  const Index n = h.rows();
  auto [a, b] = detail::gkls_ab(h, jumps);
  Matrix s(n * n, n * n);
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < n; ++k)
      detail::liouvillian_column(l, k, a, b, jumps, s.col(l * n + k).data(), n);
  return s;
}

Matrix choi_reshuffle(const Matrix& superop, Index d) {
  if (superop.rows() != d * d || superop.cols() != d * d)
    throw std::invalid_argument("choi_reshuffle: shape mismatch");
  Matrix c(d * d, d * d);
  for (Index j = 0; j < d; ++j)
    for (Index l = 0; l < d; ++l)
      for (Index i = 0; i < d; ++i)
        for (Index k = 0; k < d; ++k)
          c(i * d + k, j * d + l) = superop(l * d + k, j * d + i);
  return c;
}

Matrix phase_propagate(const Matrix& v, const Vector& c0, const Vector& eigs,
                       const RealVector& times) {
  const Index nt = times.size();
  Matrix out(v.rows(), nt);
  for (Index t = 0; t < nt; ++t) {
    Vector w = (eigs.array() * times[t]).exp() * c0.array();
    out.col(t) = v * w;
  }
  return out;
}

}  // namespace serial

Matrix kron(const Matrix& a, const Matrix& b) {
  const Index n = a.rows(), m = a.cols(), p = b.rows(), q = b.cols();
  Matrix c(n * p, m * q);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) c.block(i * p, j * q, p, q) = a(i, j) * b;
  return c;
}

Matrix liouvillian(const Matrix& h, const std::vector<Matrix>& jumps) {
  const Index n = h.rows();
  auto [a, b] = serial::detail::gkls_ab(h, jumps);
  Matrix s(n * n, n * n);
#pragma omp parallel for schedule(static)
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < n; ++k)
      serial::detail::liouvillian_column(l, k, a, b, jumps, s.col(l * n + k).data(), n);
  return s;
}

Matrix choi_reshuffle(const Matrix& superop, Index d) {
  if (superop.rows() != d * d || superop.cols() != d * d)
    throw std::invalid_argument("choi_reshuffle: shape mismatch");
  Matrix c(d * d, d * d);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < d; ++j)
    for (Index l = 0; l < d; ++l)
      for (Index i = 0; i < d; ++i)
        for (Index k = 0; k < d; ++k)
          c(i * d + k, j * d + l) = superop(l * d + k, j * d + i);
  return c;
}

Matrix phase_propagate(const Matrix& v, const Vector& c0, const Vector& eigs,
                       const RealVector& times) {
  const Index nt = times.size();
  Matrix out(v.rows(), nt);
#pragma omp parallel for schedule(static)
  for (Index t = 0; t < nt; ++t) {
    Vector w = (eigs.array() * times[t]).exp() * c0.array();
    out.col(t) = v * w;
  }
  return out;
}

}  // namespace lindred::kernels
