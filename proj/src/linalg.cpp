#include "lindred/linalg.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <unsupported/Eigen/MatrixFunctions>

namespace lindred::linalg {

namespace {

struct Svd {
  RealVector s;
  Matrix u, vt;
};

// Divide-and-conquer SVD with a QR-based retry (zgesdd occasionally fails to
// converge).  vectors=false computes singular values only; otherwise the full
// Vt is produced when cols > rows so kernels are complete.
Svd svd(const Matrix& a, bool vectors) {
  Matrix work = a;
  const lapack_int m = lapack_int(a.rows()), n = lapack_int(a.cols());
  const lapack_int k = std::min(m, n);
  Svd out;
  out.s.resize(k);
  if (m == 0 || n == 0) return out;
  char jobz = 'N';
  if (vectors) jobz = (n > m) ? 'A' : 'S';
  lapack_int vrows = (jobz == 'A') ? n : k;
  if (vectors) {
    out.u.resize(m, (jobz == 'A') ? m : k);
    out.vt.resize(vrows, n);
  } else {
    out.u.resize(1, 1);
    out.vt.resize(1, 1);
  }
  lapack_int info = LAPACKE_zgesdd(
      LAPACK_COL_MAJOR, jobz, m, n, work.data(), m, out.s.data(), out.u.data(),
      std::max<lapack_int>(1, m), out.vt.data(), std::max<lapack_int>(1, vrows));
  if (info != 0) {
    work = a;
    RealVector superb(std::max<lapack_int>(1, k - 1));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, jobz, jobz, m, n, work.data(), m, out.s.data(),
                          out.u.data(), std::max<lapack_int>(1, m), out.vt.data(),
                          std::max<lapack_int>(1, vrows), superb.data());
    if (info != 0) throw std::runtime_error("zgesvd failed, info=" + std::to_string(info));
  }
  return out;
}

}  // namespace

EigGeneral eig_general(const Matrix& a, bool want_left) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eig_general: square input required");
  const lapack_int n = lapack_int(a.rows());
  Matrix work = a;
  EigGeneral out;
  out.values.resize(n);
  out.right.resize(n, n);
  out.left.resize(want_left ? n : 1, want_left ? n : 1);
  lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, want_left ? 'V' : 'N', 'V', n, work.data(), n, out.values.data(),
      out.left.data(), std::max<lapack_int>(1, want_left ? n : 1), out.right.data(), n);
  if (info != 0) throw std::runtime_error("zgeev failed, info=" + std::to_string(info));
  return out;
}

EigHermitian eig_hermitian(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eig_hermitian: square input required");
  const lapack_int n = lapack_int(a.rows());
  EigHermitian out;
  out.vectors = 0.5 * (a + a.adjoint());
  out.values.resize(n);
  lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n, out.values.data());
  if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
  return out;
}

SchurDecomp schur(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("schur: square input required");
  const lapack_int n = lapack_int(a.rows());
  SchurDecomp out;
  out.t = a;
  out.q.resize(n, n);
  Vector w(n);
  lapack_int sdim = 0;
  lapack_int info = LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, out.t.data(), n,
                                  &sdim, w.data(), out.q.data(), n);
  if (info != 0) throw std::runtime_error("zgees failed, info=" + std::to_string(info));
  return out;
}

Matrix expm(const Matrix& a) { return a.exp(); }

double sop_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  auto d = svd(a, false);
  return d.s.size() ? d.s(0) : 0.0;
}

double trace_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  auto d = svd(a, false);
  return d.s.sum();
}

double hs_norm(const Matrix& a) { return a.norm(); }

double max_abs(const Matrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

double cond2(const Matrix& a) {
  auto d = svd(a, false);
  const double smin = d.s(d.s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return d.s(0) / smin;
}

Matrix nullspace(const Matrix& a, double rel_tol, double scale) {
  auto d = svd(a, true);
  const Index k = d.s.size();
  const double anchor = scale > 0.0 ? scale : (k ? d.s(0) : 0.0);
  const double cut = anchor * rel_tol;
  const Index n = a.cols();
  Index first = k;
  for (Index i = 0; i < k; ++i)
    if (d.s(i) <= cut) {
      first = i;
      break;
    }
  const Index dim = (d.vt.rows() - first);
  Matrix ns(n, dim);
  for (Index i = 0; i < dim; ++i) ns.col(i) = d.vt.row(first + i).adjoint();
  return ns;
}

Matrix range_basis(const Matrix& a, double rel_tol) {
  auto d = svd(a, true);
  const Index k = d.s.size();
  const double cut = (k ? d.s(0) : 0.0) * rel_tol;
  Index r = 0;
  while (r < k && d.s(r) > cut && d.s(r) > 0.0) ++r;
  return d.u.leftCols(r);
}

SvdRight svd_right(const Matrix& a) {
  const lapack_int m = lapack_int(a.rows()), n = lapack_int(a.cols());
  const lapack_int k = std::min(m, n);
  SvdRight out;
  out.s.resize(k);
  out.vt.resize(k, n);
  if (k == 0) return out;
  Matrix work = a;
  RealVector superb(std::max<lapack_int>(1, k - 1));
  Matrix u(1, 1);
  lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'S', m, n, work.data(), m,
                                   out.s.data(), u.data(), 1, out.vt.data(), k, superb.data());
  if (info != 0) throw std::runtime_error("zgesvd failed, info=" + std::to_string(info));
  return out;
}

Matrix orthonormalize(const Matrix& a, double rel_tol) {
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(rel_tol);
  const Index r = qr.rank();
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), r);
  return q;
}

Matrix sylvester(const Matrix& a, const Matrix& b, const Matrix& c) {
  const Index m = a.rows(), s = b.rows();
  if (a.cols() != m || b.cols() != s || c.rows() != m || c.cols() != s)
    throw std::invalid_argument("sylvester: shape mismatch");
  if (std::max(m, s) <= 200) {
    // Kronecker-lifted dense solve: (1 ⊗ A - B^T ⊗ 1) vec(X) = vec(C).
    Matrix big = Matrix::Zero(m * s, m * s);
    for (Index j = 0; j < s; ++j) {
      big.block(j * m, j * m, m, m) += a;
      for (Index i = 0; i < s; ++i)
        big.block(j * m, i * m, m, m) -= b(i, j) * Matrix::Identity(m, m);
    }
    Eigen::Map<const Vector> rhs(c.data(), m * s);
    Vector x = big.partialPivLu().solve(rhs);
    return Eigen::Map<const Matrix>(x.data(), m, s);
  }
  // Schur-based substitution: T_a Y - Y T_b = Q_a^H C Q_b, columns left to right.
  SchurDecomp sa = schur(a), sb = schur(b);
  Matrix ct = sa.q.adjoint() * c * sb.q;
  Matrix y(m, s);
  Matrix eye = Matrix::Identity(m, m);
  for (Index j = 0; j < s; ++j) {
    Vector rhs = ct.col(j);
    if (j > 0) rhs += y.leftCols(j) * sb.t.block(0, j, j, 1);
    Matrix lhs = sa.t - sb.t(j, j) * eye;
    y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  return sa.q * y * sb.q.adjoint();
}

Matrix polar_unitary(const Matrix& a) {
  auto d = svd(a, true);
  if (a.rows() != a.cols()) throw std::invalid_argument("polar_unitary: square input required");
  return d.u * d.vt;
}

std::vector<std::vector<Index>> cluster_values(const Vector& values, double rel_gap) {
  const Index n = values.size();
  double scale = 0.0;
  for (Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(values(i)));
  const double gap = rel_gap * std::max(scale, 1.0);
  std::vector<Index> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), Index(0));
  std::function<Index(Index)> find = [&](Index x) {
    while (parent[size_t(x)] != x) {
      parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
      x = parent[size_t(x)];
    }
    return x;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(values(i) - values(j)) <= gap) parent[size_t(find(i))] = find(j);
  std::vector<std::vector<Index>> groups;
  std::vector<Index> root_of(size_t(n), -1);
  for (Index i = 0; i < n; ++i) {
    Index r = find(i);
    if (root_of[size_t(r)] < 0) {
      root_of[size_t(r)] = Index(groups.size());
      groups.emplace_back();
    }
    groups[size_t(root_of[size_t(r)])].push_back(i);
  }
  return groups;
}

}  // namespace lindred::linalg
