#include "lindred/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lindred/kernels.hpp"
#include "lindred/linalg.hpp"
#include "lindred/operator_core.hpp"
#include "lindred/rng.hpp"

namespace lindred::algebra {

namespace {

// generic draws can collide (degenerate spectra); such attempts are retried
struct RetryDraw {
  std::string what;
};

// real span of the Hermitian parts of a matrix list
std::vector<Matrix> hermitian_parts(const std::vector<Matrix>& basis) {
  std::vector<Matrix> out;
  out.reserve(2 * basis.size());
  const Complex half_i(0.0, 0.5);
  for (const auto& b : basis) {
    out.push_back(0.5 * (b + b.adjoint()));
    out.push_back(half_i * (b.adjoint() - b));
  }
  return out;
}

Matrix random_hermitian_combo(const std::vector<Matrix>& basis, Rng& rng) {
  const auto parts = hermitian_parts(basis);
  Matrix z = Matrix::Zero(basis.front().rows(), basis.front().cols());
  for (const auto& h : parts) z += rng.normal() * h;
  return z;
}

Matrix random_complex_combo(const std::vector<Matrix>& basis, Rng& rng) {
  Matrix z = Matrix::Zero(basis.front().rows(), basis.front().cols());
  for (const auto& b : basis) z += rng.cnormal() * b;
  return z;
}

Matrix stack_vectorized(const std::vector<Matrix>& mats) {
  const Index n = mats.front().size();
  Matrix cols(n, static_cast<Index>(mats.size()));
  for (size_t i = 0; i < mats.size(); ++i) cols.col(static_cast<Index>(i)) = ops::vectorize(mats[i]);
  return cols;
}

std::vector<Matrix> restrict_basis(const std::vector<Matrix>& basis, const Matrix& isometry) {
  std::vector<Matrix> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(isometry.adjoint() * b * isometry);
  return out;
}

// partial traces of a matrix on C^{da} ⊗ C^{db}, index (alpha*db + beta)
Matrix ptrace_first(const Matrix& x, Index da, Index db) {
  Matrix out = Matrix::Zero(db, db);
  for (Index a = 0; a < da; ++a) out += x.block(a * db, a * db, db, db);
  return out;
}
Matrix ptrace_second(const Matrix& x, Index da, Index db) {
  Matrix out = Matrix::Zero(da, da);
  for (Index a = 0; a < da; ++a)
    for (Index c = 0; c < da; ++c)
      for (Index b = 0; b < db; ++b) out(a, c) += x(a * db + b, c * db + b);
  return out;
}

struct RawBlock {
  Index dim_factor = 0;
  Index dim_mult = 0;
  Matrix tau;
  Matrix cols;  // s x (dim_factor * dim_mult) isometry within the support
};

// eigenvalue clusters of a Hermitian matrix, each cluster an isometry
std::vector<Matrix> hermitian_eigen_clusters(const Matrix& h, size_t expected,
                                             const char* stage) {
  const auto eig = linalg::eig_hermitian(h);
  Vector vals(eig.values.size());
  for (Index i = 0; i < vals.size(); ++i) vals[i] = Complex(eig.values[i], 0.0);
  const auto groups = linalg::cluster_values(vals, tol::cluster_rel_gap);
  if (expected != 0 && groups.size() != expected) {
    std::ostringstream msg;
    msg << stage << ": expected " << expected << " eigenvalue clusters, found " << groups.size();
    throw RetryDraw{msg.str()};
  }
  std::vector<Matrix> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    Matrix cols(h.rows(), static_cast<Index>(g.size()));
    for (size_t j = 0; j < g.size(); ++j) cols.col(static_cast<Index>(j)) = eig.vectors.col(g[j]);
    out.push_back(std::move(cols));
  }
  return out;
}

RawBlock factorize_block(const Matrix& block_cols, const std::vector<Matrix>& b_basis,
                         const std::vector<Matrix>& c_basis, const Matrix& rho_support,
                         Rng& rng) {
  const Index sk = block_cols.cols();
  const auto bk = restrict_basis(b_basis, block_cols);
  const auto ck = restrict_basis(c_basis, block_cols);

  const Index mb = linalg::orthonormalize(stack_vectorized(bk)).cols();
  const Index mc = linalg::orthonormalize(stack_vectorized(ck)).cols();
  const auto df = static_cast<Index>(std::llround(std::sqrt(double(mb))));
  const auto dg = static_cast<Index>(std::llround(std::sqrt(double(mc))));
  if (df * df != mb || dg * dg != mc || df * dg != sk) {
    std::ostringstream msg;
    msg << "factorize_block: inconsistent dims (algebra rank " << mb << ", commutant rank " << mc
        << ", block dim " << sk << ")";
    throw RetryDraw{msg.str()};
  }

  // factor coordinates: eigenspaces of a generic Hermitian algebra element
  const Matrix a = random_hermitian_combo(bk, rng);
  auto spaces = hermitian_eigen_clusters(a, static_cast<size_t>(df), "factor split");
  for (const auto& q : spaces) {
    if (q.cols() != dg) throw RetryDraw{"factor split: uneven multiplicities"};
  }

  // multiplicity coordinates: diagonalize a generic commutant element on the
  // first eigenspace
  {
    const Matrix b = random_hermitian_combo(ck, rng);
    const Matrix small = spaces[0].adjoint() * b * spaces[0];
    const auto parts = hermitian_eigen_clusters(0.5 * (small + small.adjoint()), 0, "mult split");
    if (parts.size() != static_cast<size_t>(dg)) {
      throw RetryDraw{"mult split: degenerate commutant draw"};
    }
    const auto eig = linalg::eig_hermitian(0.5 * (small + small.adjoint()));
    spaces[0] = spaces[0] * eig.vectors;
  }

  // align the remaining eigenspaces with a generic complex algebra element:
  // q_a^H c q_0 = x V^H with V the basis mismatch, removed by the polar factor
  const Matrix c = random_complex_combo(bk, rng);
  for (Index alpha = 1; alpha < df; ++alpha) {
    const Matrix m = spaces[static_cast<size_t>(alpha)].adjoint() * c * spaces[0];
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-8 * std::max(1.0, sv(0))) {
      throw RetryDraw{"alignment: generic element nearly singular between eigenspaces"};
    }
    spaces[static_cast<size_t>(alpha)] =
        spaces[static_cast<size_t>(alpha)] * linalg::polar_unitary(m);
  }

  Matrix w(sk, sk);
  for (Index alpha = 0; alpha < df; ++alpha) {
    w.middleCols(alpha * dg, dg) = spaces[static_cast<size_t>(alpha)];
  }

  // every algebra element must now factor as Y ⊗ 1 on this block
  for (const auto& bi : bk) {
    const Matrix x = w.adjoint() * bi * w;
    const Matrix y = ptrace_second(x, df, dg) / double(dg);
    const double resid = linalg::max_abs(x - kernels::kron(y, Matrix::Identity(dg, dg)));
    if (resid > tol::closure * std::max(1.0, linalg::max_abs(x))) {
      throw RetryDraw{"factorization residual above tolerance"};
    }
  }

  // multiplicity state from the reference state's block, which must factorize
  const Matrix rho_block = block_cols.adjoint() * rho_support * block_cols;
  const Matrix rho_fact = w.adjoint() * rho_block * w;
  const double weight = rho_fact.trace().real();
  if (weight <= 0.0) throw std::runtime_error("factorize_block: block carries no state weight");
  Matrix tau = ptrace_first(rho_fact, df, dg) / weight;
  tau = 0.5 * (tau + tau.adjoint());
  const Matrix sigma_w = ptrace_second(rho_fact, df, dg);
  const double prod_resid = linalg::max_abs(rho_fact - kernels::kron(sigma_w, tau));
  if (prod_resid > tol::closure * std::max(1.0, linalg::max_abs(rho_fact))) {
    throw RetryDraw{"reference state does not factor over the block"};
  }

  // rotate the multiplicity basis so tau is diagonal with descending weights
  {
    const auto eig = linalg::eig_hermitian(tau);
    if (eig.values.minCoeff() <= tol::tau_full_rank) {
      throw std::runtime_error("factorize_block: multiplicity state is rank deficient");
    }
    Matrix v(dg, dg);
    for (Index j = 0; j < dg; ++j) v.col(j) = eig.vectors.col(dg - 1 - j);
    const Matrix rot = kernels::kron(Matrix::Identity(df, df), v);
    w = w * rot;
    tau = Matrix::Zero(dg, dg);
    for (Index j = 0; j < dg; ++j) tau(j, j) = eig.values(dg - 1 - j);
  }

  RawBlock out;
  out.dim_factor = df;
  out.dim_mult = dg;
  out.tau = std::move(tau);
  out.cols = block_cols * w;
  return out;
}

WedderburnStructure factorize_once(const SupportAlgebra& sa, int seed) {
  Rng rng(static_cast<std::uint64_t>(seed));
  const Index s = sa.rho_support.rows();
  const Index d = sa.support.rows();

  const Matrix qb = linalg::orthonormalize(stack_vectorized(sa.basis));
  const Index mb = qb.cols();
  const auto comm = commutant(sa.basis, s);
  const Matrix qc = linalg::orthonormalize(stack_vectorized(comm));

  // center = intersection of algebra and commutant via principal vectors
  std::vector<Matrix> center;
  {
    Eigen::JacobiSVD<Matrix> svd(qb.adjoint() * qc, Eigen::ComputeThinU);
    for (Index i = 0; i < svd.singularValues().size(); ++i) {
      if (svd.singularValues()(i) >= 1.0 - tol::closure) {
        center.push_back(ops::devectorize(qb * svd.matrixU().col(i), s));
      }
    }
  }
  if (center.empty()) throw std::runtime_error("wedderburn_decompose: empty center");

  // central blocks = eigenvalue clusters of a generic Hermitian central element
  const Matrix z = random_hermitian_combo(center, rng);
  const auto block_cols = hermitian_eigen_clusters(z, center.size(), "central split");

  std::vector<RawBlock> blocks;
  blocks.reserve(block_cols.size());
  for (const auto& cols : block_cols) {
    blocks.push_back(factorize_block(cols, sa.basis, comm, sa.rho_support, rng));
  }

  Index sum_df2 = 0, sum_block = 0;
  for (const auto& b : blocks) {
    sum_df2 += b.dim_factor * b.dim_factor;
    sum_block += b.dim_factor * b.dim_mult;
  }
  if (sum_block != s) throw std::runtime_error("wedderburn_decompose: blocks do not tile the support");
  if (sum_df2 != mb) {
    std::ostringstream msg;
    msg << "wedderburn_decompose: factor dimensions (sum of squares " << sum_df2
        << ") inconsistent with algebra dimension " << mb;
    throw RetryDraw{msg.str()};
  }

  // deterministic order: factor dim desc, mult dim desc, tau spectrum lex desc
  std::stable_sort(blocks.begin(), blocks.end(), [](const RawBlock& x, const RawBlock& y) {
    if (x.dim_factor != y.dim_factor) return x.dim_factor > y.dim_factor;
    if (x.dim_mult != y.dim_mult) return x.dim_mult > y.dim_mult;
    for (Index i = 0; i < x.dim_mult; ++i) {
      const double a = x.tau(i, i).real(), b = y.tau(i, i).real();
      if (std::abs(a - b) > 1e-12) return a > b;
    }
    return false;
  });

  WedderburnStructure w;
  w.support_dim = s;
  w.remainder_dim = d - s;
  w.seed_used = seed;
  w.u.resize(d, d);
  Index off = 0;
  for (const auto& b : blocks) {
    w.u.middleCols(off, b.cols.cols()) = sa.support * b.cols;
    off += b.cols.cols();
    FactorBlock fb;
    fb.dim_factor = b.dim_factor;
    fb.dim_mult = b.dim_mult;
    fb.tau = b.tau;
    w.blocks.push_back(std::move(fb));
  }
  if (w.remainder_dim > 0) {
    // orthogonal complement of the support from a full QR
    Eigen::HouseholderQR<Matrix> qr(sa.support);
    const Matrix full_q = qr.householderQ() * Matrix::Identity(d, d);
    w.u.middleCols(off, w.remainder_dim) = full_q.rightCols(w.remainder_dim);
  }
  const double udef = linalg::max_abs(w.u.adjoint() * w.u - Matrix::Identity(d, d));
  if (udef > tol::unitary) {
    std::ostringstream msg;
    msg << "wedderburn_decompose: assembled basis not unitary (defect " << udef << ")";
    throw std::runtime_error(msg.str());
  }
  return w;
}

}  // namespace

Matrix fixed_state(const SuperOperator& p) {
  if (p.dim_in != p.dim_out) throw std::invalid_argument("fixed_state: projector must be square");
  const Index d = p.dim_in;
  Matrix rho = ops::apply_superop(p.mat, Matrix::Identity(d, d) / double(d));
  const double herm = linalg::max_abs(rho - rho.adjoint());
  if (herm > tol::projector) {
    std::ostringstream msg;
    msg << "fixed_state: projector output not Hermitian (residual " << herm << ")";
    throw std::runtime_error(msg.str());
  }
  rho = 0.5 * (rho + rho.adjoint());
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol::projector) {
    std::ostringstream msg;
    msg << "fixed_state: projector is not trace preserving (trace " << tr << ")";
    throw std::runtime_error(msg.str());
  }
  rho /= tr;
  const auto eig = linalg::eig_hermitian(rho);
  if (eig.values.minCoeff() < -tol::projector) {
    std::ostringstream msg;
    msg << "fixed_state: projector output not positive (min eigenvalue " << eig.values.minCoeff()
        << ")";
    throw std::runtime_error(msg.str());
  }
  return rho;
}

SupportAlgebra undistort(const std::vector<Matrix>& a_basis, const Matrix& rho_bar) {
  if (a_basis.empty()) throw std::invalid_argument("undistort: empty basis");
  const Index d = rho_bar.rows();

  const auto eig = linalg::eig_hermitian(rho_bar);
  const double cut = tol::tau_full_rank * std::max(1.0, eig.values.maxCoeff());
  std::vector<Index> kept;
  for (Index i = 0; i < d; ++i) {
    if (eig.values(i) > cut) kept.push_back(i);
  }
  if (kept.empty()) throw std::runtime_error("undistort: reference state has empty support");
  const auto s = static_cast<Index>(kept.size());

  SupportAlgebra out;
  out.support.resize(d, s);
  Vector inv_diag(s);
  out.rho_support = Matrix::Zero(s, s);
  for (Index j = 0; j < s; ++j) {
    out.support.col(j) = eig.vectors.col(kept[static_cast<size_t>(j)]);
    const double v = eig.values(kept[static_cast<size_t>(j)]);
    out.rho_support(j, j) = v;
    inv_diag(j) = 1.0 / v;
  }

  out.basis.reserve(a_basis.size());
  for (const auto& a : a_basis) {
    const Matrix restricted = out.support.adjoint() * a * out.support;
    out.basis.push_back(restricted * inv_diag.asDiagonal());
  }

  // closure under multiplication, adjoint, and unit within the span
  const Matrix q = linalg::orthonormalize(stack_vectorized(out.basis));
  auto span_residual = [&](const Matrix& x) {
    const Vector v = ops::vectorize(x);
    return (v - q * (q.adjoint() * v)).norm() / std::max(1.0, v.norm());
  };
  double worst = span_residual(Matrix::Identity(s, s));
  for (const auto& x : out.basis) {
    worst = std::max(worst, span_residual(x.adjoint()));
    for (const auto& y : out.basis) worst = std::max(worst, span_residual(x * y));
  }
  out.closure_residual = worst;
  if (worst > tol::closure) {
    std::ostringstream msg;
    msg << "undistort: span is not a *-algebra (closure residual " << worst << ")";
    throw std::runtime_error(msg.str());
  }
  return out;
}

std::vector<Matrix> commutant(const std::vector<Matrix>& basis, Index s) {
  // joint kernel of all commutator constraints X -> [X, b].  A single
  // constraint can carry spurious near-kernel directions (near-degenerate
  // spectrum of one b), so intersecting per-constraint kernels is ill
  // conditioned; the stacked system has a clean gap.  An R-factor surrogate
  // diag(sigma) * Vt is carried between constraints to keep memory at
  // O(s^4) while preserving the Gram matrix of the full stack.
  const Matrix id = Matrix::Identity(s, s);
  Matrix acc = Matrix::Zero(basis.empty() ? s * s : 0, s * s);
  double scale = 1.0;
  for (const auto& b : basis) {
    scale = std::max(scale, 2.0 * b.norm());
    Matrix stacked(acc.rows() + s * s, s * s);
    stacked.topRows(acc.rows()) = acc;
    stacked.bottomRows(s * s) = kernels::kron(id, b) - kernels::kron(b.transpose(), id);
    const auto d = linalg::svd_right(stacked);
    acc = d.s.cast<Complex>().asDiagonal() * d.vt;
  }
  const Matrix n = linalg::nullspace(acc, tol::rank, scale);
  if (n.cols() == 0) throw std::runtime_error("commutant: solve collapsed to zero");
  std::vector<Matrix> out;
  out.reserve(static_cast<size_t>(n.cols()));
  for (Index j = 0; j < n.cols(); ++j) out.push_back(ops::devectorize(n.col(j), s));
  return out;
}

WedderburnStructure wedderburn_decompose(const SupportAlgebra& sa, int seed) {
  std::string last;
  for (int attempt = 0; attempt < 5; ++attempt) {
    try {
      return factorize_once(sa, seed + attempt);
    } catch (const RetryDraw& r) {
      last = r.what;
    }
  }
  throw std::runtime_error("wedderburn_decompose: retries exhausted (" + last + ")");
}

BlockAlgebra WedderburnStructure::reduced_algebra() const {
  std::vector<Index> dims;
  dims.reserve(blocks.size());
  for (const auto& b : blocks) dims.push_back(b.dim_factor);
  return BlockAlgebra(dims);
}

Index WedderburnStructure::block_offset(size_t k) const {
  Index off = 0;
  for (size_t j = 0; j < k; ++j) off += blocks[j].dim_factor * blocks[j].dim_mult;
  return off;
}

Matrix WedderburnStructure::block_isometry(size_t k) const {
  if (k >= blocks.size()) throw std::out_of_range("block_isometry: block index");
  return u.middleCols(block_offset(k), blocks[k].dim_factor * blocks[k].dim_mult);
}

}  // namespace lindred::algebra
