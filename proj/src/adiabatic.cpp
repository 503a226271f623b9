#include "lindred/adiabatic.hpp"

#include <Eigen/LU>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lindred/linalg.hpp"
#include "lindred/rng.hpp"

namespace lindred::adiabatic {

namespace {

// common tail of both block_split overloads: invert the adapted basis, cut the
// generator into sectors, and verify the sector spectra are disjoint
BlockSplit split_with_basis(const Matrix& l0, Matrix t, Index m) {
  const Index dim = l0.rows();
  if (t.rows() != dim || t.cols() != dim)
    throw std::invalid_argument("block_split: adapted basis is not square");
  BlockSplit out;
  out.peripheral_dim = m;
  out.stable_dim = dim - m;
  out.basis_from_block = std::move(t);
  Eigen::PartialPivLU<Matrix> lu(out.basis_from_block);
  out.basis_to_block = lu.inverse();

  const Matrix l0b = out.basis_to_block * l0 * out.basis_from_block;
  const Index s = out.stable_dim;
  out.l0_block = l0b.topLeftCorner(m, m);
  out.ls_block = l0b.bottomRightCorner(s, s);
  out.offdiag_residual =
      std::max(linalg::max_abs(l0b.topRightCorner(m, s)), linalg::max_abs(l0b.bottomLeftCorner(s, m)));
  const double scale = std::max(1.0, linalg::sop_norm(l0));
  if (out.offdiag_residual > tol::projector * scale) {
    std::ostringstream msg;
    msg << "block_split: basis does not decouple the sectors (leak " << out.offdiag_residual << ")";
    throw std::runtime_error(msg.str());
  }

  const double tol_per = tol::peripheral_scale * scale;
  if (m > 0) {
    const auto e0 = linalg::eig_general(out.l0_block, false);
    for (Index i = 0; i < e0.values.size(); ++i)
      if (std::abs(e0.values[i].real()) > tol_per) {
        std::ostringstream msg;
        msg << "block_split: peripheral sector has Re lambda = " << e0.values[i].real();
        throw std::runtime_error(msg.str());
      }
  }
  if (s > 0) {
    const auto es = linalg::eig_general(out.ls_block, false);
    for (Index i = 0; i < es.values.size(); ++i)
      if (es.values[i].real() > -tol_per) {
        std::ostringstream msg;
        msg << "block_split: sector spectra overlap (stable eigenvalue with Re = "
            << es.values[i].real() << ")";
        throw std::runtime_error(msg.str());
      }
  }
  return out;
}

// blocks of l1 in the split basis
struct L1Blocks {
  Matrix la, lb, lc;
};

L1Blocks l1_in_split(const BlockSplit& split, const Matrix& l1) {
  const Index m = split.peripheral_dim, s = split.stable_dim;
  const Matrix l1b = split.basis_to_block * l1 * split.basis_from_block;
  return {l1b.topLeftCorner(m, m), l1b.topRightCorner(m, s), l1b.bottomLeftCorner(s, m)};
}

SylvesterBlocks solve_blocks(const BlockSplit& split, const L1Blocks& l1b, double l1_norm) {
  const Index m = split.peripheral_dim, s = split.stable_dim;
  SylvesterBlocks out;
  out.separation = std::numeric_limits<double>::infinity();
  if (m == 0 || s == 0) {
    out.xb = Matrix::Zero(m, s);
    out.xc = Matrix::Zero(s, m);
    return out;
  }
  const auto e0 = linalg::eig_general(split.l0_block, false);
  const auto es = linalg::eig_general(split.ls_block, false);
  for (Index i = 0; i < e0.values.size(); ++i)
    for (Index j = 0; j < es.values.size(); ++j)
      out.separation = std::min(out.separation, std::abs(e0.values[i] - es.values[j]));
  const double op_scale = linalg::sop_norm(split.l0_block) + linalg::sop_norm(split.ls_block);
  if (out.separation < 1e-10 * op_scale)
    std::fprintf(stderr,
                 "solve_P1: Sylvester system ill conditioned (sector separation %.3e vs scale %.3e)\n",
                 out.separation, op_scale);

  out.xb = linalg::sylvester(split.l0_block, split.ls_block, l1b.lb);
  out.xc = linalg::sylvester(split.ls_block, split.l0_block, Matrix(-l1b.lc));
  out.residual_b = linalg::sop_norm(split.l0_block * out.xb - out.xb * split.ls_block - l1b.lb);
  out.residual_c = linalg::sop_norm(split.ls_block * out.xc - out.xc * split.l0_block + l1b.lc);
  const double limit = 1e-8 * l1_norm;
  if (out.residual_b > limit || out.residual_c > limit) {
    std::ostringstream msg;
    msg << "solve_P1: Sylvester residuals " << out.residual_b << ", " << out.residual_c
        << " exceed 1e-8 * " << l1_norm;
    throw std::runtime_error(msg.str());
  }
  return out;
}

Matrix make_gauge(const GaugeStrategy& strategy, const Matrix& l0_block) {
  const Index m = l0_block.rows();
  switch (strategy.kind) {
    case GaugeKind::zero:
      return Matrix::Zero(m, m);
    case GaugeKind::random_uniform: {
      Rng rng(static_cast<std::uint64_t>(strategy.seed));
      Matrix g(m, m);
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) g(i, j) = Complex(rng.uniform(), 0.0);
      return g;
    }
    case GaugeKind::random_commutant: {
      const auto eig = linalg::eig_general(l0_block, false);
      Eigen::PartialPivLU<Matrix> lu(eig.right);
      const Matrix vinv = lu.inverse();
      const double defect =
          linalg::sop_norm(eig.right * eig.values.asDiagonal() * vinv - l0_block);
      if (defect > tol::projector * std::max(1.0, linalg::sop_norm(l0_block)))
        throw std::runtime_error(
            "random_commutant gauge: order-zero reduced generator is defective");
      Rng rng(static_cast<std::uint64_t>(strategy.seed));
      Vector diag(m);
      for (Index i = 0; i < m; ++i) diag[i] = Complex(rng.uniform(), 0.0);
      Matrix g = eig.right * diag.asDiagonal() * vinv;
      const double comm = linalg::sop_norm(l0_block * g - g * l0_block);
      if (comm > tol::consistency) {
        std::ostringstream msg;
        msg << "random_commutant gauge: commutator norm " << comm << " exceeds " << tol::consistency;
        throw std::runtime_error(msg.str());
      }
      return g;
    }
  }
  throw std::logic_error("make_gauge: unknown strategy");
}

}  // namespace

std::string GaugeStrategy::name() const {
  switch (kind) {
    case GaugeKind::zero:
      return "zero";
    case GaugeKind::random_uniform:
      return "random_uniform";
    case GaugeKind::random_commutant:
      return "random_commutant";
  }
  return "unknown";
}

BlockSplit block_split(const SuperOperator& l0, const SuperOperator& p0) {
  if (l0.mat.rows() != p0.mat.rows() || l0.mat.cols() != p0.mat.cols())
    throw std::invalid_argument("block_split: dimension mismatch");
  const double idem = linalg::sop_norm(p0.mat * p0.mat - p0.mat);
  if (idem > tol::projector)
    throw std::invalid_argument("block_split: p0 is not idempotent");
  const double comm = linalg::sop_norm(l0.mat * p0.mat - p0.mat * l0.mat);
  if (comm > tol::projector * std::max(1.0, linalg::sop_norm(l0.mat)))
    throw std::invalid_argument("block_split: p0 does not commute with l0");

  const Matrix range = linalg::range_basis(p0.mat);
  const Matrix null = linalg::nullspace(p0.mat);
  const Index m = range.cols();
  if (m + null.cols() != p0.mat.rows())
    throw std::runtime_error("block_split: range and kernel do not fill the space");
  Matrix t(p0.mat.rows(), p0.mat.cols());
  t.leftCols(m) = range;
  t.rightCols(null.cols()) = null;
  return split_with_basis(l0.mat, std::move(t), m);
}

BlockSplit block_split(const SuperOperator& l0, const reduction::ReductionMaps& maps) {
  const Matrix sel = maps.algebra.selector();
  const Matrix jc = maps.j.mat * sel;  // injection of reduced coordinates
  const Matrix p0 = maps.j.mat * maps.r.mat;
  const Matrix null = linalg::nullspace(p0);
  const Index m = jc.cols();
  if (m + null.cols() != p0.rows())
    throw std::runtime_error("block_split: maps do not complement the stable sector");
  Matrix t(p0.rows(), p0.cols());
  t.leftCols(m) = jc;
  t.rightCols(null.cols()) = null;
  return split_with_basis(l0.mat, std::move(t), m);
}

SylvesterBlocks solve_P1(const BlockSplit& split, const SuperOperator& l1) {
  return solve_blocks(split, l1_in_split(split, l1.mat), linalg::sop_norm(l1.mat));
}

Matrix assemble_p1(const BlockSplit& split, const SylvesterBlocks& blocks) {
  const Index m = split.peripheral_dim, s = split.stable_dim;
  Matrix mid = Matrix::Zero(m + s, m + s);
  mid.topRightCorner(m, s) = blocks.xb;
  mid.bottomLeftCorner(s, m) = blocks.xc;
  return split.basis_from_block * mid * split.basis_to_block;
}

SuperOperator AEFirstOrder::l_tilde(double eps) const {
  return SuperOperator(l_hat_0.dim_in, l_hat_0.dim_out, l_hat_0.mat + eps * l_hat_1.mat);
}

SuperOperator AEFirstOrder::j_tilde(double eps) const {
  return SuperOperator(maps0.j.dim_in, maps0.j.dim_out, maps0.j.mat + eps * j1.mat);
}

SuperOperator AEFirstOrder::r_tilde(double eps) const {
  return SuperOperator(maps0.r.dim_in, maps0.r.dim_out, maps0.r.mat + eps * r1.mat);
}

AEWorkspace prepare_AE(const perturbation::PerturbedGenerator& gen,
                       const reduction::ReductionMaps& maps0) {
  gen.validate();
  const SuperOperator& l0 = gen.terms.front();
  if (l0.dim_in != maps0.r.dim_in)
    throw std::invalid_argument("first_order_AE: generator and maps dimension mismatch");
  const Index dsq = l0.mat.rows();

  AEWorkspace ws;
  ws.maps0 = maps0;
  ws.l0 = l0.mat;
  ws.l1 = gen.terms.size() > 1 ? gen.terms[1].mat : Matrix(Matrix::Zero(dsq, dsq));
  ws.split = block_split(l0, maps0);
  const auto l1b = l1_in_split(ws.split, ws.l1);
  ws.sylvester = solve_blocks(ws.split, l1b, linalg::sop_norm(ws.l1));
  ws.la = l1b.la;
  return ws;
}

AEFirstOrder realize_gauge(const AEWorkspace& ws, const GaugeStrategy& strategy) {
  const BlockSplit& split = ws.split;
  const Index m = split.peripheral_dim, s = split.stable_dim;

  AEFirstOrder out;
  out.maps0 = ws.maps0;
  out.strategy = strategy;
  const Matrix gauge_m = make_gauge(strategy, split.l0_block);
  out.commutator_norm = linalg::sop_norm(split.l0_block * gauge_m - gauge_m * split.l0_block);
  const Matrix l_hat_1_m = ws.la + split.l0_block * gauge_m - gauge_m * split.l0_block;

  const Matrix sel = ws.maps0.algebra.selector();
  const Index dcheck = ws.maps0.algebra.total_dim();
  const auto jc = split.basis_from_block.leftCols(m);
  const auto t_st = split.basis_from_block.rightCols(s);
  const auto rc = split.basis_to_block.topRows(m);
  const auto b_dual = split.basis_to_block.bottomRows(s);

  out.l_hat_0 = SuperOperator(dcheck, dcheck, sel * split.l0_block * sel.adjoint());
  out.l_hat_1 = SuperOperator(dcheck, dcheck, sel * l_hat_1_m * sel.adjoint());
  out.gauge = sel * gauge_m * sel.adjoint();
  out.j1 = SuperOperator(dcheck, ws.maps0.j.dim_out,
                         (jc * gauge_m + t_st * ws.sylvester.xc) * sel.adjoint());
  out.r1 = SuperOperator(ws.maps0.r.dim_in, dcheck,
                         sel * (ws.sylvester.xb * b_dual - gauge_m * rc));
  out.invariance_residual = linalg::sop_norm(ws.l1 * ws.maps0.j.mat + ws.l0 * out.j1.mat -
                                             out.j1.mat * out.l_hat_0.mat -
                                             ws.maps0.j.mat * out.l_hat_1.mat);
  if (out.invariance_residual > tol::ae_invariance) {
    std::ostringstream msg;
    msg << "first_order_AE: invariance residual " << out.invariance_residual << " exceeds "
        << tol::ae_invariance;
    throw std::runtime_error(msg.str());
  }
  out.gauge_residual = linalg::max_abs(ws.maps0.r.mat * out.j1.mat - out.gauge);
  if (out.gauge_residual > tol::gauge_realized) {
    std::ostringstream msg;
    msg << "first_order_AE: realized gauge deviates by " << out.gauge_residual;
    throw std::runtime_error(msg.str());
  }
  return out;
}

AEFirstOrder first_order_AE(const perturbation::PerturbedGenerator& gen,
                            const reduction::ReductionMaps& maps0,
                            const GaugeStrategy& strategy) {
  return realize_gauge(prepare_AE(gen, maps0), strategy);
}

AECertification certify_first_order(const AEFirstOrder& ae, const RealVector& eps_grid) {
  AECertification out;
  out.eps_grid = eps_grid;
  out.commutator_norm = ae.commutator_norm;
  out.invariance_residual = ae.invariance_residual;
  out.all_pass = true;
  out.checks.reserve(static_cast<size_t>(eps_grid.size()));
  for (Index i = 0; i < eps_grid.size(); ++i) {
    out.checks.push_back(reduction::lindblad_check(ae.l_tilde(eps_grid[i]), ae.maps0.algebra));
    out.all_pass = out.all_pass && out.checks.back().ok;
  }
  return out;
}

}  // namespace lindred::adiabatic
