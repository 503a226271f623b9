#include "lindred/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lindred/dynamics.hpp"
#include "lindred/kernels.hpp"
#include "lindred/linalg.hpp"
#include "lindred/operator_core.hpp"

namespace lindred::reduction {

namespace {

// single-block GKLS extraction: Hamiltonian from the identity row/column of
// the Choi form in a trace-orthonormal Hermitian basis, Kossakowski matrix
// from the traceless sector, jumps from its eigendecomposition
struct BlockGkls {
  Matrix hamiltonian;
  std::vector<Matrix> jumps;
  Matrix kossakowski;
};

BlockGkls extract_single_block(const Matrix& gen) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(double(gen.rows()))));
  const auto basis = ops::hermitian_basis(d);
  const Index n2 = d * d;
  Matrix a(n2, n2);
  for (Index i = 0; i < n2; ++i) a.col(i) = ops::vectorize(basis[static_cast<size_t>(i)]);
  const Matrix chi = a.adjoint() * ops::choi_matrix(gen) * a;

  BlockGkls out;
  out.hamiltonian = Matrix::Zero(d, d);
  const double root_d = std::sqrt(double(d));
  for (Index alpha = 1; alpha < n2; ++alpha) {
    const Complex h = Complex(0.0, 1.0) * (chi(alpha, 0) - chi(0, alpha)) / (2.0 * root_d);
    out.hamiltonian += h.real() * basis[static_cast<size_t>(alpha)];
  }

  out.kossakowski = Matrix::Zero(n2 - 1, n2 - 1);
  if (n2 > 1) {
    const Matrix block = chi.bottomRightCorner(n2 - 1, n2 - 1);
    out.kossakowski = 0.5 * (block + block.adjoint());
    const auto eig = linalg::eig_hermitian(out.kossakowski);
    const double scale = std::max(1.0, std::abs(eig.values.maxCoeff()));
    if (eig.values.minCoeff() < -tol::conditional_cp * scale) {
      std::ostringstream msg;
      msg << "extract_hamiltonian_jumps: negative Kossakowski eigenvalue "
          << eig.values.minCoeff();
      throw std::runtime_error(msg.str());
    }
    for (Index mu = 0; mu < eig.values.size(); ++mu) {
      const double rate = eig.values(mu);
      if (rate <= 1e-12 * scale) continue;
      Matrix l = Matrix::Zero(d, d);
      for (Index alpha = 1; alpha < n2; ++alpha) {
        l += eig.vectors(alpha - 1, mu) * basis[static_cast<size_t>(alpha)];
      }
      out.jumps.push_back(std::sqrt(rate) * l);
    }
  }
  return out;
}

// sector map of gen from block k inputs to block l outputs
Matrix sector_map(const Matrix& gen, const BlockAlgebra& alg, size_t l, size_t k) {
  const auto offs = alg.offsets();
  const Index d = alg.total_dim();
  const Index dl = alg.dims[l], dk = alg.dims[k];
  const Index ol = offs[l], ok = offs[k];
  Matrix s(dl * dl, dk * dk);
  for (Index b = 0; b < dk; ++b)
    for (Index a = 0; a < dk; ++a)
      for (Index jp = 0; jp < dl; ++jp)
        for (Index ip = 0; ip < dl; ++ip)
          s(jp * dl + ip, b * dk + a) = gen((ol + jp) * d + (ol + ip), (ok + b) * d + (ok + a));
  return s;
}

Matrix embed_block(const Matrix& x, const BlockAlgebra& alg, size_t row_block, size_t col_block) {
  const auto offs = alg.offsets();
  Matrix out = Matrix::Zero(alg.total_dim(), alg.total_dim());
  out.block(offs[row_block], offs[col_block], x.rows(), x.cols()) = x;
  return out;
}

Matrix direct_sum(const std::vector<Matrix>& parts) {
  Index n = 0;
  for (const auto& p : parts) n += p.rows();
  Matrix out = Matrix::Zero(n, n);
  Index off = 0;
  for (const auto& p : parts) {
    out.block(off, off, p.rows(), p.cols()) = p;
    off += p.rows();
  }
  return out;
}

}  // namespace

namespace {

// injection (E_ab -> W_k (E_ab ⊗ tau_k) W_k^H on block-diagonal inputs) and
// the bare partial-trace reduction in the W basis
struct RawMaps {
  Matrix j, r;
};

RawMaps assemble_maps(const algebra::WedderburnStructure& w, const BlockAlgebra& alg) {
  const Index d = w.u.rows();
  const Index dr = alg.total_dim();
  const auto red_offs = alg.offsets();
  RawMaps raw;
  raw.j = Matrix::Zero(d * d, dr * dr);
  for (size_t k = 0; k < w.blocks.size(); ++k) {
    const auto& blk = w.blocks[k];
    const Matrix wk = w.block_isometry(k);
    for (Index b = 0; b < blk.dim_factor; ++b) {
      for (Index a = 0; a < blk.dim_factor; ++a) {
        const Matrix unit =
            ops::basis_op(blk.dim_factor, a, b);  // reduced E_ab inside block k
        const Matrix lifted = wk * kernels::kron(unit, blk.tau) * wk.adjoint();
        raw.j.col((red_offs[k] + b) * dr + (red_offs[k] + a)) = ops::vectorize(lifted);
      }
    }
  }
  raw.r = Matrix::Zero(dr * dr, d * d);
  for (size_t k = 0; k < w.blocks.size(); ++k) {
    const auto& blk = w.blocks[k];
    const Matrix wk = w.block_isometry(k);
    for (Index i = 0; i < blk.dim_factor; ++i) {
      for (Index jj = 0; jj < blk.dim_factor; ++jj) {
        const Index row = (red_offs[k] + jj) * dr + (red_offs[k] + i);
        for (Index g = 0; g < blk.dim_mult; ++g) {
          const auto ci = wk.col(i * blk.dim_mult + g);
          const auto cj = wk.col(jj * blk.dim_mult + g);
          for (Index q = 0; q < d; ++q)
            for (Index pp = 0; pp < d; ++pp)
              raw.r(row, q * d + pp) += std::conj(ci(pp)) * cj(q);
        }
      }
    }
  }
  return raw;
}

}  // namespace

ReductionMaps build_reduction_maps(const algebra::WedderburnStructure& w, const SuperOperator& p) {
  const Index d = w.u.rows();
  if (p.dim_in != d || p.dim_out != d) {
    throw std::invalid_argument("build_reduction_maps: projector dimension mismatch");
  }
  ReductionMaps maps;
  maps.algebra = w.reduced_algebra();
  const Index dr = maps.algebra.total_dim();
  maps.check_dim = maps.algebra.op_dim();

  // reduction is composed with the projector for trace preservation off the
  // algebra support
  RawMaps raw = assemble_maps(w, maps.algebra);
  maps.j = SuperOperator(dr, d, std::move(raw.j));
  maps.r = SuperOperator(d, dr, raw.r * p.mat);

  const Matrix pinch = maps.algebra.pinch();
  const double rj = linalg::max_abs(maps.r.mat * maps.j.mat - pinch);
  if (rj > tol::projector) {
    std::ostringstream msg;
    msg << "build_reduction_maps: R J differs from the reduced identity by " << rj;
    throw std::runtime_error(msg.str());
  }
  const double jr = linalg::max_abs(maps.j.mat * maps.r.mat - p.mat);
  if (jr > tol::projector) {
    std::ostringstream msg;
    msg << "build_reduction_maps: J R differs from the projector by " << jr;
    throw std::runtime_error(msg.str());
  }
  for (const auto* m : {&maps.r, &maps.j}) {
    const auto cert = spectral::certify_cptp(*m);
    if (!cert.ok) {
      std::ostringstream msg;
      msg << "build_reduction_maps: map failed CPTP certification (min Choi eigenvalue "
          << cert.min_choi_eig << ", trace residual " << cert.tp_residual << ")";
      throw std::runtime_error(msg.str());
    }
  }
  return maps;
}

ReductionMaps build_reduction_maps(const algebra::WedderburnStructure& w) {
  if (w.remainder_dim != 0) {
    throw std::invalid_argument(
        "build_reduction_maps: canonical projector needs the structure to span the full space");
  }
  // with full support the bare partial trace is already trace preserving, so
  // the canonical conditional expectation J (tr_G .) serves as the projector
  const Index d = w.u.rows();
  const RawMaps raw = assemble_maps(w, w.reduced_algebra());
  return build_reduction_maps(w, SuperOperator(d, d, raw.j * raw.r));
}

LindbladCheckReport lindblad_check(const SuperOperator& gen, const BlockAlgebra& alg) {
  const Index d = alg.total_dim();
  if (gen.dim_in != d || gen.dim_out != d) {
    throw std::invalid_argument("lindblad_check: generator/algebra dimension mismatch");
  }
  LindbladCheckReport rep;
  const Matrix pinch = alg.pinch();
  const Matrix gp = gen.mat * pinch;
  const double scale = std::max(1.0, linalg::max_abs(gp));

  rep.leak_residual = linalg::max_abs(gp - pinch * gp) / scale;
  const Vector vec_id = ops::vectorize(Matrix::Identity(d, d));
  rep.tp_residual = (gp.adjoint() * vec_id).norm() / scale;

  const Matrix choi = ops::choi_matrix(gp);
  rep.herm_residual = linalg::max_abs(choi - choi.adjoint()) / std::max(1.0, linalg::max_abs(choi));

  const Matrix s = alg.maxent_projector();
  const Matrix q = Matrix::Identity(choi.rows(), choi.cols()) - s;
  const Matrix conditional = q * (0.5 * (choi + choi.adjoint())) * q;
  rep.min_conditional_eig = linalg::eig_hermitian(conditional).values.minCoeff();

  rep.ok = rep.herm_residual <= tol::projector && rep.tp_residual <= tol::projector &&
           rep.leak_residual <= tol::projector &&
           rep.min_conditional_eig >= -tol::conditional_cp;
  return rep;
}

LindbladCheckReport lindblad_check(const SuperOperator& gen) {
  return lindblad_check(gen, BlockAlgebra::full(gen.dim_in));
}

SuperOperator reduced_generator(const SuperOperator& lv, const ReductionMaps& maps) {
  SuperOperator red(maps.algebra.total_dim(), maps.algebra.total_dim(),
                    maps.r.mat * lv.mat * maps.j.mat);
  const auto rep = lindblad_check(red, maps.algebra);
  if (!rep.ok) {
    std::ostringstream msg;
    msg << "reduced_generator: certification failed despite CPTP maps"
        << " (min conditional eigenvalue " << rep.min_conditional_eig << ", trace residual "
        << rep.tp_residual << ", Hermiticity residual " << rep.herm_residual << ")";
    throw std::runtime_error(msg.str());
  }
  return red;
}

GklsForm extract_hamiltonian_jumps(const SuperOperator& gen, const BlockAlgebra& alg) {
  const Index d = alg.total_dim();
  if (gen.dim_in != d || gen.dim_out != d) {
    throw std::invalid_argument("extract_hamiltonian_jumps: dimension mismatch");
  }
  const size_t nb = alg.dims.size();
  GklsForm out;
  out.hamiltonian = Matrix::Zero(d, d);
  std::vector<Matrix> koss_parts;

  // cross-block sectors are completely positive; their Choi matrices yield
  // jump operators and the normalization entering the diagonal sectors
  std::vector<Matrix> normalization(nb);
  for (size_t k = 0; k < nb; ++k) normalization[k] = Matrix::Zero(alg.dims[k], alg.dims[k]);
  for (size_t l = 0; l < nb; ++l) {
    for (size_t k = 0; k < nb; ++k) {
      if (l == k) continue;
      const Matrix s = sector_map(gen.mat, alg, l, k);
      const Matrix choi = ops::choi_matrix_rect(s, alg.dims[k], alg.dims[l]);
      const Matrix ch = 0.5 * (choi + choi.adjoint());
      const auto eig = linalg::eig_hermitian(ch);
      const double scale = std::max(1.0, std::abs(eig.values.maxCoeff()));
      if (eig.values.minCoeff() < -tol::conditional_cp * scale) {
        std::ostringstream msg;
        msg << "extract_hamiltonian_jumps: cross sector not completely positive"
            << " (eigenvalue " << eig.values.minCoeff() << ")";
        throw std::runtime_error(msg.str());
      }
      for (Index mu = 0; mu < eig.values.size(); ++mu) {
        if (eig.values(mu) <= 1e-12 * scale) continue;
        const Matrix kr = ops::devectorize(eig.vectors.col(mu), alg.dims[l]);
        out.jumps.push_back(std::sqrt(eig.values(mu)) * embed_block(kr, alg, l, k));
      }
      normalization[k] += ops::choi_output_trace(ch, alg.dims[k], alg.dims[l]);
      koss_parts.push_back(ch);
    }
  }

  // diagonal sectors: adding back half the cross-jump normalization makes each
  // block a standalone generator with the correct Hamiltonian
  const auto offs = alg.offsets();
  for (size_t k = 0; k < nb; ++k) {
    const Index dk = alg.dims[k];
    Matrix g = sector_map(gen.mat, alg, k, k);
    const Matrix id = Matrix::Identity(dk, dk);
    g += 0.5 * (kernels::kron(id, normalization[k]) +
                kernels::kron(normalization[k].transpose(), id));
    auto blk = extract_single_block(g);
    out.hamiltonian.block(offs[k], offs[k], dk, dk) = blk.hamiltonian;
    for (const auto& l : blk.jumps) out.jumps.push_back(embed_block(l, alg, k, k));
    koss_parts.push_back(blk.kossakowski);
  }
  out.kossakowski = direct_sum(koss_parts);

  // reconstruction restricted to the block algebra must be exact
  const Matrix pinch = alg.pinch();
  const Matrix built = ops::liouvillian_matrix(out.hamiltonian, out.jumps);
  const double resid = linalg::max_abs(pinch * built * pinch - pinch * gen.mat * pinch) /
                       std::max(1.0, linalg::max_abs(gen.mat));
  out.reconstruction_residual = resid;
  if (resid > tol::reconstruction) {
    std::ostringstream msg;
    msg << "extract_hamiltonian_jumps: reconstruction residual " << resid;
    throw std::runtime_error(msg.str());
  }
  return out;
}

GklsForm extract_hamiltonian_jumps(const SuperOperator& gen) {
  return extract_hamiltonian_jumps(gen, BlockAlgebra::full(gen.dim_in));
}

AsymptoticReport verify_asymptotic_reduction(const SuperOperator& lv, const ReductionMaps& maps,
                                             const SuperOperator& lred, double gap,
                                             const Matrix& rho0, const RealVector& times,
                                             double delta) {
  const Index d = lv.dim_in;
  const Index dr = maps.algebra.total_dim();
  AsymptoticReport rep;
  rep.times = times;
  rep.errors.resize(times.size());

  const auto full = dynamics::propagate(lv.mat, rho0, times);
  const Matrix red0 = ops::devectorize(maps.r.mat * ops::vectorize(rho0), dr);
  const auto reduced = dynamics::propagate(lred.mat, red0, times);
  for (Index i = 0; i < times.size(); ++i) {
    const Matrix injected = ops::devectorize(
        maps.j.mat * ops::vectorize(reduced.states[static_cast<size_t>(i)]), d);
    rep.errors[i] = linalg::trace_norm(full.states[static_cast<size_t>(i)] - injected);
  }

  const double rate = gap - delta;
  const double floor = 1e-12 * std::max(1.0, rep.errors.maxCoeff());
  double gamma = 0.0;
  for (Index i = 0; i < times.size(); ++i) {
    if (rep.errors[i] > floor) gamma = std::max(gamma, rep.errors[i] * std::exp(rate * times[i]));
  }
  if (gamma == 0.0) gamma = rep.errors.maxCoeff();
  rep.gamma = gamma;
  rep.bound.resize(times.size());
  for (Index i = 0; i < times.size(); ++i) rep.bound[i] = gamma * std::exp(-rate * times[i]);

  const Matrix pinch = maps.algebra.pinch();
  rep.antihermitian_residual =
      linalg::max_abs(pinch * (lred.mat + lred.mat.adjoint()) * pinch) /
      std::max(1.0, linalg::max_abs(lred.mat));
  return rep;
}

Pipeline reduce_generator(const SuperOperator& lv, int seed) {
  Pipeline pl;
  auto sd = spectral::eig_superoperator(lv);
  pl.gap = sd.gap;
  pl.projector = spectral_projector(sd);
  const auto cm = spectral::center_manifold(sd);
  pl.center_dim = cm.basis.cols();
  pl.kernel_dim = cm.kernel_dim;
  pl.frequencies = cm.frequencies;

  const Matrix rho_bar = algebra::fixed_state(pl.projector);
  std::vector<Matrix> a_basis;
  a_basis.reserve(static_cast<size_t>(cm.basis.cols()));
  for (Index jcol = 0; jcol < cm.basis.cols(); ++jcol) {
    a_basis.push_back(ops::devectorize(cm.basis.col(jcol), lv.dim_in));
  }
  const auto sa = algebra::undistort(a_basis, rho_bar);
  pl.wedderburn = algebra::wedderburn_decompose(sa, seed);
  pl.maps = build_reduction_maps(pl.wedderburn, pl.projector);
  pl.reduced_gen = reduced_generator(lv, pl.maps);
  pl.cert = lindblad_check(pl.reduced_gen, pl.maps.algebra);
  pl.reduced_form = extract_hamiltonian_jumps(pl.reduced_gen, pl.maps.algebra);
  return pl;
}

Pipeline reduce_model(const LindbladModel& model, int seed) {
  model.validate();
  return reduce_generator(ops::liouvillian(model), seed);
}

}  // namespace lindred::reduction
