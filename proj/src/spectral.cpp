#include "lindred/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "lindred/kernels.hpp"
#include "lindred/linalg.hpp"
#include "lindred/operator_core.hpp"

namespace lindred::spectral {

namespace {

// Per-cluster biorthogonalization: reorthonormalize the right columns, then
// solve the overlap system so that left.adjoint()*right = identity within the
// cluster.  Returns the overlap condition number (infinity when defective).
double biorthogonalize_cluster(Matrix& right, Matrix& left, const std::vector<Index>& idx) {
  const auto c = static_cast<Index>(idx.size());
  Matrix v(right.rows(), c), w(left.rows(), c);
  for (Index j = 0; j < c; ++j) {
    v.col(j) = right.col(idx[static_cast<size_t>(j)]);
    w.col(j) = left.col(idx[static_cast<size_t>(j)]);
  }
  if (c > 1) {
    const Matrix q = linalg::orthonormalize(v, 1e-12);
    if (q.cols() < c) return std::numeric_limits<double>::infinity();
    v = q;
  }
  const Matrix overlap = w.adjoint() * v;
  Eigen::JacobiSVD<Matrix> svd(overlap);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  const double cond = smin > 0.0 ? svd.singularValues()(0) / smin
                                 : std::numeric_limits<double>::infinity();
  if (std::isfinite(cond)) {
    // dual = w * overlap^{-dagger} gives dual.adjoint() * v = identity
    const Matrix dual = overlap.lu().solve(w.adjoint()).adjoint();
    for (Index j = 0; j < c; ++j) {
      right.col(idx[static_cast<size_t>(j)]) = v.col(j);
      left.col(idx[static_cast<size_t>(j)]) = dual.col(j);
    }
  }
  return cond;
}

}  // namespace

SpectralData eig_superoperator(const SuperOperator& lv, double tol_peripheral) {
  if (lv.dim_in != lv.dim_out) {
    throw std::invalid_argument("eig_superoperator: generator must be square");
  }
  return eig_superoperator(lv.mat, tol_peripheral);
}

SpectralData eig_superoperator(const Matrix& gen, double tol_peripheral) {
  const Index n = gen.rows();
  if (gen.cols() != n) throw std::invalid_argument("eig_superoperator: matrix not square");
  const auto d = static_cast<Index>(std::llround(std::sqrt(double(n))));
  if (d * d != n) throw std::invalid_argument("eig_superoperator: dimension is not a square");

  // Lindblad sanity: Hermiticity preservation (Hermitian Choi) and trace
  // annihilation; violations are warned, not fatal, so diagnostics still run.
  {
    const Matrix choi = kernels::choi_reshuffle(gen, d);
    const double herm = linalg::max_abs(choi - choi.adjoint()) / std::max(1.0, linalg::max_abs(choi));
    const Vector vec_id = ops::vectorize(Matrix::Identity(d, d));
    const double tp = (gen.adjoint() * vec_id).norm() / std::max(1.0, gen.norm());
    if (herm > tol::projector || tp > tol::projector) {
      std::cerr << "eig_superoperator: input is not a Lindblad generator"
                << " (herm residual " << herm << ", trace residual " << tp << ")\n";
    }
  }

  SpectralData sd;
  sd.gen = gen;
  auto eig = linalg::eig_general(gen, true);
  sd.values = std::move(eig.values);
  sd.right = std::move(eig.right);
  sd.left = std::move(eig.left);
  sd.scale = sd.values.size() ? sd.values.cwiseAbs().maxCoeff() : 0.0;
  sd.tol_peripheral =
      tol_peripheral >= 0.0 ? tol_peripheral : tol::peripheral_scale * std::max(1.0, sd.scale);

  double max_re = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    const double re = sd.values[i].real();
    max_re = std::max(max_re, re);
    if (std::abs(re) <= sd.tol_peripheral) sd.peripheral.push_back(i);
  }
  if (max_re > sd.tol_peripheral) {
    std::ostringstream msg;
    msg << "eig_superoperator: eigenvalue with positive real part " << max_re
        << " exceeds tolerance " << sd.tol_peripheral << " (not a stable Lindblad generator)";
    throw std::runtime_error(msg.str());
  }
  if (sd.peripheral.empty()) {
    throw std::runtime_error("eig_superoperator: empty peripheral spectrum (kernel must be nonempty)");
  }
  sd.no_dissipative_part = static_cast<Index>(sd.peripheral.size()) == n;
  if (!sd.no_dissipative_part) {
    double g = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      const double re = std::abs(sd.values[i].real());
      if (re > sd.tol_peripheral) g = std::min(g, re);
    }
    sd.gap = g;
  }

  // biorthogonalize within eigenvalue clusters; cross-cluster orthogonality is
  // automatic for separated eigenvalues
  const auto clusters = linalg::cluster_values(sd.values, tol::cluster_rel_gap);
  std::vector<char> is_per(static_cast<size_t>(n), 0);
  for (Index i : sd.peripheral) is_per[static_cast<size_t>(i)] = 1;
  for (const auto& cluster : clusters) {
    const double cond = biorthogonalize_cluster(sd.right, sd.left, cluster);
    const bool peripheral_cluster = is_per[static_cast<size_t>(cluster.front())] != 0;
    if (peripheral_cluster) {
      sd.peripheral_overlap_cond = std::max(sd.peripheral_overlap_cond, cond);
    } else if (!std::isfinite(cond) || cond >= 1e8) {
      sd.defective_nonperipheral = true;
    }
  }
  if (sd.defective_nonperipheral) {
    std::cerr << "eig_superoperator: near-defective cluster in the decaying sector;"
              << " full biorthogonality is degraded there\n";
  }
  return sd;
}

CenterManifold center_manifold(const SpectralData& sd) {
  if (!std::isfinite(sd.peripheral_overlap_cond) || sd.peripheral_overlap_cond >= 1e8) {
    std::ostringstream msg;
    msg << "center_manifold: peripheral sector is numerically defective"
        << " (overlap condition " << sd.peripheral_overlap_cond
        << "); nontrivial Jordan block or misconfigured tolerance";
    throw std::runtime_error(msg.str());
  }
  CenterManifold cm;
  const auto m = static_cast<Index>(sd.peripheral.size());
  cm.basis.resize(sd.right.rows(), m);
  cm.dual.resize(sd.left.rows(), m);
  cm.frequencies.resize(m);
  for (Index j = 0; j < m; ++j) {
    const Index i = sd.peripheral[static_cast<size_t>(j)];
    cm.basis.col(j) = sd.right.col(i);
    cm.dual.col(j) = sd.left.col(i);
    cm.frequencies[j] = sd.values[i].imag();
    if (std::abs(cm.frequencies[j]) < sd.tol_peripheral) ++cm.kernel_dim;
  }
  cm.gap = sd.gap;
  return cm;
}

SuperOperator spectral_projector(const SpectralData& sd) {
  const CenterManifold cm = center_manifold(sd);  // revalidates the peripheral sector
  const auto d = static_cast<Index>(std::llround(std::sqrt(double(sd.gen.rows()))));
  SuperOperator p;
  p.dim_in = d;
  p.dim_out = d;
  p.mat = cm.basis * cm.dual.adjoint();

  const double idem = linalg::max_abs(p.mat * p.mat - p.mat);
  if (idem > tol::projector) {
    std::ostringstream msg;
    msg << "spectral_projector: idempotency defect " << idem;
    throw std::runtime_error(msg.str());
  }
  const double comm =
      linalg::max_abs(p.mat * sd.gen - sd.gen * p.mat) / std::max(1.0, linalg::max_abs(sd.gen));
  if (comm > tol::projector) {
    std::ostringstream msg;
    msg << "spectral_projector: commutation defect " << comm;
    throw std::runtime_error(msg.str());
  }
  const CptpReport cert = certify_cptp(p);
  if (!cert.ok) {
    std::ostringstream msg;
    msg << "spectral_projector: CPTP certification failed (min Choi eigenvalue "
        << cert.min_choi_eig << ", trace residual " << cert.tp_residual << ", Hermiticity residual "
        << cert.herm_residual << ")";
    throw std::runtime_error(msg.str());
  }
  return p;
}

CptpReport certify_cptp(const SuperOperator& s, double cp_tol, double tp_tol) {
  CptpReport rep;
  const Matrix choi = ops::choi_matrix_rect(s.mat, s.dim_in, s.dim_out);
  rep.herm_residual = linalg::max_abs(choi - choi.adjoint()) / std::max(1.0, linalg::max_abs(choi));
  const Matrix herm_part = 0.5 * (choi + choi.adjoint());
  const auto eig = linalg::eig_hermitian(herm_part);
  rep.min_choi_eig = eig.values.minCoeff();
  rep.cp = rep.min_choi_eig >= -cp_tol && rep.herm_residual <= cp_tol;
  const Matrix out_trace = ops::choi_output_trace(choi, s.dim_in, s.dim_out);
  rep.tp_residual = linalg::max_abs(out_trace - Matrix::Identity(s.dim_in, s.dim_in));
  rep.tp = rep.tp_residual <= tp_tol;
  rep.ok = rep.cp && rep.tp;
  return rep;
}

ConvergenceReport verify_exponential_convergence(const Matrix& gen, const Matrix& projector,
                                                 double gap, const Matrix& rho0,
                                                 const RealVector& times, double delta) {
  if (delta < 0.0 || delta >= gap) {
    throw std::invalid_argument("verify_exponential_convergence: need 0 <= delta < gap");
  }
  const auto traj = dynamics::propagate(gen, rho0, times);
  const Index d = rho0.rows();
  ConvergenceReport rep;
  rep.times = times;
  rep.errors.resize(times.size());
  rep.bound.resize(times.size());
  const double rate = gap - delta;
  for (Index i = 0; i < times.size(); ++i) {
    const Matrix& rho = traj.states[static_cast<size_t>(i)];
    const Matrix proj = ops::devectorize(projector * ops::vectorize(rho), d);
    rep.errors[i] = linalg::trace_norm(rho - proj);
  }
  // Gamma from samples above the floating-point noise floor, so late-time
  // roundoff does not inflate the bound
  const double floor = 1e-12 * std::max(1.0, rep.errors.maxCoeff());
  double gamma = 0.0;
  for (Index i = 0; i < times.size(); ++i) {
    if (rep.errors[i] > floor) gamma = std::max(gamma, rep.errors[i] * std::exp(rate * times[i]));
  }
  if (gamma == 0.0) gamma = rep.errors.maxCoeff();
  rep.gamma = gamma;
  for (Index i = 0; i < times.size(); ++i) rep.bound[i] = gamma * std::exp(-rate * times[i]);

  // fit only samples above the noise floor; fully converged trajectories
  // (initial state already on the manifold) report rate 0
  std::vector<double> ts, es;
  for (Index i = 0; i < times.size(); ++i) {
    if (rep.errors[i] > floor) {
      ts.push_back(times[i]);
      es.push_back(rep.errors[i]);
    }
  }
  if (ts.size() >= 3) {
    const auto n = static_cast<Index>(ts.size());
    const auto fit = dynamics::decay_fit(Eigen::Map<const RealVector>(ts.data(), n),
                                         Eigen::Map<const RealVector>(es.data(), n), 0.4);
    rep.fitted_rate = fit.rate;
  }
  return rep;
}

}  // namespace lindred::spectral
