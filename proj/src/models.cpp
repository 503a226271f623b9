#include "lindred/models.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lindred/linalg.hpp"
#include "lindred/operator_core.hpp"
#include "lindred/rng.hpp"

namespace lindred::models {

namespace {

constexpr double kSymmetryTol = 1e-9;  // conserved-quantity residuals

Matrix total_magnetization(int n) {
  const Index d = Index(1) << n;
  Matrix jz = Matrix::Zero(d, d);
  for (int j = 1; j <= n; ++j) jz += 0.5 * ops::embed_site(ops::pauli_z(), j, n);
  return jz;
}

// Jz must commute with H and every jump and be conserved in Heisenberg picture.
void check_strong_symmetry(const LindbladModel& model) {
  const int n = model.space.sites();
  const Matrix jz = total_magnetization(n);
  const double comm_h = linalg::max_abs(model.hamiltonian * jz - jz * model.hamiltonian);
  double comm_l = 0.0;
  Matrix adj = Complex(0.0, 1.0) * (model.hamiltonian * jz - jz * model.hamiltonian);
  for (const auto& l : model.jumps) {
    comm_l = std::max(comm_l, linalg::max_abs(l * jz - jz * l));
    const Matrix ll = l.adjoint() * l;
    adj += l.adjoint() * jz * l - 0.5 * (ll * jz + jz * ll);
  }
  const double conserved = linalg::max_abs(adj);
  if (comm_h > kSymmetryTol || comm_l > kSymmetryTol || conserved > kSymmetryTol) {
    throw std::runtime_error("build_xxz: magnetization symmetry violated (comm_h=" +
                             std::to_string(comm_h) + ", comm_l=" + std::to_string(comm_l) +
                             ", heisenberg=" + std::to_string(conserved) + ")");
  }
}

int site_bit(Index state, int site, int n) {  // site 1 = most significant bit
  return int((state >> (n - site)) & Index(1));
}

}  // namespace

void XxzSpec::validate() const {
  if (n < 2) throw std::invalid_argument("XxzSpec: need at least 2 spins");
  if (!(gamma > 0.0)) throw std::invalid_argument("XxzSpec: gamma must be positive");
  if (a_xy < 0.0) throw std::invalid_argument("XxzSpec: a_xy must be non-negative");
}

LindbladModel build_xxz(const XxzSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const auto space = HilbertSpace::qubits(n);
  Matrix h = Matrix::Zero(space.dim, space.dim);
  for (int j = 1; j <= n; ++j) {
    h += 0.5 * spec.omega * ops::embed_site(ops::pauli_z(), j, n);
    h += 0.5 * spec.a_xy *
         (ops::embed_site(ops::pauli_x(), j, n) * ops::embed_site(ops::pauli_x(), j + 1, n) +
          ops::embed_site(ops::pauli_y(), j, n) * ops::embed_site(ops::pauli_y(), j + 1, n));
    h += spec.a_z * ops::embed_site(ops::pauli_z(), j, n) *
         ops::embed_site(ops::pauli_z(), j + 1, n);
  }
  LindbladModel model;
  model.space = space;
  model.hamiltonian = std::move(h);
  // gamma is the jump amplitude, so the dissipation rate is gamma^2; at the
  // reference parameters this puts the spectral gap at gamma^2 / 2 = 0.72
  for (int j = 1; j <= n; ++j) {
    model.jumps.push_back(spec.gamma * ops::embed_site(ops::sigma_plus(), j, n) *
                          ops::embed_site(ops::sigma_minus(), j + 1, n));
  }
  model.name = "xxz";
  model.validate();
  check_strong_symmetry(model);
  return model;
}

SectorData sector_data(const XxzSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const auto space = HilbertSpace::qubits(n);
  const Index d = space.dim;
  // Sector k collects the states with k flipped spins, magnetization n/2 - k.
  std::vector<std::vector<Index>> members(size_t(n) + 1);
  for (Index b = 0; b < d; ++b) {
    members[size_t(std::popcount(static_cast<unsigned long long>(b)))].push_back(b);
  }
  SectorData out;
  out.omega0 = spec.omega * n;
  out.m_values.resize(n + 1);
  out.dims.resize(size_t(n) + 1);
  for (int k = 0; k <= n; ++k) {
    out.m_values[k] = 0.5 * n - k;
    out.dims[size_t(k)] = Index(members[size_t(k)].size());
  }
  // Permutation columns: the fully polarized pair first, then interior
  // sectors by descending magnetization, states ascending within a sector.
  Matrix u = Matrix::Zero(d, d);
  Index col = 0;
  u(0, col++) = 1.0;
  u(d - 1, col++) = 1.0;
  for (int k = 1; k < n; ++k) {
    for (const Index b : members[size_t(k)]) u(b, col++) = 1.0;
  }
  out.permutation = Operator(space, std::move(u));
  for (int k = 0; k <= n; ++k) {
    Matrix rho = Matrix::Zero(d, d);
    for (const Index b : members[size_t(k)]) rho(b, b) = 1.0 / double(members[size_t(k)].size());
    out.steady_states.emplace_back(Operator(space, std::move(rho)));
  }
  Matrix x = Matrix::Zero(d, d), y = Matrix::Zero(d, d), z = Matrix::Zero(d, d);
  x(0, d - 1) = 1.0;
  x(d - 1, 0) = 1.0;
  y(0, d - 1) = Complex(0.0, -1.0);
  y(d - 1, 0) = Complex(0.0, 1.0);
  z(0, 0) = 1.0;
  z(d - 1, d - 1) = -1.0;
  out.logical_x = Operator(space, std::move(x));
  out.logical_y = Operator(space, std::move(y));
  out.logical_z = Operator(space, std::move(z));
  out.logical_isometry = Matrix::Zero(d, 2);
  out.logical_isometry(0, 0) = 1.0;
  out.logical_isometry(d - 1, 1) = 1.0;
  return out;
}

DisorderPerturbation disorder_perturbation(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("disorder_perturbation: need at least 2 spins");
  Rng rng(seed);
  DisorderPerturbation out;
  out.omega.resize(size_t(n));
  out.a_x.resize(size_t(n));
  out.a_y.resize(size_t(n));
  out.a_z.resize(size_t(n));
  for (size_t j = 0; j < size_t(n); ++j) {
    out.omega[j] = rng.uniform(0.0, 2.0);
    out.a_x[j] = rng.uniform(0.0, 2.0);
    out.a_y[j] = rng.uniform(0.0, 2.0);
    out.a_z[j] = rng.uniform(0.0, 2.0);
    out.omega_bar += out.omega[j];
  }
  const auto space = HilbertSpace::qubits(n);
  Matrix h1 = Matrix::Zero(space.dim, space.dim);
  for (int j = 1; j <= n; ++j) {
    const size_t i = size_t(j - 1);
    h1 += 0.5 * out.omega[i] * ops::embed_site(ops::pauli_z(), j, n);
    h1 += out.a_x[i] * ops::embed_site(ops::pauli_x(), j, n) *
          ops::embed_site(ops::pauli_x(), j + 1, n);
    h1 += out.a_y[i] * ops::embed_site(ops::pauli_y(), j, n) *
          ops::embed_site(ops::pauli_y(), j + 1, n);
    h1 += out.a_z[i] * ops::embed_site(ops::pauli_z(), j, n) *
          ops::embed_site(ops::pauli_z(), j + 1, n);
  }
  out.h1 = Operator(space, std::move(h1));
  return out;
}

perturbation::PerturbedGenerator hamiltonian_family(const LindbladModel& model0,
                                                    const Operator& h1) {
  model0.validate();
  if (h1.space.dim != model0.space.dim)
    throw std::invalid_argument("hamiltonian_family: perturbation space mismatch");
  if (!ops::is_hermitian(h1.mat))
    throw std::invalid_argument("hamiltonian_family: perturbation must be Hermitian");
  perturbation::PerturbedGenerator gen;
  gen.terms.push_back(ops::liouvillian(model0));
  gen.terms.emplace_back(model0.space.dim, model0.space.dim, ops::hamiltonian_superop(h1.mat));
  gen.eps0 = 1.0;
  return gen;
}

void DephasingSpec::validate() const {
  if (n < 2) throw std::invalid_argument("DephasingSpec: need at least 2 spins");
  const size_t sites = size_t(n);
  if (mu_x.size() != sites || mu_plus.size() != sites || mu_minus.size() != sites)
    throw std::invalid_argument("DephasingSpec: need one amplitude triple per site");
  for (size_t j = 0; j < sites; ++j) {
    if (mu_x[j] < 0.0 || mu_plus[j] < 0.0 || mu_minus[j] < 0.0)
      throw std::invalid_argument("DephasingSpec: amplitudes must be non-negative");
  }
}

DephasingSpec dephasing_random(int n, double a_z, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("dephasing_random: need at least 2 spins");
  Rng rng(seed);
  DephasingSpec spec;
  spec.n = n;
  spec.a_z = a_z;
  for (int j = 0; j < n; ++j) {
    spec.mu_x.push_back(rng.uniform());
    spec.mu_plus.push_back(rng.uniform());
    spec.mu_minus.push_back(rng.uniform());
  }
  return spec;
}

DephasingChain build_dephasing(const DephasingSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const auto space = HilbertSpace::qubits(n);
  const Index d = space.dim;
  DephasingChain out;
  Matrix h0 = Matrix::Zero(d, d);
  for (int j = 1; j <= n; ++j) {
    h0 += spec.a_z * ops::embed_site(ops::pauli_z(), j, n) *
          ops::embed_site(ops::pauli_z(), j + 1, n);
  }
  out.model0.space = space;
  out.model0.hamiltonian = std::move(h0);
  for (int j = 1; j <= n; ++j) out.model0.jumps.push_back(ops::embed_site(ops::pauli_z(), j, n));
  out.model0.name = "dephasing";
  out.model0.validate();

  Matrix l1 = Matrix::Zero(d * d, d * d);
  for (int j = 1; j <= n; ++j) {
    const size_t i = size_t(j - 1);
    l1 += ops::dissipator(spec.mu_x[i] * ops::embed_site(ops::pauli_x(), j, n));
    l1 += ops::dissipator(spec.mu_plus[i] * ops::embed_site(ops::sigma_plus(), j, n));
    l1 += ops::dissipator(spec.mu_minus[i] * ops::embed_site(ops::sigma_minus(), j, n));
  }
  out.family.terms.push_back(ops::liouvillian(out.model0));
  out.family.terms.emplace_back(d, d, l1);
  out.family.eps0 = 1.0;

  // Diagonal algebra: pinch serves as both reduction and injection, so the
  // reduced identity is the projector onto populations.
  BlockAlgebra alg(std::vector<Index>(size_t(d), 1));
  const Matrix pinch = alg.pinch();
  out.classical.r = SuperOperator(d, d, pinch);
  out.classical.j = SuperOperator(d, d, pinch);
  out.classical.algebra = alg;
  out.classical.check_dim = d;

  RealMatrix m = RealMatrix::Zero(d, d);
  for (int j = 1; j <= n; ++j) {
    const size_t i = size_t(j - 1);
    const double alpha = spec.mu_x[i] * spec.mu_x[i] + spec.mu_minus[i] * spec.mu_minus[i];
    const double beta = spec.mu_x[i] * spec.mu_x[i] + spec.mu_plus[i] * spec.mu_plus[i];
    for (Index s = 0; s < d; ++s) {
      const Index flipped = s ^ (Index(1) << (n - j));
      if (site_bit(s, j, n) == 0) {
        m(s, s) -= alpha;
        m(flipped, s) += alpha;
      } else {
        m(s, s) -= beta;
        m(flipped, s) += beta;
      }
    }
  }
  out.metzler = std::move(m);

  // The population block of L1 must reproduce the rate matrix entrywise, and
  // the dephasing part must not touch populations at all.
  const Matrix sel = alg.selector();
  const Matrix red1 = sel.adjoint() * l1 * sel;
  out.metzler_residual = linalg::max_abs(red1 - out.metzler.cast<Complex>());
  const double red0 = linalg::max_abs(sel.adjoint() * out.family.terms[0].mat * sel);
  if (out.metzler_residual > tol::metzler || red0 > tol::metzler) {
    throw std::runtime_error("build_dephasing: classical reduction mismatch (rates " +
                             std::to_string(out.metzler_residual) + ", base " +
                             std::to_string(red0) + ")");
  }
  return out;
}

}  // namespace lindred::models
