// Structure theory of the projector range: fixed state, undistortion to a
// *-algebra, block factorization, and the commutant.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lindred/algebra.hpp"
#include "lindred/kernels.hpp"
#include "lindred/linalg.hpp"
#include "lindred/models.hpp"
#include "lindred/operator_core.hpp"
#include "lindred/reduction.hpp"
#include "lindred/rng.hpp"
#include "lindred/spectral.hpp"
#include "lindred/types.hpp"

using namespace lindred;

namespace {

std::vector<std::pair<Index, Index>> block_shapes(const algebra::WedderburnStructure& w) {
  std::vector<std::pair<Index, Index>> shapes;
  for (const auto& b : w.blocks) shapes.emplace_back(b.dim_factor, b.dim_mult);
  std::sort(shapes.begin(), shapes.end());
  return shapes;
}

}  // namespace

TEST_CASE("undistortion strips a known multiplicity state") {
  // distorted basis (X (x) tau) with tau = diag(3/4, 1/4); undistorting by the
  // fixed state (1/2 (x) tau) must recover the algebra M_2 (x) 1 exactly
  Matrix tau = Matrix::Zero(2, 2);
  tau(0, 0) = 0.75;
  tau(1, 1) = 0.25;
  const Matrix rho_bar = kernels::kron(0.5 * Matrix::Identity(2, 2), tau);
  std::vector<Matrix> a_basis;
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b) a_basis.push_back(kernels::kron(ops::basis_op(2, a, b), tau));

  const auto sa = algebra::undistort(a_basis, rho_bar);
  CHECK(sa.support.cols() == 4);  // full support
  CHECK(sa.closure_residual < tol::closure);
  REQUIRE(sa.basis.size() == 4);

  const auto w = algebra::wedderburn_decompose(sa, 1);
  REQUIRE(w.blocks.size() == 1);
  CHECK(w.blocks[0].dim_factor == 2);
  CHECK(w.blocks[0].dim_mult == 2);
  CHECK(w.remainder_dim == 0);
  // multiplicity state carries the distortion of rho_bar
  auto eig = w.blocks[0].tau.selfadjointView<Eigen::Lower>().eigenvalues();
  std::sort(eig.data(), eig.data() + eig.size());
  CHECK(std::abs(eig(0) - 0.25) < 1e-9);
  CHECK(std::abs(eig(1) - 0.75) < 1e-9);
  CHECK((w.u.adjoint() * w.u - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < tol::unitary);
}

TEST_CASE("undistortion rejects a set that is not closed under multiplication") {
  // span{1, sigma_plus} is not a *-algebra
  std::vector<Matrix> bad = {Matrix::Identity(2, 2), ops::sigma_plus()};
  const Matrix rho_bar = 0.5 * Matrix::Identity(2, 2);
  CHECK_THROWS(algebra::undistort(bad, rho_bar));
}

TEST_CASE("chain fixed-point structure has one logical block and abelian sectors") {
  models::XxzSpec spec;
  spec.n = 3;
  Rng draw(17);
  for (int trial = 0; trial < 5; ++trial) {
    spec.a_xy = draw.uniform(0.5, 5.0);
    const auto pipe = reduction::reduce_model(models::build_xxz(spec), trial);
    CHECK(pipe.kernel_dim == spec.n + 1);
    CHECK(pipe.center_dim == spec.n + 3);
    // one (2,1) logical block plus (1, 3), (1, 3) from the middle sectors
    const auto shapes = block_shapes(pipe.wedderburn);
    const std::vector<std::pair<Index, Index>> expected = {{1, 3}, {1, 3}, {2, 1}};
    CHECK(shapes == expected);
    CHECK(pipe.wedderburn.remainder_dim == 0);
    CHECK(pipe.wedderburn.reduced_algebra().op_dim() == spec.n + 3);
  }
}

TEST_CASE("single dephasing qubit fixes the two-dimensional diagonal algebra") {
  LindbladModel m;
  m.space = HilbertSpace(2);
  m.hamiltonian = Matrix::Zero(2, 2);
  m.jumps = {ops::pauli_z()};
  m.name = "dephasing_qubit";
  const auto pipe = reduction::reduce_model(m, 0);
  CHECK(pipe.kernel_dim == 2);
  CHECK(pipe.center_dim == 2);
  const auto shapes = block_shapes(pipe.wedderburn);
  const std::vector<std::pair<Index, Index>> expected = {{1, 1}, {1, 1}};
  CHECK(shapes == expected);
}

TEST_CASE("commutant of the undistorted chain algebra has the central dimension") {
  models::XxzSpec spec;
  spec.n = 3;
  const auto pipe = reduction::reduce_model(models::build_xxz(spec), 0);
  const auto p = pipe.projector;
  const Matrix rho_bar = algebra::fixed_state(p);
  CHECK((rho_bar - rho_bar.adjoint()).cwiseAbs().maxCoeff() < tol::hermitian);
  CHECK(std::abs(rho_bar.trace() - 1.0) < 1e-10);

  // commutant dimension is the sum of squared multiplicities: 1 + 3^2 + 3^2
  std::vector<Matrix> basis;
  const Index s = pipe.wedderburn.support_dim;
  REQUIRE(s == 8);
  for (size_t k = 0; k < pipe.wedderburn.blocks.size(); ++k) {
    const auto& blk = pipe.wedderburn.blocks[k];
    const Matrix iso = pipe.wedderburn.block_isometry(k);
    for (Index a = 0; a < blk.dim_factor; ++a)
      for (Index b = 0; b < blk.dim_factor; ++b)
        basis.push_back(iso * kernels::kron(ops::basis_op(blk.dim_factor, a, b),
                                            Matrix::Identity(blk.dim_mult, blk.dim_mult)) *
                        iso.adjoint());
  }
  const auto comm = algebra::commutant(basis, s);
  CHECK(Index(comm.size()) == 1 + 9 + 9);
  for (const auto& c : comm)
    for (const auto& b : basis) CHECK((c * b - b * c).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("block isometries tile the support and multiplicity states are full rank") {
  models::XxzSpec spec;
  spec.n = 4;
  const auto pipe = reduction::reduce_model(models::build_xxz(spec), 2);
  const auto& w = pipe.wedderburn;
  Index cols = 0;
  for (const auto& b : w.blocks) cols += b.dim_factor * b.dim_mult;
  CHECK(cols == w.support_dim);
  CHECK(w.support_dim + w.remainder_dim == 16);
  for (const auto& b : w.blocks) {
    auto eig = b.tau.selfadjointView<Eigen::Lower>().eigenvalues();
    CHECK(eig.minCoeff() > tol::tau_full_rank);
    CHECK(std::abs(eig.sum() - 1.0) < 1e-10);
  }
}
