// Reduction maps, Lindblad-form certification, GKLS extraction, and the
// asymptotic convergence certificate.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lindred/dynamics.hpp"
#include "lindred/linalg.hpp"
#include "lindred/models.hpp"
#include "lindred/operator_core.hpp"
#include "lindred/reduction.hpp"
#include "lindred/rng.hpp"
#include "lindred/spectral.hpp"
#include "lindred/types.hpp"
#include "lindred/verify.hpp"

using namespace lindred;

TEST_CASE("pipeline maps satisfy the exact algebraic identities") {
  models::XxzSpec spec;
  spec.n = 3;
  const auto pipe = reduction::reduce_model(models::build_xxz(spec), 0);
  const auto& maps = pipe.maps;
  const Index dr = maps.algebra.total_dim();

  CHECK(pipe.cert.ok);
  CHECK(spectral::certify_cptp(maps.r).ok);
  CHECK(spectral::certify_cptp(maps.j).ok);
  // R J pinches onto the reduced algebra, J R is the spectral projector
  CHECK((maps.r.mat * maps.j.mat - maps.algebra.pinch()).cwiseAbs().maxCoeff() < tol::projector);
  CHECK((maps.j.mat * maps.r.mat - pipe.projector.mat).cwiseAbs().maxCoeff() < tol::projector);
  CHECK(pipe.reduced_form.reconstruction_residual < tol::reconstruction);
  CHECK(maps.check_dim == pipe.center_dim);
  CHECK(dr == 2 + 1 + 1);  // logical qubit plus one line per middle sector

  // reduction preserves the trace on arbitrary states
  Rng rng(2);
  for (int k = 0; k < 10; ++k) {
    const Matrix rho = rng.density(8);
    const Matrix red = ops::apply_superop(maps.r.mat, rho);
    CHECK(std::abs(red.trace() - 1.0) < 1e-10);
  }
}

TEST_CASE("reduced flow intertwines with the full flow through the injection") {
  models::XxzSpec spec;
  spec.n = 3;
  const auto model = models::build_xxz(spec);
  const auto lv = ops::liouvillian(model);
  const auto pipe = reduction::reduce_model(model, 0);
  for (double t : {0.5, 2.0, 10.0}) {
    const Matrix lhs = linalg::expm(t * lv.mat) * pipe.maps.j.mat;
    const Matrix rhs = pipe.maps.j.mat * linalg::expm(t * pipe.reduced_gen.mat);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("reduced generator carries the emerging unitary with zero noise") {
  models::XxzSpec spec;
  spec.n = 3;
  // the logical Hamiltonian spectrum +-n omega/2 must not move with the
  // Hamiltonian couplings
  for (double a_xy : {1.0, 3.2}) {
    for (double a_z : {2.0, 4.6}) {
      spec.a_xy = a_xy;
      spec.a_z = a_z;
      const auto pipe = reduction::reduce_model(models::build_xxz(spec), 0);
      const auto& form = pipe.reduced_form;
      CHECK(form.kossakowski.cwiseAbs().maxCoeff() < 1e-8);
      auto eig = form.hamiltonian.selfadjointView<Eigen::Lower>().eigenvalues();
      std::sort(eig.data(), eig.data() + eig.size());
      const double half = spec.n * spec.omega / 2;
      CHECK(std::abs(eig(0) + half) < 1e-7);
      CHECK(std::abs(eig(eig.size() - 1) - half) < 1e-7);
      for (Index i = 1; i + 1 < eig.size(); ++i) CHECK(std::abs(eig(i)) < 1e-7);
    }
  }
}

TEST_CASE("lindblad check accepts true generators and reports clean residuals") {
  Rng rng(13);
  for (int k = 0; k < 5; ++k) {
    const auto m = verify::random_model(5, 2, rng);
    const auto lv = ops::liouvillian(m);
    const auto rep = reduction::lindblad_check(lv);
    CHECK(rep.ok);
    CHECK(rep.min_conditional_eig > -tol::conditional_cp);
    CHECK(rep.tp_residual < 1e-10);
    CHECK(rep.herm_residual < 1e-10);
  }
}

TEST_CASE("first-order jump mixing term fails the check with witness -2") {
  // D_{L + eps K} expanded to first order with L = sigma_z, K = sigma_x:
  // the cross term K . L^dag + L . K^dag - 1/2 {K^dag L + L^dag K, .}
  const Matrix l = ops::pauli_z(), k = ops::pauli_x();
  const Matrix cross = kernels::kron(l.conjugate(), k) + kernels::kron(k.conjugate(), l) -
                       0.5 * (kernels::kron(Matrix(Matrix::Identity(2, 2)),
                                            Matrix(k.adjoint() * l + l.adjoint() * k)) +
                              kernels::kron(Matrix((k.adjoint() * l + l.adjoint() * k).transpose()),
                                            Matrix(Matrix::Identity(2, 2))));
  const auto rep = reduction::lindblad_check(SuperOperator(2, 2, cross));
  CHECK_FALSE(rep.ok);
  CHECK(rep.herm_residual < 1e-12);
  CHECK(rep.tp_residual < 1e-12);
  CHECK(std::abs(rep.min_conditional_eig + 2.0) < 1e-9);
}

TEST_CASE("canonical projector from a random invariant structure is certified") {
  Rng rng(31);
  const std::vector<std::pair<Index, Index>> blocks = {{2, 2}, {1, 2}};
  const auto maps = verify::random_reduction_maps(6, blocks, rng);
  CHECK(spectral::certify_cptp(maps.r).ok);
  CHECK(spectral::certify_cptp(maps.j).ok);
  CHECK((maps.r.mat * maps.j.mat - maps.algebra.pinch()).cwiseAbs().maxCoeff() < tol::projector);

  // compressing any Lindblad generator through CPTP maps keeps Lindblad form
  for (int k = 0; k < 3; ++k) {
    const auto m = verify::random_model(6, 2, rng);
    const Matrix red = maps.r.mat * ops::liouvillian(m).mat * maps.j.mat;
    const auto rep = reduction::lindblad_check(
        SuperOperator(maps.algebra.total_dim(), maps.algebra.total_dim(), red), maps.algebra);
    CHECK(rep.ok);
    CHECK(rep.min_conditional_eig >= -tol::conditional_cp);
  }
}

TEST_CASE("asymptotic certificate bounds the approach to the reduced model") {
  models::XxzSpec spec;
  spec.n = 3;
  const auto model = models::build_xxz(spec);
  const auto lv = ops::liouvillian(model);
  const auto pipe = reduction::reduce_model(model, 0);
  Rng rng(6);
  const auto rep = reduction::verify_asymptotic_reduction(
      lv, pipe.maps, pipe.reduced_gen, pipe.gap, rng.density(8),
      dynamics::time_grid(10.0, 100), pipe.gap);
  CHECK(rep.gamma < 100.0);
  CHECK(rep.antihermitian_residual < 1e-8);
  for (Index i = 0; i < rep.times.size(); ++i) CHECK(rep.errors(i) <= rep.bound(i) + 1e-12);
}
