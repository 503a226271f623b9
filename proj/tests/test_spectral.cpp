// Spectral analysis of generators: peripheral spectrum, center manifold,
// spectral projector, CPTP certification, and convergence fits.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "lindred/dynamics.hpp"
#include "lindred/linalg.hpp"
#include "lindred/models.hpp"
#include "lindred/operator_core.hpp"
#include "lindred/rng.hpp"
#include "lindred/spectral.hpp"
#include "lindred/types.hpp"

using namespace lindred;

namespace {

// transpose map: hermiticity and trace preserving but not completely positive
Matrix transpose_superop(Index d) {
  Matrix k = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) k(i * d + j, j * d + i) = 1.0;
  return k;
}

}  // namespace

TEST_CASE("chain generator peripheral spectrum is 0 and +-i n omega") {
  models::XxzSpec spec;
  spec.n = 3;
  const auto lv = ops::liouvillian(models::build_xxz(spec));
  const auto sd = spectral::eig_superoperator(lv);

  CHECK(sd.kernel_dim == spec.n + 1);
  CHECK(Index(sd.peripheral.size()) == spec.n + 3);
  CHECK_FALSE(sd.no_dissipative_part);
  const double w0 = spec.n * spec.omega;
  int zero = 0, plus = 0, minus = 0;
  for (Index idx : sd.peripheral) {
    const Complex lam = sd.values(idx);
    CHECK(std::abs(lam.real()) < 1e-9);
    if (std::abs(lam.imag()) < 1e-6 * w0)
      ++zero;
    else if (std::abs(lam.imag() - w0) < 1e-6 * w0)
      ++plus;
    else if (std::abs(lam.imag() + w0) < 1e-6 * w0)
      ++minus;
  }
  CHECK(zero == spec.n + 1);
  CHECK(plus == 1);
  CHECK(minus == 1);
  // jump amplitude gamma enters the gap quadratically
  CHECK(std::abs(sd.gap - spec.gamma * spec.gamma / 2) < 1e-9);
}

TEST_CASE("spectral projector is an idempotent CPTP map commuting with the flow") {
  models::XxzSpec spec;
  spec.n = 3;
  const auto lv = ops::liouvillian(models::build_xxz(spec));
  const auto sd = spectral::eig_superoperator(lv);
  const auto p = spectral::spectral_projector(sd);

  CHECK((p.mat * p.mat - p.mat).cwiseAbs().maxCoeff() < tol::projector);
  CHECK((p.mat * lv.mat - lv.mat * p.mat).cwiseAbs().maxCoeff() < 1e-8);
  const auto rep = spectral::certify_cptp(p);
  CHECK(rep.ok);

  // dual route: the projector absorbs the long-time limit of the flow
  const Matrix prop = linalg::expm((40.0 / sd.gap) * lv.mat);
  Rng rng(21);
  for (int k = 0; k < 20; ++k) {
    const Matrix rho = rng.density(8);
    const Matrix a = ops::apply_superop(prop, rho);
    const Matrix b = ops::apply_superop(prop * p.mat, rho);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("peripheral eigenvectors are genuine and biorthogonal") {
  models::XxzSpec spec;
  spec.n = 3;
  const auto lv = ops::liouvillian(models::build_xxz(spec));
  const auto sd = spectral::eig_superoperator(lv);
  const double scale = sd.scale;
  for (Index idx : sd.peripheral) {
    const Complex lam = sd.values(idx);
    const Vector r = sd.right.col(idx), l = sd.left.col(idx);
    CHECK((lv.mat * r - lam * r).norm() / scale < tol::closure);
    CHECK((lv.mat.adjoint() * l - std::conj(lam) * l).norm() / scale < tol::closure);
  }
  for (Index a : sd.peripheral)
    for (Index b : sd.peripheral) {
      const Complex g = sd.left.col(a).dot(sd.right.col(b));
      CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) < tol::biorthogonality);
    }
}

TEST_CASE("transpose map fails complete positivity with an explicit witness") {
  const Index d = 3;
  // (1 + transpose)/2 is a hermiticity and trace preserving projector
  const Matrix p = 0.5 * (Matrix::Identity(d * d, d * d) + transpose_superop(d));
  const auto rep = spectral::certify_cptp(SuperOperator(d, d, p));
  CHECK_FALSE(rep.ok);
  CHECK(rep.tp);
  CHECK_FALSE(rep.cp);
  CHECK(rep.min_choi_eig < -0.4);  // exact value -1/2
  CHECK(rep.min_choi_eig > -0.6);
}

TEST_CASE("amplitude damping gap and convergence fit") {
  const double g = 0.8;
  LindbladModel m;
  m.space = HilbertSpace(2);
  m.hamiltonian = Matrix::Zero(2, 2);
  m.jumps = {std::sqrt(g) * ops::sigma_plus()};
  m.name = "damping";
  const auto lv = ops::liouvillian(m);
  const auto sd = spectral::eig_superoperator(lv);
  CHECK(sd.kernel_dim == 1);
  CHECK(std::abs(sd.gap - g / 2) < 1e-12);

  Rng rng(4);
  const auto p = spectral::spectral_projector(sd);
  const auto rep = spectral::verify_exponential_convergence(
      lv, p, sd.gap, rng.density(2), dynamics::time_grid(10.0, 120), sd.gap);
  CHECK(std::abs(rep.fitted_rate - sd.gap) / sd.gap < 0.15);
  for (Index i = 0; i < rep.times.size(); ++i) CHECK(rep.errors(i) <= rep.bound(i) + 1e-12);
}

TEST_CASE("eigenvalue sum matches the generator trace") {
  Rng rng(8);
  LindbladModel m;
  m.space = HilbertSpace(3);
  m.hamiltonian = rng.hermitian(3);
  m.jumps = {rng.ginibre(3, 3)};
  m.name = "random";
  const auto lv = ops::liouvillian(m);
  const auto sd = spectral::eig_superoperator(lv);
  Complex sum = 0.0;
  for (Index i = 0; i < sd.values.size(); ++i) sum += sd.values(i);
  CHECK(std::abs(sum - lv.mat.trace()) / std::abs(lv.mat.trace()) < 1e-10);
}
