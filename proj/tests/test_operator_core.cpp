// Operator primitives: Pauli algebra, vectorization, site embedding,
// generator assembly, Choi matrices, and the model JSON schema.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "lindred/kernels.hpp"
#include "lindred/linalg.hpp"
#include "lindred/operator_core.hpp"
#include "lindred/rng.hpp"
#include "lindred/types.hpp"

using namespace lindred;

namespace {
const Complex I(0.0, 1.0);

double dev(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("pauli algebra and ladder operators") {
  const Matrix x = ops::pauli_x(), y = ops::pauli_y(), z = ops::pauli_z();
  CHECK(dev(x * y, I * z) < 1e-15);
  CHECK(dev(y * z, I * x) < 1e-15);
  CHECK(dev(x * x, ops::id2()) < 1e-15);
  // sigma_plus |1> = |0>, sigma_minus |0> = |1>
  Matrix sp(2, 2), sm(2, 2);
  sp.setZero();
  sm.setZero();
  sp(0, 1) = 1.0;
  sm(1, 0) = 1.0;
  CHECK(dev(ops::sigma_plus(), sp) < 1e-15);
  CHECK(dev(ops::sigma_minus(), sm) < 1e-15);
  CHECK(dev(0.5 * (x + I * y), sp) < 1e-15);
}

TEST_CASE("column-stacking vectorization round trip and product identity") {
  Rng rng(3);
  const Matrix a = rng.ginibre(5, 5), xm = rng.ginibre(5, 5), b = rng.ginibre(5, 5);
  CHECK(dev(ops::devectorize(ops::vectorize(xm), 5), xm) == 0.0);
  // vec(A X B) = (B^T (x) A) vec(X)
  const Vector lhs = ops::vectorize(a * xm * b);
  const Vector rhs = kernels::kron(b.transpose(), a) * ops::vectorize(xm);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  // vec index layout: vec(X)[j d + i] = X(i, j)
  CHECK(std::abs(ops::vectorize(xm)(3 * 5 + 2) - xm(2, 3)) == 0.0);
}

TEST_CASE("hermitian basis is orthonormal and hermitian") {
  const auto basis = ops::hermitian_basis(4);
  REQUIRE(basis.size() == 16);
  for (size_t i = 0; i < basis.size(); ++i) {
    CHECK(dev(basis[i], basis[i].adjoint()) < 1e-14);
    for (size_t j = 0; j <= i; ++j) {
      const double g = (basis[i].adjoint() * basis[j]).trace().real();
      CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("site embedding places local operators with wraparound") {
  const Matrix y = ops::pauli_y();
  const Matrix embedded = ops::embed_site(y, 2, 3);
  CHECK(dev(embedded, kernels::kron(kernels::kron(ops::id2(), y), ops::id2())) < 1e-15);
  // site n+1 wraps to site 1
  CHECK(dev(ops::embed_site(y, 4, 3), ops::embed_site(y, 1, 3)) == 0.0);
}

TEST_CASE("amplitude damping generator has the rate spectrum 0, -g/2, -g/2, -g") {
  const double g = 0.37;
  LindbladModel m;
  m.space = HilbertSpace(2);
  m.hamiltonian = Matrix::Zero(2, 2);
  m.jumps = {std::sqrt(g) * ops::sigma_plus()};
  m.name = "damping";
  const auto lv = ops::liouvillian(m);
  auto vals = linalg::eig_general(lv.mat, false).values;
  std::vector<double> re(4);
  for (Index i = 0; i < 4; ++i) re[size_t(i)] = vals(i).real();
  std::sort(re.begin(), re.end());
  CHECK(std::abs(re[0] + g) < 1e-12);
  CHECK(std::abs(re[1] + g / 2) < 1e-12);
  CHECK(std::abs(re[2] + g / 2) < 1e-12);
  CHECK(std::abs(re[3]) < 1e-12);
  // the decayed state is stationary
  Matrix ground = Matrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  CHECK(ops::apply_superop(lv.mat, ground).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("generators preserve hermiticity and annihilate trace") {
  Rng rng(11);
  LindbladModel m;
  m.space = HilbertSpace(4);
  m.hamiltonian = rng.hermitian(4);
  m.jumps = {0.6 * rng.ginibre(4, 4), 0.4 * rng.ginibre(4, 4)};
  m.name = "random";
  const auto lv = ops::liouvillian(m);
  for (int k = 0; k < 5; ++k) {
    const Matrix rho = rng.density(4);
    const Matrix out = ops::apply_superop(lv.mat, rho);
    CHECK(dev(out, out.adjoint()) < 1e-12);
    CHECK(std::abs(out.trace()) < 1e-12);
  }
  // dissipator alone does the same
  const Matrix d = ops::dissipator(m.jumps[0]);
  const Matrix rho = rng.density(4);
  const Matrix out = ops::apply_superop(d, rho);
  CHECK(dev(out, out.adjoint()) < 1e-12);
  CHECK(std::abs(out.trace()) < 1e-13);
}

TEST_CASE("heisenberg adjoint is the trace dual of the generator") {
  Rng rng(5);
  LindbladModel m;
  m.space = HilbertSpace(3);
  m.hamiltonian = rng.hermitian(3);
  m.jumps = {rng.ginibre(3, 3)};
  m.name = "random";
  const auto lv = ops::liouvillian(m);
  const Matrix adj = ops::heisenberg_adjoint(lv.mat);
  for (int k = 0; k < 5; ++k) {
    const Matrix x = rng.hermitian(3);
    const Matrix rho = rng.density(3);
    const Complex lhs = (x.adjoint() * ops::apply_superop(lv.mat, rho)).trace();
    const Complex rhs = (ops::apply_superop(adj, x).adjoint() * rho).trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("choi matrix of a single Kraus map is the rank-one vec outer product") {
  Matrix l(2, 2);
  l << 1.0, Complex(0, 2), 0.0, 1.0;
  const Matrix s = kernels::kron(l.conjugate(), l);  // X -> L X L^dagger
  const Matrix choi = ops::choi_matrix(s);
  const Vector v = ops::vectorize(l);
  CHECK(dev(choi, v * v.adjoint()) < 1e-12);
  // tracing out the output leg leaves the transposed effect operator L^dag L
  CHECK(dev(ops::choi_output_trace(choi, 2, 2), (l.adjoint() * l).transpose()) < 1e-12);
}

TEST_CASE("choi matrix of the identity channel is maximally entangled") {
  const Index d = 3;
  const Matrix s = Matrix::Identity(d * d, d * d);
  const Matrix choi = ops::choi_matrix(s);
  Vector omega = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) omega(i * d + i) = 1.0;
  CHECK(dev(choi, Matrix(omega * omega.adjoint())) < 1e-14);
}

TEST_CASE("model json parses placement, coefficients, and rejects bad input") {
  const std::string text = R"({
    "sites": 2,
    "local_dim": 2,
    "hamiltonian_terms": [
      {"coeff": 0.7, "paulis": [["z", 1]]},
      {"coeff": 0.25, "paulis": [["x", 1], ["x", 2]]}
    ],
    "jump_terms": [
      {"coeff": [0.0, 0.9], "paulis": [["-", 2]]}
    ],
    "params": {"note": 1.0}
  })";
  const auto m = ops::model_from_json(text);
  CHECK(m.space.dim == 4);
  const Matrix expect_h = 0.7 * ops::embed_site(ops::pauli_z(), 1, 2) +
                          0.25 * ops::embed_site(ops::pauli_x(), 1, 2) *
                              ops::embed_site(ops::pauli_x(), 2, 2);
  CHECK(dev(m.hamiltonian, expect_h) < 1e-14);
  REQUIRE(m.jumps.size() == 1);
  CHECK(dev(m.jumps[0], Complex(0.0, 0.9) * ops::embed_site(ops::sigma_minus(), 2, 2)) < 1e-14);

  CHECK_THROWS(ops::model_from_json(R"({"sites": 1, "local_dim": 2, "hamiltonian_terms": [],
    "jump_terms": [], "params": {}, "extra": 1})"));
  CHECK_THROWS(ops::model_from_json(R"({"sites": 1, "local_dim": 2,
    "hamiltonian_terms": [{"coeff": 1.0, "paulis": [["q", 1]]}], "jump_terms": [], "params": {}})"));
  CHECK_THROWS(ops::model_from_json(R"({"sites": 0, "local_dim": 2, "hamiltonian_terms": [],
    "jump_terms": [], "params": {}})"));
}

TEST_CASE("threaded kernels match the serial reference bit for bit") {
  Rng rng(9);
  const Matrix a = rng.ginibre(9, 7), b = rng.ginibre(6, 8);
  CHECK(dev(kernels::kron(a, b), kernels::serial::kron(a, b)) == 0.0);
  const Matrix h = rng.hermitian(6);
  const std::vector<Matrix> jumps = {rng.ginibre(6, 6), 0.3 * rng.ginibre(6, 6)};
  const Matrix lp = kernels::liouvillian(h, jumps);
  CHECK(dev(lp, kernels::serial::liouvillian(h, jumps)) == 0.0);
  CHECK(dev(kernels::choi_reshuffle(lp, 6), kernels::serial::choi_reshuffle(lp, 6)) == 0.0);
}
