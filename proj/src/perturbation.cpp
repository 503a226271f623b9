#include "lindred/perturbation.hpp"

#include <Eigen/LU>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "lindred/linalg.hpp"

namespace lindred::perturbation {

void PerturbedGenerator::validate() const {
  if (terms.empty()) throw std::invalid_argument("PerturbedGenerator: no terms");
  const Index din = terms.front().dim_in, dout = terms.front().dim_out;
  for (const auto& t : terms) {
    if (t.dim_in != din || t.dim_out != dout)
      throw std::invalid_argument("PerturbedGenerator: term dimension mismatch");
    if (t.mat.rows() != dout * dout || t.mat.cols() != din * din)
      throw std::invalid_argument("PerturbedGenerator: term matrix shape mismatch");
  }
  if (!(eps0 >= 0.0)) throw std::invalid_argument("PerturbedGenerator: eps0 must be >= 0");
}

SuperOperator PerturbedGenerator::evaluate(double eps) const {
  validate();
  SuperOperator out = terms.front();
  double w = 1.0;
  for (size_t k = 1; k < terms.size(); ++k) {
    w *= eps;
    out.mat += w * terms[k].mat;
  }
  return out;
}

PerturbedGenerator from_additive(const SuperOperator& l0, const SuperOperator& delta) {
  if (l0.dim_in != delta.dim_in || l0.dim_out != delta.dim_out)
    throw std::invalid_argument("from_additive: dimension mismatch");
  PerturbedGenerator gen;
  gen.terms.push_back(l0);
  gen.eps0 = linalg::sop_norm(delta.mat);
  if (gen.eps0 > 0.0) {
    SuperOperator unit = delta;
    unit.mat /= gen.eps0;
    gen.terms.push_back(unit);
  }
  // Members along [0, eps0] must stay valid generators; the interior point
  // catches families whose endpoints are fine but whose split is not.
  const std::set<double> grid{0.0, 0.5 * gen.eps0, gen.eps0};
  for (const double e : grid) {
    const auto rep = reduction::lindblad_check(gen.evaluate(e));
    if (!rep.ok) {
      throw std::runtime_error(
          "from_additive: family fails generator conditions at eps=" + std::to_string(e) +
          " (min conditional eigenvalue " + std::to_string(rep.min_conditional_eig) +
          ", tp residual " + std::to_string(rep.tp_residual) + ")");
    }
  }
  return gen;
}

SuperOperator reduced_perturbed(const PerturbedGenerator& gen,
                                const reduction::ReductionMaps& maps0, double eps) {
  const SuperOperator full = gen.evaluate(eps);
  if (full.dim_in != maps0.r.dim_in)
    throw std::invalid_argument("reduced_perturbed: maps do not match the generator space");
  return reduction::reduced_generator(full, maps0);
}

namespace {

// Propagator factory evaluating exp(t * gen) one time at a time; keeps memory
// flat in the number of sample times.  Falls back to direct exponentials when
// the eigenbasis does not reconstruct gen accurately.
class PropagatorFactory {
 public:
  explicit PropagatorFactory(const Matrix& gen) : gen_(gen) {
    const auto eig = linalg::eig_general(gen, false);
    Eigen::PartialPivLU<Matrix> lu(eig.right);
    vinv_ = lu.inverse();
    basis_ = eig.right;
    values_ = eig.values;
    const double residual =
        (basis_ * values_.asDiagonal() * vinv_ - gen).norm() / std::max(gen.norm(), 1e-300);
    diagonalizable_ = residual <= 1e-8;
  }

  Matrix at(double t) const {
    if (diagonalizable_) {
      const Vector phases = (t * values_.array()).exp();
      return basis_ * phases.asDiagonal() * vinv_;
    }
    return linalg::expm(Matrix(t * gen_));
  }

 private:
  Matrix gen_, basis_, vinv_;
  Vector values_;
  bool diagonalizable_ = false;
};

}  // namespace

ErrorBoundReport error_bounds(const PerturbedGenerator& gen,
                              const reduction::ReductionMaps& maps0, double eps,
                              const RealVector& times) {
  gen.validate();
  if (gen.terms.size() != 2)
    throw std::invalid_argument("error_bounds: two-term family required");
  const double l1n = linalg::sop_norm(gen.terms[1].mat);
  const SuperOperator full = gen.evaluate(eps);
  const SuperOperator red = reduced_perturbed(gen, maps0, eps);
  const Matrix p0 = maps0.j.mat * maps0.r.mat;

  const PropagatorFactory prop_full(full.mat);
  const PropagatorFactory prop_red(red.mat);

  ErrorBoundReport rep;
  rep.times = times;
  rep.eps = eps;
  rep.l1_norm = l1n;
  const Index n = times.size();
  rep.lhs_i.resize(n);
  rep.rhs_i.resize(n);
  rep.lhs_ii.resize(n);
  rep.rhs_ii.resize(n);
  rep.in_window_i.resize(static_cast<size_t>(n));
  rep.in_window_ii.resize(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double t = times[i];
    if (t < 0.0) throw std::invalid_argument("error_bounds: negative time");
    const Matrix e_full = prop_full.at(t);
    const Matrix approx = maps0.j.mat * prop_red.at(t) * maps0.r.mat;
    rep.lhs_i[i] = linalg::sop_norm(e_full * p0 - approx);
    rep.lhs_ii[i] = linalg::sop_norm(p0 * e_full * p0 - approx);
    const double linear = t * std::abs(eps) * l1n;
    rep.rhs_i[i] = linear;
    rep.rhs_ii[i] = 0.5 * linear * linear;
    rep.in_window_i[static_cast<size_t>(i)] = rep.rhs_i[i] <= 0.5;
    rep.in_window_ii[static_cast<size_t>(i)] = rep.rhs_ii[i] <= 0.5;
  }
  return rep;
}

}  // namespace lindred::perturbation
