#include "lindred/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "lindred/kernels.hpp"
#include "lindred/operator_core.hpp"

namespace lindred::dynamics {

RealVector time_grid(double t_max, int points) {
  if (t_max <= 0.0) throw std::invalid_argument("time_grid: t_max must be positive");
  if (points < 4) throw std::invalid_argument("time_grid: need at least 4 points");
  const int geo = points / 2;
  const int lin = points - geo;
  std::vector<double> ts;
  ts.reserve(static_cast<size_t>(points) + 1);
  ts.push_back(0.0);
  // geometric head from t_max/500 up to t_max/4
  const double t0 = t_max / 500.0;
  const double t1 = t_max / 4.0;
  for (int i = 0; i < geo; ++i) {
    ts.push_back(t0 * std::pow(t1 / t0, double(i) / double(geo - 1)));
  }
  // uniform tail covering [t_max/4, t_max]
  for (int i = 1; i <= lin; ++i) {
    ts.push_back(t1 + (t_max - t1) * double(i) / double(lin));
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return Eigen::Map<const RealVector>(ts.data(), static_cast<Index>(ts.size()));
}

namespace {

Trajectory propagate_stepper(const Matrix& gen, const Matrix& rho0, const RealVector& times) {
  const Index d = rho0.rows();
  Trajectory out;
  out.times = times;
  out.used_stepper = true;
  out.states.reserve(static_cast<size_t>(times.size()));

  std::vector<Index> order(static_cast<size_t>(times.size()));
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return times[a] < times[b]; });

  std::map<double, Matrix> step_cache;  // grid spacings repeat, so cache exp(dt*gen)
  Vector v = ops::vectorize(rho0);
  double t_cur = 0.0;
  std::vector<Matrix> states(static_cast<size_t>(times.size()));
  for (Index idx : order) {
    const double dt = times[idx] - t_cur;
    if (dt > 0.0) {
      auto it = step_cache.find(dt);
      if (it == step_cache.end()) it = step_cache.emplace(dt, linalg::expm(dt * gen)).first;
      v = it->second * v;
      t_cur = times[idx];
    }
    states[static_cast<size_t>(idx)] = ops::devectorize(v, d);
  }
  out.states = std::move(states);
  return out;
}

}  // namespace

Trajectory propagate_with(const linalg::EigGeneral& eig, const Matrix& gen, const Matrix& rho0,
                          const RealVector& times, const PropagateOptions& opt) {
  const Index d = rho0.rows();
  if (gen.rows() != d * d || gen.cols() != d * d) {
    throw std::invalid_argument("propagate: generator/state dimension mismatch");
  }
  if (!opt.force_stepper) {
    const Vector v0 = ops::vectorize(rho0);
    Eigen::PartialPivLU<Matrix> lu(eig.right);
    const Vector c0 = lu.solve(v0);
    const double residual = (eig.right * c0 - v0).norm() / std::max(v0.norm(), 1e-300);
    if (residual <= opt.residual_limit) {
      const Matrix cols = kernels::phase_propagate(eig.right, c0, eig.values, times);
      Trajectory out;
      out.times = times;
      out.states.reserve(static_cast<size_t>(times.size()));
      for (Index j = 0; j < cols.cols(); ++j) {
        out.states.push_back(ops::devectorize(cols.col(j), d));
      }
      return out;
    }
    std::cerr << "propagate: eigenbasis residual " << residual
              << " exceeds limit, using stepwise exponentials\n";
  }
  return propagate_stepper(gen, rho0, times);
}

Trajectory propagate(const Matrix& gen, const Matrix& rho0, const RealVector& times,
                     const PropagateOptions& opt) {
  if (opt.force_stepper) return propagate_stepper(gen, rho0, times);
  const auto eig = linalg::eig_general(gen, false);
  return propagate_with(eig, gen, rho0, times, opt);
}

double expectation(const Matrix& obs, const Matrix& rho) {
  return (obs * rho).trace().real();
}

std::vector<Matrix> propagator_family(const Matrix& gen, const RealVector& times,
                                      const PropagateOptions& opt) {
  if (gen.rows() != gen.cols()) throw std::invalid_argument("propagator_family: gen not square");
  const Index n = gen.rows();
  std::vector<Matrix> out(static_cast<size_t>(times.size()));
  if (!opt.force_stepper) {
    const auto eig = linalg::eig_general(gen, false);
    Eigen::PartialPivLU<Matrix> lu(eig.right);
    const Matrix vinv = lu.inverse();
    const double residual = (eig.right * eig.values.asDiagonal() * vinv - gen).norm() /
                            std::max(gen.norm(), 1e-300);
    if (residual <= opt.residual_limit) {
      for (Index i = 0; i < times.size(); ++i) {
        const Vector phases = (times[i] * eig.values.array()).exp();
        out[static_cast<size_t>(i)] = eig.right * phases.asDiagonal() * vinv;
      }
      return out;
    }
    std::cerr << "propagator_family: eigenbasis residual " << residual
              << " exceeds limit, using stepwise exponentials\n";
  }
  // Step through sorted times so each exponential covers only an increment.
  std::vector<Index> order(static_cast<size_t>(times.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return times[a] < times[b]; });
  Matrix current = Matrix::Identity(n, n);
  double t_current = 0.0;
  for (const Index idx : order) {
    const double t = times[idx];
    if (t < 0.0) throw std::invalid_argument("propagator_family: negative time");
    if (t > t_current) {
      current = (linalg::expm(Matrix((t - t_current) * gen)) * current).eval();
      t_current = t;
    }
    out[static_cast<size_t>(idx)] = current;
  }
  return out;
}

DecayFit decay_fit(const RealVector& times, const RealVector& errors, double window_fraction) {
  if (times.size() != errors.size()) throw std::invalid_argument("decay_fit: size mismatch");
  if (times.size() < 3) throw std::invalid_argument("decay_fit: need at least 3 samples");
  if (window_fraction <= 0.0 || window_fraction > 1.0) {
    throw std::invalid_argument("decay_fit: window_fraction must lie in (0, 1]");
  }
  const Index n = times.size();
  Index start = n - std::max<Index>(3, static_cast<Index>(std::ceil(window_fraction * double(n))));
  if (start < 0) start = 0;

  DecayFit fit;
  std::vector<double> xs, ys;
  for (Index i = start; i < n; ++i) {
    if (errors[i] > 0.0) {
      xs.push_back(times[i]);
      ys.push_back(std::log(errors[i]));
    } else {
      fit.window_shrunk = true;
    }
  }
  if (xs.size() < 3) {
    // trailing window hit the noise floor; widen toward earlier samples
    fit.window_shrunk = true;
    xs.clear();
    ys.clear();
    for (Index i = 0; i < n; ++i) {
      if (errors[i] > 0.0) {
        xs.push_back(times[i]);
        ys.push_back(std::log(errors[i]));
      }
    }
    if (xs.size() < 3) throw std::runtime_error("decay_fit: fewer than 3 positive samples");
  }

  // least squares for log(err) = intercept - rate * t
  const auto m = static_cast<Index>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (Index i = 0; i < m; ++i) {
    sx += xs[static_cast<size_t>(i)];
    sy += ys[static_cast<size_t>(i)];
    sxx += xs[static_cast<size_t>(i)] * xs[static_cast<size_t>(i)];
    sxy += xs[static_cast<size_t>(i)] * ys[static_cast<size_t>(i)];
  }
  const double denom = double(m) * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) throw std::runtime_error("decay_fit: degenerate time window");
  const double slope = (double(m) * sxy - sx * sy) / denom;
  fit.rate = -slope;
  fit.intercept = (sy - slope * sx) / double(m);
  fit.points_used = static_cast<int>(m);
  return fit;
}

}  // namespace lindred::dynamics
