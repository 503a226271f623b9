// lindred_cli.cpp — Command-line front end: model inspection, certified
// reduction pipelines (asymptotic, perturbative, first-order elimination),
// trajectory simulation, figure-data export, and the invariant suites.
// Identical configuration and seeds produce byte-identical artifacts.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lindred/adiabatic.hpp"
#include "lindred/dynamics.hpp"
#include "lindred/io.hpp"
#include "lindred/kernels.hpp"
#include "lindred/linalg.hpp"
#include "lindred/models.hpp"
#include "lindred/operator_core.hpp"
#include "lindred/perturbation.hpp"
#include "lindred/reduction.hpp"
#include "lindred/rng.hpp"
#include "lindred/spectral.hpp"
#include "lindred/types.hpp"
#include "lindred/verify.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lindred;

// collected command configuration; the config-file schema mirrors the fields
struct RunConfig {
  std::string command;
  std::string model = "xxz";  // zoo name or path to a model JSON spec
  int n = 3;
  bool n_given = false;
  std::vector<double> eps;
  std::string gauge = "zero";
  int seed = 0;
  double tol = -1.0;  // peripheral classification cutoff, negative = automatic
  std::string out = ".";
  int threads = 0;
  double tmax = -1.0;  // negative = per-command default
  int points = 200;
  int figure = 0;
  std::string suite = "all";
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// documented config schema (all keys optional, unknown keys rejected):
// { "command": str, "model": str, "N": int, "eps": [real...], "gauge": str,
//   "seed": int, "tol": real, "out": str, "threads": int, "tmax": real,
//   "points": int, "figure": int, "suite": str }
void apply_config_file(RunConfig& cfg, const std::string& path) {
  const json j = json::parse(io::read_text(path));
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  static const std::set<std::string> allowed = {"command", "model", "N",     "eps",
                                                "gauge",   "seed",  "tol",   "out",
                                                "threads", "tmax",  "points", "figure",
                                                "suite"};
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key()))
      throw UsageError("config file: unknown key '" + item.key() + "'");
  }
  if (j.contains("command")) cfg.command = j["command"].get<std::string>();
  if (j.contains("model")) cfg.model = j["model"].get<std::string>();
  if (j.contains("N")) {
    cfg.n = j["N"].get<int>();
    cfg.n_given = true;
  }
  if (j.contains("eps")) cfg.eps = j["eps"].get<std::vector<double>>();
  if (j.contains("gauge")) cfg.gauge = j["gauge"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<int>();
  if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("tmax")) cfg.tmax = j["tmax"].get<double>();
  if (j.contains("points")) cfg.points = j["points"].get<int>();
  if (j.contains("figure")) cfg.figure = j["figure"].get<int>();
  if (j.contains("suite")) cfg.suite = j["suite"].get<std::string>();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_artifact(const RunConfig& cfg, const std::string& name, const std::string& text) {
  fs::create_directories(cfg.out);
  const std::string path = (fs::path(cfg.out) / name).string();
  io::write_text(path, text);
  std::printf("wrote %s\n", path.c_str());
}

std::string safe_name(std::string s) {
  for (char& c : s)
    if (c == '+' || c == '/' || c == '\\') c = '_';
  return s;
}

// resolved model plus the optional perturbation family it carries
struct ModelBundle {
  LindbladModel model0;
  std::optional<perturbation::PerturbedGenerator> family;
  std::optional<models::DephasingChain> chain;
  std::optional<models::XxzSpec> xxz;
  std::string name;
};

ModelBundle load_model(const RunConfig& cfg) {
  ModelBundle b;
  b.name = safe_name(cfg.model);
  if (cfg.model == "xxz" || cfg.model == "xxz+disorder") {
    models::XxzSpec spec;
    spec.n = cfg.n;
    b.xxz = spec;
    b.model0 = models::build_xxz(spec);
    if (cfg.model == "xxz+disorder") {
      const auto dis = models::disorder_perturbation(cfg.n, std::uint64_t(cfg.seed));
      b.family = models::hamiltonian_family(b.model0, dis.h1);
    }
    return b;
  }
  if (cfg.model == "dephasing") {
    b.chain = models::build_dephasing(models::dephasing_random(cfg.n, 1.0, std::uint64_t(cfg.seed)));
    b.model0 = b.chain->model0;
    b.family = b.chain->family;
    return b;
  }
  if (fs::exists(cfg.model)) {
    b.model0 = ops::model_from_json_file(cfg.model);
    b.name = safe_name(fs::path(cfg.model).stem().string());
    return b;
  }
  throw UsageError("unknown model '" + cfg.model +
                   "' (zoo: xxz, xxz+disorder, dephasing; or a path to a model JSON spec)");
}

adiabatic::GaugeStrategy gauge_strategy(const RunConfig& cfg, int seed) {
  if (cfg.gauge == "zero") return adiabatic::GaugeStrategy::zero();
  if (cfg.gauge == "random") return adiabatic::GaugeStrategy::random_uniform(seed);
  if (cfg.gauge == "commutant") return adiabatic::GaugeStrategy::random_commutant(seed);
  throw UsageError("unknown gauge '" + cfg.gauge + "' (zero, random, commutant)");
}

std::vector<double> eps_grid(const RunConfig& cfg, const ModelBundle& b) {
  if (!cfg.eps.empty()) return cfg.eps;
  // dissipative perturbations admit only nonnegative strengths
  if (b.chain) return {0.1, 0.5, 1.0};
  return {-0.5, -0.1, 0.1, 0.5};
}

Matrix tensor_power(const Matrix& local, int n) {
  Matrix out = local;
  for (int s = 2; s <= n; ++s) out = kernels::kron(out, local);
  return out;
}

Matrix plus_state(int n) {
  const Index d = Index(1) << n;
  Vector v = Vector::Constant(d, Complex(1.0 / std::sqrt(double(d)), 0.0));
  return v * v.adjoint();
}

Matrix act(const SuperOperator& s, const Matrix& x) { return ops::apply_superop(s.mat, x); }

// spectral gap from eigenvalues only (no vectors), for per-member reports
double gap_of(const Matrix& gen) {
  const auto vals = linalg::eig_general(gen, false).values;
  double scale = 0.0;
  for (Index i = 0; i < vals.size(); ++i) scale = std::max(scale, std::abs(vals[i]));
  const double cut = 1e-7 * std::max(1.0, scale);
  double gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < vals.size(); ++i)
    if (std::abs(vals[i].real()) > cut) gap = std::min(gap, std::abs(vals[i].real()));
  return std::isfinite(gap) ? gap : 0.0;
}

json check_to_json(const reduction::LindbladCheckReport& r) {
  return json{{"ok", r.ok},
              {"min_conditional_eig", r.min_conditional_eig},
              {"tp_residual", r.tp_residual},
              {"herm_residual", r.herm_residual},
              {"leak_residual", r.leak_residual}};
}

int cmd_model(const RunConfig& cfg) {
  const auto b = load_model(cfg);
  const auto lv = ops::liouvillian(b.model0);
  const auto sd = spectral::eig_superoperator(lv, cfg.tol);

  json j{{"model", cfg.model},
         {"hilbert_dim", b.model0.space.dim},
         {"sites", b.model0.space.sites()},
         {"jump_count", b.model0.jumps.size()},
         {"spectral_gap", sd.gap},
         {"peripheral_count", sd.peripheral.size()},
         {"has_perturbation_family", bool(b.family)}};
  if (b.xxz) {
    j["params"] = json{{"omega", b.xxz->omega},
                       {"a_xy", b.xxz->a_xy},
                       {"a_z", b.xxz->a_z},
                       {"gamma", b.xxz->gamma}};
    const auto sectors = models::sector_data(*b.xxz);
    std::vector<Index> dims = sectors.dims;
    j["sector_dims"] = dims;
    j["logical_frequency"] = sectors.omega0;
  }
  write_artifact(cfg, "model_" + b.name + ".json", dump(j));
  write_artifact(cfg, "spectrum_" + b.name + ".csv", io::to_csv(io::spectrum_table(sd.values)));
  std::printf("model %s: dim %lld, %zu jumps, gap %.6f, %zu peripheral eigenvalues\n",
              cfg.model.c_str(), static_cast<long long>(b.model0.space.dim),
              b.model0.jumps.size(), sd.gap, sd.peripheral.size());
  return 0;
}

int reduce_center(const RunConfig& cfg, const ModelBundle& b) {
  const auto pipe = reduction::reduce_model(b.model0, cfg.seed);
  write_artifact(cfg, "reduce_" + b.name + ".json", io::pipeline_json(pipe, cfg.model));
  write_artifact(cfg, "reduced_spectrum_" + b.name + ".csv",
                 io::to_csv(io::spectrum_table(linalg::eig_general(pipe.reduced_gen.mat, false).values)));
  std::printf("reduced %s: gap %.6f, kernel %lld, center %lld, %zu blocks, certification %s\n",
              cfg.model.c_str(), pipe.gap, static_cast<long long>(pipe.kernel_dim),
              static_cast<long long>(pipe.center_dim), pipe.wedderburn.blocks.size(),
              pipe.cert.ok ? "ok" : "FAILED");
  return pipe.cert.ok ? 0 : 1;
}

int reduce_perturbative(const RunConfig& cfg, const ModelBundle& b) {
  if (!b.family)
    throw UsageError("perturbative mode needs a perturbed model (xxz+disorder or dephasing)");
  const auto pipe = reduction::reduce_model(b.model0, cfg.seed);
  const auto grid = eps_grid(cfg, b);

  json checks = json::array();
  bool all_ok = true;
  for (double eps : grid) {
    const Matrix red =
        pipe.maps.r.mat * b.family->evaluate(eps).mat * pipe.maps.j.mat;
    const auto chk = reduction::lindblad_check(
        SuperOperator(pipe.maps.algebra.total_dim(), pipe.maps.algebra.total_dim(), red),
        pipe.maps.algebra);
    json entry = check_to_json(chk);
    entry["eps"] = eps;
    checks.push_back(entry);
    all_ok = all_ok && chk.ok;
  }

  double eps_ref = 0.0;
  for (double e : grid) eps_ref = std::max(eps_ref, std::abs(e));
  const RealVector times = dynamics::time_grid(cfg.tmax > 0 ? cfg.tmax : 1.0, cfg.points / 4);
  const auto bounds = perturbation::error_bounds(*b.family, pipe.maps, eps_ref, times);

  write_artifact(cfg, "perturbative_" + b.name + ".json",
                 dump(json{{"model", cfg.model},
                           {"eps_checks", checks},
                           {"all_pass", all_ok},
                           {"bound_eps", eps_ref},
                           {"first_order_norm", bounds.l1_norm}}));
  write_artifact(cfg, "error_bounds_" + b.name + ".csv", io::to_csv(io::error_bounds_table(bounds)));
  std::printf("perturbative %s: %zu grid points, certification %s\n", cfg.model.c_str(),
              grid.size(), all_ok ? "ok" : "FAILED");
  return all_ok ? 0 : 1;
}

int reduce_ae(const RunConfig& cfg, const ModelBundle& b) {
  if (!b.family)
    throw UsageError("ae mode needs a perturbed model (xxz+disorder or dephasing)");
  // the dephasing chain carries its classical diagonal-algebra maps; other
  // models use the certified maps of the unperturbed pipeline
  const reduction::ReductionMaps maps0 =
      b.chain ? b.chain->classical : reduction::reduce_model(b.model0, cfg.seed).maps;
  const auto ae = adiabatic::first_order_AE(*b.family, maps0, gauge_strategy(cfg, cfg.seed));

  const auto grid = eps_grid(cfg, b);
  RealVector grid_v(Index(grid.size()));
  for (size_t i = 0; i < grid.size(); ++i) grid_v(Index(i)) = grid[i];
  const auto cert = adiabatic::certify_first_order(ae, grid_v);

  write_artifact(cfg, "ae_" + b.name + ".json", io::ae_report_json(ae, cert));
  if (b.chain) {
    // realized first-order generator restricted to populations: the classical
    // rate matrix in Metzler form
    const Index dr = maps0.algebra.total_dim();
    RealMatrix rates(dr, dr);
    for (Index i = 0; i < dr; ++i)
      for (Index j = 0; j < dr; ++j) rates(i, j) = ae.l_hat_1.mat(i * dr + i, j * dr + j).real();
    write_artifact(cfg, "metzler_" + b.name + ".csv", io::to_csv(io::real_matrix_table(rates)));
  }
  std::printf("ae %s: gauge %s, invariance %.3e, certification %s\n", cfg.model.c_str(),
              ae.strategy.name().c_str(), ae.invariance_residual,
              cert.all_pass ? "ok" : "FAILED");
  return cert.all_pass ? 0 : 1;
}

int cmd_reduce(const RunConfig& cfg, const std::string& mode) {
  const auto b = load_model(cfg);
  if (mode == "center") return reduce_center(cfg, b);
  if (mode == "perturbative") return reduce_perturbative(cfg, b);
  if (mode == "ae") return reduce_ae(cfg, b);
  throw UsageError("unknown mode '" + mode + "' (center, perturbative, ae)");
}

int cmd_simulate(const RunConfig& cfg) {
  const auto b = load_model(cfg);
  const double tmax = cfg.tmax > 0 ? cfg.tmax : 10.0;
  const RealVector times = dynamics::time_grid(tmax, cfg.points);
  const double eps = cfg.eps.empty() ? 0.1 : cfg.eps.front();
  const SuperOperator lv = b.family ? b.family->evaluate(eps) : ops::liouvillian(b.model0);

  // the dephasing chain keeps its population coordinates; everything else
  // goes through the certified pipeline of the unperturbed model
  reduction::ReductionMaps maps;
  double gap = 0.0;
  if (b.chain) {
    maps = b.chain->classical;
    gap = gap_of(lv.mat);
  } else {
    const auto pipe = reduction::reduce_model(b.model0, cfg.seed);
    maps = pipe.maps;
    gap = b.family ? gap_of(lv.mat) : pipe.gap;
  }

  Rng rng(std::uint64_t(cfg.seed));
  const Matrix rho0 = rng.density(b.model0.space.dim);
  const auto traj = dynamics::propagate(lv.mat, rho0, times);
  const Matrix red_gen = maps.r.mat * lv.mat * maps.j.mat;
  const auto traj_red = dynamics::propagate(red_gen, act(maps.r, rho0), times);

  io::Table table;
  table.add("t", times);
  RealVector tracedist(times.size()), bound(times.size());
  for (Index i = 0; i < times.size(); ++i) {
    tracedist(i) = linalg::trace_norm(traj.states[size_t(i)] -
                                      act(maps.j, traj_red.states[size_t(i)]));
    bound(i) = std::exp(-gap * times(i));
  }

  if (b.xxz) {
    const auto sectors = models::sector_data(*b.xxz);
    const Matrix xall = tensor_power(ops::pauli_x(), cfg.n);
    const double ax = dynamics::expectation(sectors.logical_x.mat, rho0);
    const double ay = dynamics::expectation(sectors.logical_y.mat, rho0);
    RealVector exp_xn(times.size()), exp_xl(times.size()), theory(times.size());
    for (Index i = 0; i < times.size(); ++i) {
      exp_xn(i) = dynamics::expectation(xall, traj.states[size_t(i)]);
      exp_xl(i) = dynamics::expectation(sectors.logical_x.mat, traj.states[size_t(i)]);
      theory(i) = ax * std::cos(sectors.omega0 * times(i)) -
                  ay * std::sin(sectors.omega0 * times(i));
    }
    table.add("exp_XN", exp_xn);
    table.add("exp_XL", exp_xl);
    table.add("theory", theory);
  } else if (b.chain) {
    RealVector pop_full(times.size()), pop_red(times.size());
    for (Index i = 0; i < times.size(); ++i) {
      pop_full(i) = traj.states[size_t(i)](0, 0).real();
      pop_red(i) = traj_red.states[size_t(i)](0, 0).real();
    }
    table.add("pop0_full", pop_full);
    table.add("pop0_reduced", pop_red);
  }
  table.add("tracedist", tracedist);
  table.add("bound", bound);
  write_artifact(cfg, "simulate_" + b.name + ".csv", io::to_csv(table));
  std::printf("simulated %s to t=%.2f (%lld samples)\n", cfg.model.c_str(), tmax,
              static_cast<long long>(times.size()));
  return 0;
}

void write_meta(const RunConfig& cfg, int figure, const json& extra,
                const std::vector<std::string>& seed_dependent) {
  json j{{"figure", figure},
         {"N", cfg.n},
         {"seed", cfg.seed},
         {"seed_dependent_columns", seed_dependent}};
  for (const auto& item : extra.items()) j[item.key()] = item.value();
  write_artifact(cfg, "fig" + std::to_string(figure) + "_meta.json", dump(j));
}

// full and logical observable expectations plus convergence of the injected
// reduced state, for a random initial condition
int figdata_1(const RunConfig& cfg) {
  models::XxzSpec spec;
  spec.n = cfg.n;
  const auto model = models::build_xxz(spec);
  const auto lv = ops::liouvillian(model);
  const auto pipe = reduction::reduce_model(model, cfg.seed);
  const auto sectors = models::sector_data(spec);

  Rng rng(std::uint64_t(cfg.seed));
  const Matrix rho0 = rng.density(model.space.dim);
  const RealVector times = dynamics::time_grid(cfg.tmax > 0 ? cfg.tmax : 10.0, cfg.points);
  const auto traj = dynamics::propagate(lv.mat, rho0, times);
  const auto traj_red =
      dynamics::propagate(pipe.reduced_gen.mat, act(pipe.maps.r, rho0), times);

  const Matrix xall = tensor_power(ops::pauli_x(), cfg.n);
  const double ax = dynamics::expectation(sectors.logical_x.mat, rho0);
  const double ay = dynamics::expectation(sectors.logical_y.mat, rho0);

  io::Table t;
  RealVector exp_xn(times.size()), exp_xl(times.size()), theory(times.size()),
      tracedist(times.size()), bound(times.size());
  for (Index i = 0; i < times.size(); ++i) {
    const Matrix& rho = traj.states[size_t(i)];
    exp_xn(i) = dynamics::expectation(xall, rho);
    exp_xl(i) = dynamics::expectation(sectors.logical_x.mat, rho);
    theory(i) =
        ax * std::cos(sectors.omega0 * times(i)) - ay * std::sin(sectors.omega0 * times(i));
    tracedist(i) = linalg::trace_norm(rho - act(pipe.maps.j, traj_red.states[size_t(i)]));
    bound(i) = std::exp(-pipe.gap * times(i));
  }
  t.add("t", times);
  t.add("exp_XN", exp_xn);
  t.add("exp_XL", exp_xl);
  t.add("theory", theory);
  t.add("tracedist", tracedist);
  t.add("bound", bound);
  write_artifact(cfg, "fig1.csv", io::to_csv(t));
  write_meta(cfg, 1,
             json{{"model", "xxz"},
                  {"spectral_gap", pipe.gap},
                  {"logical_frequency", sectors.omega0},
                  {"envelope", "exp(-gap*t) with unit prefactor"}},
             {"exp_XN", "exp_XL", "theory", "tracedist"});
  return 0;
}

// gauge-choice comparison (trace-norm error, 30 gauge draws) and
// synchronization decay of the perturbed chain across eps
int figdata_2(const RunConfig& cfg) {
  models::XxzSpec spec;
  spec.n = cfg.n;
  const auto model0 = models::build_xxz(spec);
  const auto pipe = reduction::reduce_model(model0, cfg.seed);
  const auto dis = models::disorder_perturbation(cfg.n, std::uint64_t(cfg.seed));
  const auto fam = models::hamiltonian_family(model0, dis.h1);
  const auto sectors = models::sector_data(spec);

  const double eps = cfg.eps.empty() ? 0.1 : cfg.eps.front();
  const Matrix rho0 = plus_state(cfg.n);
  const RealVector times = dynamics::time_grid(cfg.tmax > 0 ? cfg.tmax : 10.0, cfg.points);
  const Index nt = times.size();

  const auto lv_eps = fam.evaluate(eps);
  const auto traj = dynamics::propagate(lv_eps.mat, rho0, times);

  // fixed-map route
  const Matrix red_mr = pipe.maps.r.mat * lv_eps.mat * pipe.maps.j.mat;
  const auto traj_mr = dynamics::propagate(red_mr, act(pipe.maps.r, rho0), times);
  RealVector err_mr(nt);
  for (Index i = 0; i < nt; ++i)
    err_mr(i) = linalg::trace_norm(traj.states[size_t(i)] -
                                   act(pipe.maps.j, traj_mr.states[size_t(i)]));

  // thirty gauge draws per strategy on one shared workspace
  const auto ws = adiabatic::prepare_AE(fam, pipe.maps);
  const int runs = 30;
  RealMatrix err_uni(nt, runs), err_com(nt, runs);
  for (int r = 0; r < runs; ++r) {
    for (int which = 0; which < 2; ++which) {
      const auto strategy = which == 0
                                ? adiabatic::GaugeStrategy::random_uniform(cfg.seed + r)
                                : adiabatic::GaugeStrategy::random_commutant(cfg.seed + r);
      const auto ae = adiabatic::realize_gauge(ws, strategy);
      const auto traj_ae = dynamics::propagate(
          ae.l_tilde(eps).mat, ops::apply_superop(ae.r_tilde(eps).mat, rho0), times);
      for (Index i = 0; i < nt; ++i) {
        const double e = linalg::trace_norm(
            traj.states[size_t(i)] -
            ops::apply_superop(ae.j_tilde(eps).mat, traj_ae.states[size_t(i)]));
        (which == 0 ? err_uni : err_com)(i, r) = e;
      }
    }
  }
  io::Table left;
  left.add("t", times);
  left.add("algebraic", err_mr);
  RealVector mean_u(nt), std_u(nt), mean_c(nt), std_c(nt);
  for (Index i = 0; i < nt; ++i) {
    mean_u(i) = err_uni.row(i).mean();
    std_u(i) = std::sqrt((err_uni.row(i).array() - mean_u(i)).square().mean());
    mean_c(i) = err_com.row(i).mean();
    std_c(i) = std::sqrt((err_com.row(i).array() - mean_c(i)).square().mean());
  }
  left.add("uniform_mean", mean_u);
  left.add("uniform_std", std_u);
  left.add("commutant_mean", mean_c);
  left.add("commutant_std", std_c);
  write_artifact(cfg, "fig2_left.csv", io::to_csv(left));

  // synchronization decay: full vs reduced logical prediction per eps
  io::Table right;
  right.add("t", times);
  const Matrix xall = tensor_power(ops::pauli_x(), cfg.n);
  for (double e : std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto lve = fam.evaluate(e);
    const auto tr_full = dynamics::propagate(lve.mat, rho0, times);
    const Matrix rede = pipe.maps.r.mat * lve.mat * pipe.maps.j.mat;
    const auto tr_red = dynamics::propagate(rede, act(pipe.maps.r, rho0), times);
    RealVector xn(nt), xr(nt);
    for (Index i = 0; i < nt; ++i) {
      xn(i) = dynamics::expectation(xall, tr_full.states[size_t(i)]);
      xr(i) = dynamics::expectation(xall, act(pipe.maps.j, tr_red.states[size_t(i)]));
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", e);
    right.add(std::string("xn_full_eps") + buf, xn);
    right.add(std::string("xn_reduced_eps") + buf, xr);
  }
  write_artifact(cfg, "fig2_right.csv", io::to_csv(right));
  write_meta(cfg, 2,
             json{{"model", "xxz+disorder"},
                  {"eps_left", eps},
                  {"eps_right", {0.1, 0.3, 0.5, 0.7, 0.9}},
                  {"runs", runs},
                  {"initial_state", "uniform superposition projector"},
                  {"note", "curves are emitted unshifted"}},
             {"algebraic", "uniform_mean", "uniform_std", "commutant_mean", "commutant_std",
              "xn_full_eps*", "xn_reduced_eps*"});
  return 0;
}

// distance of the reduced model to the exact and projected evolutions with
// the linear and quadratic bounds, plus the eps-scaling table
int figdata_3(const RunConfig& cfg) {
  models::XxzSpec spec;
  spec.n = cfg.n;
  const auto model0 = models::build_xxz(spec);
  const auto pipe = reduction::reduce_model(model0, cfg.seed);
  const auto dis = models::disorder_perturbation(cfg.n, std::uint64_t(cfg.seed));
  const auto fam = models::hamiltonian_family(model0, dis.h1);
  const double l1n = linalg::sop_norm(fam.terms[1].mat);

  // random initial state on the unperturbed center manifold
  Rng rng(std::uint64_t(cfg.seed));
  const Matrix sigma = ops::devectorize(
      pipe.maps.algebra.pinch() * ops::vectorize(rng.density(pipe.maps.algebra.total_dim())),
      pipe.maps.algebra.total_dim());
  const Matrix rho0 = act(pipe.maps.j, sigma);

  const std::vector<double> wt = {0.3, 0.9, 1.5, 2.1, 2.7};
  const double tmax = cfg.tmax > 0 ? cfg.tmax : 2.5;
  std::vector<double> tvals;
  const RealVector base = dynamics::time_grid(tmax, cfg.points);
  for (Index i = 0; i < base.size(); ++i) tvals.push_back(base(i));
  for (double w : wt) tvals.push_back(w / spec.omega);
  std::sort(tvals.begin(), tvals.end());
  tvals.erase(std::unique(tvals.begin(), tvals.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              tvals.end());
  RealVector times(Index(tvals.size()));
  for (size_t i = 0; i < tvals.size(); ++i) times(Index(i)) = tvals[i];
  const Index nt = times.size();

  const std::vector<double> grid = cfg.eps.empty()
                                       ? std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9}
                                       : cfg.eps;
  io::Table curves;
  curves.add("t", times);
  RealMatrix dist_full(nt, Index(grid.size())), dist_proj(nt, Index(grid.size()));
  for (size_t k = 0; k < grid.size(); ++k) {
    const double e = grid[k];
    const auto lve = fam.evaluate(e);
    const auto traj = dynamics::propagate(lve.mat, rho0, times);
    const Matrix rede = pipe.maps.r.mat * lve.mat * pipe.maps.j.mat;
    const auto traj_red = dynamics::propagate(rede, act(pipe.maps.r, rho0), times);
    RealVector df(nt), bf(nt), dp(nt), bp(nt);
    for (Index i = 0; i < nt; ++i) {
      const Matrix inj = act(pipe.maps.j, traj_red.states[size_t(i)]);
      df(i) = linalg::hs_norm(traj.states[size_t(i)] - inj);
      dp(i) = linalg::hs_norm(act(pipe.projector, traj.states[size_t(i)]) - inj);
      const double lead = std::abs(e) * times(i) * l1n;
      bf(i) = lead;
      bp(i) = 0.5 * lead * lead;
      dist_full(i, Index(k)) = df(i);
      dist_proj(i, Index(k)) = dp(i);
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", e);
    curves.add(std::string("dist_full_eps") + buf, df);
    curves.add(std::string("bound_full_eps") + buf, bf);
    curves.add(std::string("dist_proj_eps") + buf, dp);
    curves.add(std::string("bound_proj_eps") + buf, bp);
  }
  write_artifact(cfg, "fig3_curves.csv", io::to_csv(curves));

  io::Table inset;
  RealVector eps_col(Index(grid.size()));
  for (size_t k = 0; k < grid.size(); ++k) eps_col(Index(k)) = grid[k];
  inset.add("eps", eps_col);
  for (double w : wt) {
    Index row = 0;
    for (Index i = 0; i < nt; ++i)
      if (std::abs(times(i) - w / spec.omega) < 1e-10) row = i;
    RealVector cf(Index(grid.size())), cp(Index(grid.size()));
    for (size_t k = 0; k < grid.size(); ++k) {
      cf(Index(k)) = dist_full(row, Index(k));
      cp(Index(k)) = dist_proj(row, Index(k));
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", w);
    inset.add(std::string("dist_full_wt") + buf, cf);
    inset.add(std::string("dist_proj_wt") + buf, cp);
  }
  write_artifact(cfg, "fig3_inset.csv", io::to_csv(inset));
  write_meta(cfg, 3,
             json{{"model", "xxz+disorder"},
                  {"eps", grid},
                  {"omega_t_samples", wt},
                  {"first_order_norm", l1n},
                  {"norm", "hilbert_schmidt"}},
             {"dist_full_eps*", "dist_proj_eps*", "bound_full_eps*", "bound_proj_eps*",
              "dist_full_wt*", "dist_proj_wt*"});
  return 0;
}

// populations and trace-distance convergence of the dissipative chain per eps
int figdata_4(const RunConfig& cfg) {
  const auto chain =
      models::build_dephasing(models::dephasing_random(cfg.n, 1.0, std::uint64_t(cfg.seed)));
  Rng rng(std::uint64_t(cfg.seed));
  const Matrix rho0 = rng.density(chain.model0.space.dim);
  const RealVector times = dynamics::time_grid(cfg.tmax > 0 ? cfg.tmax : 8.0, cfg.points);
  const Index nt = times.size();

  const std::vector<double> grid =
      cfg.eps.empty() ? std::vector<double>{0.1, 0.5, 1.0} : cfg.eps;
  io::Table pops, errs;
  pops.add("t", times);
  errs.add("t", times);
  json gaps = json::object();
  for (double e : grid) {
    const auto lve = chain.family.evaluate(e);
    const auto traj = dynamics::propagate(lve.mat, rho0, times);
    const Matrix rede = chain.classical.r.mat * lve.mat * chain.classical.j.mat;
    const auto traj_red =
        dynamics::propagate(rede, act(chain.classical.r, rho0), times);

    RealVector pf(nt), pr(nt), td(nt);
    for (Index i = 0; i < nt; ++i) {
      pf(i) = traj.states[size_t(i)](0, 0).real();
      pr(i) = traj_red.states[size_t(i)](0, 0).real();
      td(i) = linalg::trace_norm(traj.states[size_t(i)] -
                                 act(chain.classical.j, traj_red.states[size_t(i)]));
    }
    const double gap = gap_of(lve.mat);
    double gamma = 0.0;
    for (Index i = 0; i < nt; ++i)
      if (td(i) > 1e-12) gamma = std::max(gamma, td(i) * std::exp(gap * times(i)));
    RealVector envelope(nt);
    for (Index i = 0; i < nt; ++i) envelope(i) = gamma * std::exp(-gap * times(i));

    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", e);
    pops.add(std::string("pop_full_eps") + buf, pf);
    pops.add(std::string("pop_reduced_eps") + buf, pr);
    errs.add(std::string("tracedist_eps") + buf, td);
    errs.add(std::string("envelope_eps") + buf, envelope);
    gaps[std::string("eps_") + buf] = gap;
  }
  write_artifact(cfg, "fig4_populations.csv", io::to_csv(pops));
  write_artifact(cfg, "fig4_error.csv", io::to_csv(errs));
  write_meta(cfg, 4,
             json{{"model", "dephasing"}, {"eps", grid}, {"spectral_gaps", gaps}},
             {"pop_full_eps*", "pop_reduced_eps*", "tracedist_eps*", "envelope_eps*"});
  return 0;
}

int cmd_figdata(const RunConfig& cfg) {
  if (cfg.n > 6) throw UsageError("figure data is desk scale; N must stay at or below 6");
  switch (cfg.figure) {
    case 1:
      return figdata_1(cfg);
    case 2:
      return figdata_2(cfg);
    case 3:
      return figdata_3(cfg);
    case 4:
      return figdata_4(cfg);
    default:
      throw UsageError("figure must be 1, 2, 3, or 4");
  }
}

int cmd_verify(const RunConfig& cfg) {
  std::vector<verify::SuiteReport> reports;
  if (cfg.suite == "all") {
    reports = verify::run_all(cfg.n, cfg.seed);
  } else {
    const auto names = verify::suite_names();
    if (std::find(names.begin(), names.end(), cfg.suite) == names.end()) {
      std::string all;
      for (const auto& s : names) all += " " + s;
      throw UsageError("unknown suite '" + cfg.suite + "' (all" + all + ")");
    }
    reports.push_back(verify::run_suite(cfg.suite, cfg.n, cfg.seed));
  }
  std::fputs(verify::summary_text(reports).c_str(), stdout);
  for (const auto& r : reports)
    if (!r.ok()) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // a config file provides defaults; explicit flags override them
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        apply_config_file(cfg, argv[i + 1]);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
      }
    }
  }

  CLI::App app{"lindred: certified model reduction of Lindblad dynamics"};
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration (defaults, flags override)");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "zoo name (xxz, xxz+disorder, dephasing) or JSON spec path");
    sub->add_option("--N", cfg.n, "chain length")->check(CLI::Range(2, 12))
        ->each([&](const std::string&) { cfg.n_given = true; });
    sub->add_option("--eps", cfg.eps, "perturbation strengths");
    sub->add_option("--gauge", cfg.gauge, "first-order gauge: zero, random, commutant");
    sub->add_option("--seed", cfg.seed, "seed for every random draw");
    sub->add_option("--tol", cfg.tol, "peripheral classification cutoff (negative: automatic)");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--threads", cfg.threads, "worker threads (fallback: LINDRED_THREADS)");
    sub->add_option("--tmax", cfg.tmax, "time horizon (negative: per-command default)");
    sub->add_option("--points", cfg.points, "time samples")->check(CLI::Range(2, 100000));
    sub->add_option("--config", config_path, "JSON run configuration")->group("");
  };

  auto* sub_model = app.add_subcommand("model", "inspect a model and export its spectrum");
  add_common(sub_model);
  std::string mode = "center";
  auto* sub_reduce = app.add_subcommand("reduce", "certified reduction pipeline");
  add_common(sub_reduce);
  sub_reduce->add_option("--mode", mode, "center, perturbative, or ae");
  auto* sub_ae = app.add_subcommand("ae", "first-order adiabatic elimination artifacts");
  add_common(sub_ae);
  auto* sub_sim = app.add_subcommand("simulate", "trajectory export for a model");
  add_common(sub_sim);
  auto* sub_fig = app.add_subcommand("figdata", "export the data series behind one figure");
  add_common(sub_fig);
  sub_fig->add_option("figure", cfg.figure, "figure number")->check(CLI::Range(1, 4));
  auto* sub_verify = app.add_subcommand("verify", "run invariant suites");
  add_common(sub_verify);
  sub_verify->add_option("--suite", cfg.suite, "all or one module suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n\n%s", e.what(), app.help().c_str());
    return 2;
  }

  if (cfg.threads > 0) kernels::set_threads(cfg.threads);
  if (!cfg.command.empty() && !app.get_subcommands().empty() &&
      app.get_subcommands().front()->get_name() != cfg.command) {
    std::fprintf(stderr, "error: config command '%s' conflicts with subcommand '%s'\n",
                 cfg.command.c_str(), app.get_subcommands().front()->get_name().c_str());
    return 2;
  }

  std::string command = cfg.command;
  if (!app.get_subcommands().empty()) command = app.get_subcommands().front()->get_name();
  if (command.empty()) {
    std::fprintf(stderr, "%s", app.help().c_str());
    return 2;
  }
  // figure-data defaults to the published chain length
  if (command == "figdata" && !cfg.n_given) cfg.n = 5;

  try {
    if (command == "model") return cmd_model(cfg);
    if (command == "reduce") return cmd_reduce(cfg, mode);
    if (command == "ae") return cmd_reduce(cfg, "ae");
    if (command == "simulate") return cmd_simulate(cfg);
    if (command == "figdata") return cmd_figdata(cfg);
    if (command == "verify") return cmd_verify(cfg);
    std::fprintf(stderr, "error: unknown command '%s'\n\n%s", command.c_str(),
                 app.help().c_str());
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n\n%s", e.what(), app.help().c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
