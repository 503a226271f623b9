// bench_kernels.cpp — Times the threaded kernels against the serial reference
// implementations and reports the largest elementwise deviation (which must be
// zero: both paths evaluate identical expressions in the same order).
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "lindred/kernels.hpp"
#include "lindred/operator_core.hpp"
#include "lindred/rng.hpp"
#include "lindred/types.hpp"

namespace {

using namespace lindred;
using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock_type::now();
    f();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, double max_dev) {
  std::printf("%-18s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   max|diff| %g\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms, max_dev);
}

}  // namespace

int main(int argc, char** argv) {
  int n = 5;      // chain length; superoperators have dimension 4^n
  int reps = 3;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--N") n = std::atoi(argv[i + 1]);
    else if (flag == "--reps") reps = std::atoi(argv[i + 1]);
    else if (flag == "--threads") kernels::set_threads(std::atoi(argv[i + 1]));
  }
  const Index d = Index(1) << n;
  std::printf("kernel benchmark: N=%d (dim %lld, superoperator %lld), %d threads, best of %d\n",
              n, static_cast<long long>(d), static_cast<long long>(d * d),
              kernels::threads(), reps);

  Rng rng(7);
  const Matrix a = rng.ginibre(d, d);
  const Matrix b = rng.ginibre(d, d);
  const Matrix h = rng.hermitian(d);
  const std::vector<Matrix> jumps = {0.5 * rng.ginibre(d, d), 0.3 * rng.ginibre(d, d)};

  Matrix kp, ks;
  {
    const double ts = best_of(reps, [&] { ks = kernels::serial::kron(a, b); });
    const double tp = best_of(reps, [&] { kp = kernels::kron(a, b); });
    report("kron", ts, tp, (kp - ks).cwiseAbs().maxCoeff());
  }

  Matrix lp, ls;
  {
    const double ts = best_of(reps, [&] { ls = kernels::serial::liouvillian(h, jumps); });
    const double tp = best_of(reps, [&] { lp = kernels::liouvillian(h, jumps); });
    report("liouvillian", ts, tp, (lp - ls).cwiseAbs().maxCoeff());
  }

  Matrix cp, cs;
  {
    const double ts = best_of(reps, [&] { cs = kernels::serial::choi_reshuffle(lp, d); });
    const double tp = best_of(reps, [&] { cp = kernels::choi_reshuffle(lp, d); });
    report("choi_reshuffle", ts, tp, (cp - cs).cwiseAbs().maxCoeff());
  }

  const Index m = d * d;
  const Matrix basis = rng.ginibre(m, m);
  const Vector c0 = rng.ginibre(m, 1).col(0);
  Vector eigs(m);
  for (Index i = 0; i < m; ++i) eigs(i) = Complex(-0.01 * double(i % 97), 0.1 * double(i % 31));
  RealVector times(64);
  for (Index i = 0; i < 64; ++i) times(i) = 0.1 * double(i);
  Matrix pp, ps;
  {
    const double ts =
        best_of(reps, [&] { ps = kernels::serial::phase_propagate(basis, c0, eigs, times); });
    const double tp =
        best_of(reps, [&] { pp = kernels::phase_propagate(basis, c0, eigs, times); });
    report("phase_propagate", ts, tp, (pp - ps).cwiseAbs().maxCoeff());
  }
  return 0;
}
