// rng.hpp — Seeded random number generation with explicit distributions so
// that identical seeds give identical streams on every platform.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "lindred/types.hpp"

namespace lindred {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal via Box-Muller (avoids library-defined distributions).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  Complex cnormal() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }

  Matrix ginibre(Index rows, Index cols);
  Matrix hermitian(Index n);         // GUE-style, entries O(1)
  Matrix unitary(Index n);           // Haar-ish via QR with phase fix
  Matrix density(Index n, double min_eig = 0.0);  // full-rank if min_eig > 0
  Vector state(Index n);             // Haar-ish unit vector

 private:
  std::mt19937_64 gen_;
};

}  // namespace lindred
