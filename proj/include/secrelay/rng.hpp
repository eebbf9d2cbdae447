#pragma once

#include <cstdint>
#include <random>

#include "secrelay/cmatrix.hpp"

namespace secrelay {

// Deterministic RNG wrapper. Gaussian variates are produced by an explicit
// Box-Muller transform on top of mt19937_64 so that streams are identical
// across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Derives an independent stream for worker `index` from a master seed.
  static Rng for_stream(std::uint64_t master_seed, std::uint64_t index);

  double uniform();      // [0, 1)
  double gaussian();     // N(0, 1)
  cplx complex_gaussian(double variance);  // CN(0, variance)

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Matrix with i.i.d. CN(0, variance) entries; real and imaginary parts are
// independent N(0, variance/2).
CMatrix sample_complex_gaussian(Rng& rng, int rows, int cols, double variance);
CVec sample_complex_gaussian_vec(Rng& rng, int n, double variance);

}  // namespace secrelay
