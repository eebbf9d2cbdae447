#include "secrelay/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace secrelay {

namespace {
// splitmix64, used to decorrelate per-worker seeds derived from one master.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

Rng Rng::for_stream(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t state = master_seed ^ (0xa0761d6478bd642fULL * (index + 1));
  const std::uint64_t derived = splitmix64(state);
  return Rng(derived);
}

double Rng::uniform() {
  // 53-bit mantissa, uniform on [0, 1).
  return (engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

cplx Rng::complex_gaussian(double variance) {
  if (variance <= 0.0) throw std::invalid_argument("complex_gaussian: variance must be positive");
  const double s = std::sqrt(variance / 2.0);
  return {s * gaussian(), s * gaussian()};
}

CMatrix sample_complex_gaussian(Rng& rng, int rows, int cols, double variance) {
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_gaussian(variance);
  return m;
}

CVec sample_complex_gaussian_vec(Rng& rng, int n, double variance) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.complex_gaussian(variance);
  return v;
}

}  // namespace secrelay
