#include "secrelay/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace secrelay {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;

// Series representation, valid and fast for x < a + 1.
double gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_cont_frac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gammainc_lower(double a, double x) {
  if (a <= 0.0) throw std::invalid_argument("gammainc_lower: a must be positive");
  if (x < 0.0) throw std::invalid_argument("gammainc_lower: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_cont_frac(a, x);
}

double gammaincinv(double p, double a) {
  if (a <= 0.0) throw std::invalid_argument("gammaincinv: a must be positive");
  if (p < 0.0 || p >= 1.0) throw std::invalid_argument("gammaincinv: p must lie in [0, 1)");
  if (p == 0.0) return 0.0;

  // Bracket the root; P(a, .) is strictly increasing from 0 to 1.
  double lo = 0.0;
  double hi = std::max(a, 1.0);
  while (gammainc_lower(a, hi) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) break;
  }

  double x = 0.5 * (lo + hi);
  const double lgam = std::lgamma(a);
  for (int it = 0; it < 200; ++it) {
    const double f = gammainc_lower(a, x) - p;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    if (std::abs(f) <= 1e-13) break;
    // Newton step with the exact density; fall back to bisection when the
    // step leaves the bracket or the derivative underflows.
    const double dens = std::exp(-x + (a - 1.0) * std::log(x) - lgam);
    double next = x;
    if (dens > 0.0 && std::isfinite(dens)) next = x - f / dens;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return x;
}

}  // namespace secrelay
