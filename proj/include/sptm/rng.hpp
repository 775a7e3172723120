#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sptm {

// Deterministic sampling built directly on mt19937_64. The transforms
// (uniform, normal, gamma, ...) are hand-rolled because the standard
// library distributions are implementation-defined; this keeps
// seed -> sample streams bit-stable across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1p-53; }

  // (0, 1)
  double uniform_pos() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return u;
  }

  // integer in [0, n), n >= 1
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Marsaglia-Tsang; boosted for shape < 1 via Gamma(a) = Gamma(a+1) * U^(1/a)
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Dirichlet over the given concentration vector; entries with zero
  // concentration get probability zero.
  std::vector<double> dirichlet(std::span<const double> alpha) {
    std::vector<double> out(alpha.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] > 0.0) {
        out[i] = gamma(alpha[i]);
        total += out[i];
      }
    }
    if (total <= 0.0) {
      // pathological underflow; fall back to uniform over the support
      std::size_t support = 0;
      for (double a : alpha)
        if (a > 0.0) ++support;
      for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i] > 0.0) out[i] = 1.0 / static_cast<double>(support);
      return out;
    }
    for (double& v : out) v /= total;
    return out;
  }

  // draw an index proportional to non-negative weights (need not sum to 1)
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return weights.size() - 1;
  }

  // splitmix64 finalizer; used to derive independent substreams
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t substream(std::uint64_t seed, std::uint64_t idx) {
    return mix(seed + idx * 0x9E3779B97F4A7C15ULL);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sptm
