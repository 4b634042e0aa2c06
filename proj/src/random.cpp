#include "sybil/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sybil {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Seed Seed::derive(std::uint64_t stream) const noexcept {
  return Seed{splitmix64(master ^ splitmix64(stream ^ 0xD1B54A32D192ED03ULL))};
}

double Rng::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

std::size_t Rng::index(std::size_t n) {
  const auto bound = static_cast<std::uint64_t>(n);
  // Rejection removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = next();
  while (draw >= limit) draw = next();
  return static_cast<std::size_t>(draw % bound);
}

std::vector<double> Rng::simplex(std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& v : w) {
    // Exp(1) via inversion; 1 - u lies in (0, 1].
    v = -std::log1p(-uniform01());
    sum += v;
  }
  if (sum <= 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
    return w;
  }
  for (auto& v : w) v /= sum;
  return w;
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[index(i)]);
  return p;
}

}  // namespace sybil
