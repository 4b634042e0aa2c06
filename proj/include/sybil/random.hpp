#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace sybil {

/// Master seed from which per-trial streams are derived.
///
/// Every randomized routine in the library takes a Seed by value and derives
/// an independent stream per trial (or restart) index, so results depend only
/// on (parameters, seed) and never on execution order.
struct Seed {
  std::uint64_t master = 42;

  Seed derive(std::uint64_t stream) const noexcept;

  friend bool operator==(const Seed&, const Seed&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Thin wrapper over mt19937_64 with distribution code written out by hand,
/// so generated values are bit-identical across standard library vendors.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(splitmix64(seed.master)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform01();
  double uniform(double lo, double hi);
  double log_uniform(double lo, double hi);
  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform integer in [0, n). Requires n > 0.
  std::size_t index(std::size_t n);
  /// Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + index(hi - lo + 1); }

  /// Flat Dirichlet sample: n non-negative weights summing to 1.
  std::vector<double> simplex(std::size_t n);

  /// Uniformly random permutation of {0, ..., n-1}.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace sybil
