#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace eolo {

/// Seeded random stream with a fully specified output sequence.
///
/// The engine is std::mt19937_64, whose output is fixed by the C++ standard.
/// The standard distributions are not (their algorithms are
/// implementation-defined), so every derived quantity is computed here:
///   - uniform():  top 53 bits of one engine draw, scaled by 2^-53
///   - below(n):   rejection of draws >= the largest multiple of n, then mod n
///   - shuffle():  Fisher-Yates from the back, swapping i with below(i + 1)
/// Same seed, same sequence on every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// True with probability p. Consumes no draw when p <= 0 or p >= 1.
  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace eolo
