#include "eolo/random.hpp"

#include <limits>

#include "eolo/error.hpp"

namespace eolo {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("Rng::below needs a positive bound");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // 2^64 mod bound; the top `excess` values would bias the modulus.
  const std::uint64_t excess = (kMax % bound + 1) % bound;
  const std::uint64_t max_ok = kMax - excess;
  std::uint64_t x = engine_();
  while (x > max_ok) x = engine_();
  return x % bound;
}

}  // namespace eolo
