#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "eolo/deduction.hpp"
#include "eolo/random.hpp"
#include "eolo/types.hpp"

namespace eolo {

/// Largest pair count for which worlds are enumerated exhaustively.
inline constexpr std::size_t kDefaultWorldCap = 20;

/// One label per pair of an instance, indexed like Instance::pairs.
struct World {
  std::vector<Label> labels;

  friend bool operator==(const World&, const World&) = default;
};

/// Consistent worlds with their renormalized probabilities.
struct WorldDistribution {
  std::vector<World> worlds;
  std::vector<double> probs;
};

/// True iff feeding every label of `w` into a fresh ClusterGraph never
/// contradicts. Throws InvalidArgument if `w` is not total over the pairs.
bool is_consistent(const Instance& inst, const World& w);
bool is_consistent(const IndexedInstance& inst, const World& w);

/// All consistent label assignments, by depth-first search over pairs in
/// index order with the Match branch first. A branch whose label is already
/// implied by the earlier pairs is the only one taken.
/// Throws CapExceeded when the instance has more than `max_pairs` pairs.
std::vector<World> enumerate_worlds(const Instance& inst,
                                    std::size_t max_pairs = kDefaultWorldCap);

/// Unnormalized weight: product over pairs of p (Match) or 1 - p (NonMatch).
double world_weight(const Instance& inst, const World& w);
double world_weight(const IndexedInstance& inst, const World& w);

/// Consistent worlds weighted by world_weight / (sum of weights). Throws
/// InconsistentError when every consistent world has weight zero.
WorldDistribution world_distribution(const Instance& inst,
                                     std::size_t max_pairs = kDefaultWorldCap);

struct SamplerOptions {
  std::size_t max_attempts = 10'000;  // per sample
};

/// Rejection sampler for world_distribution. Each attempt draws every pair
/// label independently (pairs with p of exactly 0 or 1 consume no draw) and
/// is accepted iff the assignment is consistent.
class WorldSampler {
 public:
  explicit WorldSampler(const Instance& inst, SamplerOptions options = {});
  explicit WorldSampler(IndexedInstance inst, SamplerOptions options = {});

  /// Throws SamplingError after max_attempts rejections in a row.
  World sample(Rng& rng);

  std::uint64_t attempts() const noexcept { return attempts_; }
  std::uint64_t accepted() const noexcept { return accepted_; }
  double acceptance_rate() const noexcept {
    return attempts_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(attempts_);
  }

 private:
  IndexedInstance inst_;
  SamplerOptions options_;
  std::uint64_t attempts_ = 0;
  std::uint64_t accepted_ = 0;
};

World sample_world(const Instance& inst, Rng& rng, SamplerOptions options = {});

}  // namespace eolo
