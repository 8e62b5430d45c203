#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "eolo/types.hpp"
#include "eolo/worlds.hpp"

namespace eolo {

enum class CostMethod : std::uint8_t { Exact, MonteCarlo, Independence };

/// "exact" / "mc" / "independence"
std::string_view to_string(CostMethod method) noexcept;

/// Expected number of crowdsourced (asked) pairs for one labeling order.
struct CostReport {
  CostMethod method = CostMethod::Exact;
  double expected_asked = 0.0;
  double expected_deduced = 0.0;
  /// Probability that each pair (by instance index) is asked.
  std::vector<double> per_pair_ask_prob;
  // Monte-Carlo only.
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> standard_error;
};

struct WorldReplay {
  std::size_t asked = 0;
  std::vector<TraceEntry> trace;  // in order position
};

/// Replays `order` against the labels of `w`: a pair is asked iff the
/// labels gathered so far do not imply its label. Throws InconsistentError
/// if `w` contradicts itself.
WorldReplay world_cost(const Instance& inst, const Order& order, const World& w);
WorldReplay world_cost(const IndexedInstance& inst, const Order& order, const World& w);

/// Exact expectation over the consistent worlds, weighted by the
/// renormalized product of pair probabilities.
///
/// Walks the order depth-first instead of enumerating worlds and replaying
/// each: a pair whose label is implied is a single forced branch, an
/// unimplied pair branches on both labels. Each leaf is one consistent
/// world. Sums are accumulated per subtree, so additions pair values of
/// similar magnitude the way pairwise summation does.
/// Throws CapExceeded beyond `max_pairs`, InconsistentError when the total
/// weight is zero.
CostReport exact_expected_cost(const Instance& inst, const Order& order,
                               std::size_t max_pairs = kDefaultWorldCap);
CostReport exact_expected_cost(const IndexedInstance& inst, const Order& order,
                               std::size_t max_pairs = kDefaultWorldCap);

/// Mean asked count over `samples` worlds drawn by WorldSampler from a
/// stream seeded with `seed`, with its standard error.
CostReport mc_expected_cost(const Instance& inst, const Order& order, std::size_t samples,
                            std::uint64_t seed, SamplerOptions options = {});

/// The estimator that treats pair labels as independent: expectation over
/// all 2^m label vectors with product weights and no consistency filter.
/// Known to be wrong under transitivity; kept as a diagnostic baseline.
/// An asked label that contradicts the graph would be counted but not
/// asserted (only unimplied pairs are asked, so this never triggers).
CostReport independence_expected_cost(const Instance& inst, const Order& order,
                                      std::size_t max_pairs = kDefaultWorldCap);

}  // namespace eolo
