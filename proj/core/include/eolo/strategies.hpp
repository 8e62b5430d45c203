#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eolo/cost.hpp"
#include "eolo/types.hpp"

namespace eolo {

/// Largest pair count the factorial brute-force oracle accepts by default.
inline constexpr std::size_t kBruteForceMaxPairs = 8;

/// How a labeling order is produced.
///
/// Canonical string forms: `random:SEED`, `desc`, `asc`, `optimal`, `worst`,
/// `explicit:FILE`. The sorted kinds order pairs by match probability
/// (ties by ascending pair index); they are heuristics, not optimal.
struct StrategySpec {
  enum class Kind : std::uint8_t {
    Random,
    SortedDescending,
    SortedAscending,
    Explicit,
    BruteForceOptimal,
    BruteForceWorst,
  };

  Kind kind = Kind::SortedDescending;
  std::uint64_t seed = 0;                  // Random
  std::string source;                      // Explicit: file the order came from
  std::vector<std::size_t> explicit_order; // Explicit: resolved pair indices

  static StrategySpec random(std::uint64_t seed) { return {Kind::Random, seed, {}, {}}; }
  static StrategySpec descending() { return {Kind::SortedDescending, 0, {}, {}}; }
  static StrategySpec ascending() { return {Kind::SortedAscending, 0, {}, {}}; }
  static StrategySpec optimal() { return {Kind::BruteForceOptimal, 0, {}, {}}; }
  static StrategySpec worst() { return {Kind::BruteForceWorst, 0, {}, {}}; }
  static StrategySpec explicit_sequence(std::vector<std::size_t> order, std::string source = {}) {
    return {Kind::Explicit, 0, std::move(source), std::move(order)};
  }

  bool is_brute_force() const noexcept {
    return kind == Kind::BruteForceOptimal || kind == Kind::BruteForceWorst;
  }

  friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

std::string to_string(const StrategySpec& spec);

/// Parses one canonical strategy string. For `explicit:FILE` only the path
/// is recorded; the caller loads the order (see ingestion::load_order).
/// Throws ParseError listing the accepted forms.
StrategySpec parse_strategy(std::string_view text);

/// Comma-separated list of canonical strategy strings.
std::vector<StrategySpec> parse_strategy_list(std::string_view text);

struct StrategyOptions {
  std::size_t brute_force_max_pairs = kBruteForceMaxPairs;
  std::size_t world_cap = kDefaultWorldCap;
};

/// Throws CapExceeded for brute-force kinds above the cap and
/// InvalidArgument for an explicit order that is not a permutation.
Order make_order(const Instance& inst, const StrategySpec& spec, const StrategyOptions& options = {});

enum class Objective : std::uint8_t { Minimize, Maximize };

struct BruteForceResult {
  Order order;
  double expected_asked = 0.0;
  std::size_t orders_examined = 0;
};

/// Exhaustive search over all m! orders by exact expected cost. Orders are
/// visited in lexicographic order and only a strictly better cost (beyond a
/// 1e-12 relative tie band) replaces the incumbent, so ties resolve to the
/// lexicographically smallest order.
BruteForceResult brute_force_order(const Instance& inst, Objective objective,
                                   const StrategyOptions& options = {});

struct EvalMethod {
  CostMethod kind = CostMethod::Exact;
  std::size_t samples = 10'000;  // MonteCarlo
  std::uint64_t seed = 0;        // MonteCarlo
  SamplerOptions sampler{};
};

struct StrategyRow {
  StrategySpec spec;
  Order order;
  CostReport report;
};

/// One row per spec, sorted by expected asked count (stable, so equal
/// costs keep the order in which specs were given).
std::vector<StrategyRow> evaluate_strategies(const Instance& inst,
                                             std::span<const StrategySpec> specs,
                                             const EvalMethod& method,
                                             const StrategyOptions& options = {});

CostReport evaluate_order(const Instance& inst, const Order& order, const EvalMethod& method,
                          const StrategyOptions& options = {});

}  // namespace eolo
