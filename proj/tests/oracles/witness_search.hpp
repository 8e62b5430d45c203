#pragma once

// Seeded search for an instance on which the probability-descending order
// is strictly worse than the brute-force optimum.

#include <cstdint>
#include <optional>

#include "eolo/cost.hpp"
#include "eolo/ingestion.hpp"
#include "eolo/strategies.hpp"

namespace eolo::oracle {

struct Witness {
  std::uint64_t seed;
  Instance instance;
  double descending_cost;
  double optimal_cost;
  Order optimal_order;
};

inline GeneratorConfig witness_config(std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.n_records = 4;  // complete graph: 6 pairs
  cfg.new_cluster_probability = 0.5;
  cfg.p_match_mean = 0.6;
  cfg.p_nonmatch_mean = 0.4;
  cfg.jitter = 0.4;
  cfg.seed = seed;
  return cfg;
}

inline std::optional<Witness> find_descending_witness(std::uint64_t first_seed, std::uint64_t tries,
                                                      double min_gap = 1e-6) {
  for (std::uint64_t seed = first_seed; seed < first_seed + tries; ++seed) {
    const auto inst = generate_instance(witness_config(seed)).instance;
    const auto desc = make_order(inst, StrategySpec::descending());
    const double desc_cost = exact_expected_cost(inst, desc).expected_asked;
    const auto best = brute_force_order(inst, Objective::Minimize);
    if (desc_cost - best.expected_asked > min_gap) {
      return Witness{seed, inst, desc_cost, best.expected_asked, best.order};
    }
  }
  return std::nullopt;
}

}  // namespace eolo::oracle
