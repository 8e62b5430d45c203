#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "eolo/types.hpp"
#include "eolo/worlds.hpp"

namespace eolo::testing {

/// Records a, b, c; pairs (a,b), (a,c), (b,c), each with p = 0.5.
inline Instance triangle(double p = 0.5) {
  return {{"a", "b", "c"}, {{"a", "b", p}, {"a", "c", p}, {"b", "c", p}}};
}

inline std::string name(std::size_t i) { return std::string(1, static_cast<char>('a' + i)); }

inline Instance complete(std::size_t n, double p = 0.5) {
  Instance inst;
  for (std::size_t i = 0; i < n; ++i) inst.records.push_back(name(i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) inst.pairs.push_back({name(i), name(j), p});
  }
  return inst;
}

inline World all_labels(const Instance& inst, Label l) {
  return World{std::vector<Label>(inst.pair_count(), l)};
}

/// Random instance over up to `max_records` records with at most
/// `max_pairs` pairs drawn from the complete graph. Probabilities are
/// mostly interior, with occasional 0 or 1.
inline Instance random_instance(std::mt19937_64& gen, std::size_t max_records, std::size_t max_pairs,
                                bool allow_hard = false) {
  std::uniform_int_distribution<std::size_t> n_dist(2, max_records);
  const std::size_t n = n_dist(gen);
  Instance inst;
  for (std::size_t i = 0; i < n; ++i) inst.records.push_back(name(i));
  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
  }
  std::shuffle(all.begin(), all.end(), gen);
  std::uniform_int_distribution<std::size_t> m_dist(1, std::min(max_pairs, all.size()));
  all.resize(m_dist(gen));
  std::uniform_real_distribution<double> p_dist(0.02, 0.98);
  std::uniform_int_distribution<int> hard(0, 9);
  for (auto [i, j] : all) {
    double p = p_dist(gen);
    if (allow_hard) {
      const int h = hard(gen);
      if (h == 0) p = 0.0;
      if (h == 1) p = 1.0;
    }
    inst.pairs.push_back({name(i), name(j), p});
  }
  return inst;
}

inline std::vector<std::size_t> iota(std::size_t m) {
  std::vector<std::size_t> seq(m);
  for (std::size_t i = 0; i < m; ++i) seq[i] = i;
  return seq;
}

}  // namespace eolo::testing
