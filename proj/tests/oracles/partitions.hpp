#pragma once

// Set partitions by restricted growth strings: position i holds a block
// number at most one larger than every earlier block number.

#include <cstddef>
#include <functional>
#include <vector>

#include "eolo/types.hpp"

namespace eolo::oracle {

inline void for_each_partition(std::size_t n,
                               const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (n == 0) {
    visit({});
    return;
  }
  std::vector<std::size_t> rgs(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t max_block) {
    if (i == n) {
      visit(rgs);
      return;
    }
    for (std::size_t b = 0; b <= max_block + 1; ++b) {
      rgs[i] = b;
      rec(i + 1, b > max_block ? b : max_block);
    }
  };
  rgs[0] = 0;
  rec(1, 0);
}

inline std::size_t count_partitions(std::size_t n) {
  std::size_t count = 0;
  for_each_partition(n, [&](const auto&) { ++count; });
  return count;
}

/// Labels induced on the instance's pairs by a block assignment of its
/// records (same block means Match).
inline std::vector<Label> project(const Instance& inst, const std::vector<std::size_t>& block) {
  std::vector<Label> labels;
  for (const auto& pr : inst.pairs) {
    std::size_t ia = 0;
    std::size_t ib = 0;
    for (std::size_t i = 0; i < inst.records.size(); ++i) {
      if (inst.records[i] == pr.a) ia = i;
      if (inst.records[i] == pr.b) ib = i;
    }
    labels.push_back(block[ia] == block[ib] ? Label::Match : Label::NonMatch);
  }
  return labels;
}

}  // namespace eolo::oracle
