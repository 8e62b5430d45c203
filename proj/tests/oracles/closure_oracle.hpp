#pragma once

// Brute-force reference for transitive deduction. Shares nothing with
// ClusterGraph: labels are closed under
//   a = b and b = c  =>  a = c
//   a = b and b != c =>  a != c
// by iterating over all triples until nothing changes.

#include <cstddef>
#include <span>
#include <vector>

#include "eolo/types.hpp"

namespace eolo::oracle {

struct Fact {
  std::size_t a;
  std::size_t b;
  Label label;
};

enum class Known { Match, NonMatch, Unknown };

class Closure {
 public:
  Closure(std::size_t n, std::span<const Fact> facts) : n_(n), eq_(n * n, 0), neq_(n * n, 0) {
    for (std::size_t i = 0; i < n; ++i) set(eq_, i, i);
    for (const auto& f : facts) set(f.label == Label::Match ? eq_ : neq_, f.a, f.b);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          if (!at(eq_, a, b)) continue;
          for (std::size_t c = 0; c < n; ++c) {
            if (at(eq_, b, c) && !at(eq_, a, c)) {
              set(eq_, a, c);
              changed = true;
            }
            if (at(neq_, b, c) && !at(neq_, a, c)) {
              set(neq_, a, c);
              changed = true;
            }
          }
        }
      }
    }
  }

  bool contradiction() const {
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = 0; b < n_; ++b) {
        if (at(eq_, a, b) && at(neq_, a, b)) return true;
      }
    }
    return false;
  }

  Known known(std::size_t a, std::size_t b) const {
    if (at(eq_, a, b)) return Known::Match;
    if (at(neq_, a, b)) return Known::NonMatch;
    return Known::Unknown;
  }

 private:
  bool at(const std::vector<char>& m, std::size_t a, std::size_t b) const { return m[a * n_ + b] != 0; }
  void set(std::vector<char>& m, std::size_t a, std::size_t b) {
    m[a * n_ + b] = 1;
    m[b * n_ + a] = 1;
  }

  std::size_t n_;
  std::vector<char> eq_;
  std::vector<char> neq_;
};

/// Pair endpoints as record positions, looked up by linear scan.
inline std::vector<std::pair<std::size_t, std::size_t>> endpoints(const Instance& inst) {
  auto pos = [&](const RecordId& id) {
    for (std::size_t i = 0; i < inst.records.size(); ++i) {
      if (inst.records[i] == id) return i;
    }
    return inst.records.size();
  };
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& pr : inst.pairs) out.emplace_back(pos(pr.a), pos(pr.b));
  return out;
}

inline bool consistent(const Instance& inst, const std::vector<Label>& labels) {
  const auto ends = endpoints(inst);
  std::vector<Fact> facts;
  for (std::size_t i = 0; i < labels.size(); ++i) facts.push_back({ends[i].first, ends[i].second, labels[i]});
  return !Closure(inst.records.size(), facts).contradiction();
}

/// Every consistent assignment found by filtering all 2^m label vectors.
/// Bit i of the mask set means pair i is Match.
inline std::vector<std::vector<Label>> filter_assignments(const Instance& inst) {
  const std::size_t m = inst.pairs.size();
  std::vector<std::vector<Label>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    std::vector<Label> labels(m);
    for (std::size_t i = 0; i < m; ++i) labels[i] = ((mask >> i) & 1u) ? Label::Match : Label::NonMatch;
    if (consistent(inst, labels)) out.push_back(std::move(labels));
  }
  return out;
}

/// Asked count of replaying `order` on `labels`, deducing with the closure.
inline std::size_t replay_asked(const Instance& inst, std::span<const std::size_t> order,
                                const std::vector<Label>& labels) {
  const auto ends = endpoints(inst);
  std::vector<Fact> known;
  std::size_t asked = 0;
  for (auto pair : order) {
    const Closure c(inst.records.size(), known);
    if (c.known(ends[pair].first, ends[pair].second) == Known::Unknown) {
      ++asked;
      known.push_back({ends[pair].first, ends[pair].second, labels[pair]});
    }
  }
  return asked;
}

/// Expected asked count by brute force: filter consistent worlds, weight
/// each by its product probability, replay each with the closure.
inline double expected_asked(const Instance& inst, std::span<const std::size_t> order) {
  double total = 0.0;
  double mass = 0.0;
  for (const auto& labels : filter_assignments(inst)) {
    double w = 1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      w *= labels[i] == Label::Match ? inst.pairs[i].p : 1.0 - inst.pairs[i].p;
    }
    total += w;
    mass += w * static_cast<double>(replay_asked(inst, order, labels));
  }
  return mass / total;
}

}  // namespace eolo::oracle
