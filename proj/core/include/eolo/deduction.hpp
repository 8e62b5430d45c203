#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "eolo/types.hpp"

namespace eolo {

enum class Verdict : std::uint8_t { Match, NonMatch, Unknown };

std::string_view to_string(Verdict v) noexcept;

enum class AssertResult : std::uint8_t { Accepted, Contradiction };

/// Asserted pair labels plus everything they imply under transitivity.
///
/// Match facts are kept as a union-find forest (union by size, path
/// halving). NonMatch facts are edges between cluster roots, stored as a
/// sorted vector of packed root pairs and re-rooted whenever two clusters
/// merge. Two records are
///   - Match    iff they share a root,
///   - NonMatch iff a nonmatch edge joins their roots,
///   - Unknown  otherwise (a != b and b != c implies nothing about a, c).
///
/// A contradicting assertion is rejected and leaves the graph untouched.
/// There is no retraction; copy the graph (cheap, the record index is
/// shared) or rebuild from a trace.
class ClusterGraph {
 public:
  using Node = std::uint32_t;

  /// Throws InvalidArgument if `records` is empty or has duplicates.
  explicit ClusterGraph(std::vector<RecordId> records);
  explicit ClusterGraph(std::shared_ptr<const RecordIndex> index);

  /// Unknown ids throw InvalidArgument. Asserting NonMatch of a record with
  /// itself is a Contradiction; Match of a record with itself is a no-op.
  AssertResult assert_label(std::string_view a, std::string_view b, Label label);
  AssertResult assert_label(Node a, Node b, Label label);

  Verdict deduce(std::string_view a, std::string_view b) const;
  Verdict deduce(Node a, Node b) const {
    const Node ra = find(a);
    const Node rb = find(b);
    if (ra == rb) return Verdict::Match;
    return has_edge(ra, rb) ? Verdict::NonMatch : Verdict::Unknown;
  }

  /// Equivalence classes; members sorted by id, classes by first member.
  std::vector<std::vector<RecordId>> clusters() const;

  /// Nonmatch edges between clusters, each cluster named by its smallest
  /// member id. Sorted.
  std::vector<PairKey> nonmatch_edges() const;

  /// Number of assertions that added information. Re-asserting a fact that
  /// was already derivable is Accepted but not counted.
  std::size_t assertion_count() const noexcept { return assertions_; }
  std::size_t cluster_count() const noexcept { return cluster_count_; }
  std::size_t record_count() const noexcept { return parent_.size(); }
  const RecordIndex& records() const noexcept { return *index_; }
  const std::shared_ptr<const RecordIndex>& shared_records() const noexcept { return index_; }

 private:
  Node find(Node x) const {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  static std::uint64_t edge_key(Node a, Node b) noexcept {
    if (b < a) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }
  bool has_edge(Node ra, Node rb) const;
  void merge(Node ra, Node rb);

  std::shared_ptr<const RecordIndex> index_;
  // Path halving in find() rewrites parents without changing any answer.
  mutable std::vector<Node> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint64_t> nonmatch_;
  std::size_t assertions_ = 0;
  std::size_t cluster_count_ = 0;
};

}  // namespace eolo
