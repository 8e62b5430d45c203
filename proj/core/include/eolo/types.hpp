#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eolo/error.hpp"

namespace eolo {

/// Opaque external record identifier. Compared by exact string equality.
using RecordId = std::string;

enum class Label : std::uint8_t { Match, NonMatch };

constexpr Label opposite(Label l) noexcept {
  return l == Label::Match ? Label::NonMatch : Label::Match;
}

/// "match" / "nonmatch"
std::string_view to_string(Label l) noexcept;
std::optional<Label> parse_label(std::string_view text) noexcept;

/// A candidate record pair with its prior match probability. Unordered:
/// (a, b) and (b, a) name the same pair.
struct Pair {
  RecordId a;
  RecordId b;
  double p = 0.5;

  friend bool operator==(const Pair&, const Pair&) = default;
};

struct Instance {
  std::vector<RecordId> records;
  std::vector<Pair> pairs;

  std::size_t pair_count() const noexcept { return pairs.size(); }
  std::size_t record_count() const noexcept { return records.size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Endpoints in lexicographic order.
using PairKey = std::pair<RecordId, RecordId>;

/// Orders the endpoints lexicographically so (a, b) and (b, a) share a key.
/// Throws InvalidArgument when a == b.
PairKey canonical_pair_key(std::string_view a, std::string_view b);

struct Violation {
  enum class Kind {
    EmptyRecordId,
    DuplicateRecord,
    SelfPair,
    UnknownEndpoint,
    DuplicatePair,
    ProbabilityOutOfRange,
  };

  Kind kind;
  std::string field;    // location in the instance, e.g. "pairs[1].p"
  std::string subject;  // record id or canonical "a|b" key; independent of list position
  std::string message;
};

std::string_view to_string(Violation::Kind kind) noexcept;

/// Every invariant violation of `inst`. Empty iff the instance is valid.
std::vector<Violation> validate_instance(const Instance& inst);

/// Thrown by operations that require a valid instance.
class InvalidInstance : public Error {
 public:
  explicit InvalidInstance(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// A labeling order: a permutation of the pair indices 0..m-1.
class Order {
 public:
  Order() = default;

  static Order identity(std::size_t m);
  /// Throws InvalidArgument unless `seq` is a permutation of 0..m-1.
  static Order from_sequence(std::vector<std::size_t> seq, std::size_t m);

  std::span<const std::size_t> sequence() const noexcept { return seq_; }
  std::size_t size() const noexcept { return seq_.size(); }
  std::size_t operator[](std::size_t position) const { return seq_[position]; }
  auto begin() const noexcept { return seq_.begin(); }
  auto end() const noexcept { return seq_.end(); }

  friend bool operator==(const Order&, const Order&) = default;
  friend auto operator<=>(const Order&, const Order&) = default;

 private:
  explicit Order(std::vector<std::size_t> seq) : seq_(std::move(seq)) {}

  std::vector<std::size_t> seq_;
};

bool is_permutation_of_range(std::span<const std::size_t> seq, std::size_t m);

enum class OutcomeKind : std::uint8_t { Asked, Deduced };

std::string_view to_string(OutcomeKind kind) noexcept;

struct Outcome {
  OutcomeKind kind;
  Label label;

  static constexpr Outcome asked(Label l) noexcept { return {OutcomeKind::Asked, l}; }
  static constexpr Outcome deduced(Label l) noexcept { return {OutcomeKind::Deduced, l}; }

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Outcome of one processed pair, identified by its index in the instance.
struct TraceEntry {
  std::size_t pair;
  Outcome outcome;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Dense numbering of record ids.
class RecordIndex {
 public:
  /// Throws InvalidArgument on duplicate ids.
  explicit RecordIndex(std::vector<RecordId> ids);

  std::size_t size() const noexcept { return ids_.size(); }
  const RecordId& id(std::uint32_t node) const { return ids_.at(node); }
  std::span<const RecordId> ids() const noexcept { return ids_; }
  std::optional<std::uint32_t> find(std::string_view id) const;
  /// Throws InvalidArgument for unknown ids.
  std::uint32_t at(std::string_view id) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<RecordId> ids_;
  std::unordered_map<RecordId, std::uint32_t, Hash, std::equal_to<>> lookup_;
};

/// An instance with endpoints resolved to dense record numbers. Built once
/// and shared by the hot loops of the cost and strategy modules.
struct IndexedInstance {
  std::shared_ptr<const RecordIndex> records;
  std::vector<std::array<std::uint32_t, 2>> endpoints;
  std::vector<double> p;

  /// Throws InvalidInstance if `inst` fails validation.
  static IndexedInstance build(const Instance& inst);

  std::size_t pair_count() const noexcept { return endpoints.size(); }
};

}  // namespace eolo
