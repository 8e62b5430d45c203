#include "eolo/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace eolo {

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error([&] {
        std::string msg = "invalid input";
        for (const auto& d : diagnostics) {
          msg += "\n  ";
          if (!d.location.empty()) msg += d.location + ": ";
          msg += d.message;
        }
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

std::string_view to_string(Label l) noexcept {
  return l == Label::Match ? "match" : "nonmatch";
}

std::optional<Label> parse_label(std::string_view text) noexcept {
  if (text == "match") return Label::Match;
  if (text == "nonmatch") return Label::NonMatch;
  return std::nullopt;
}

std::string_view to_string(OutcomeKind kind) noexcept {
  return kind == OutcomeKind::Asked ? "asked" : "deduced";
}

PairKey canonical_pair_key(std::string_view a, std::string_view b) {
  if (a == b) {
    throw InvalidArgument("a pair needs two distinct records, got '" + std::string(a) +
                          "' twice");
  }
  if (b < a) std::swap(a, b);
  return {RecordId(a), RecordId(b)};
}

std::string_view to_string(Violation::Kind kind) noexcept {
  switch (kind) {
    case Violation::Kind::EmptyRecordId: return "empty_record_id";
    case Violation::Kind::DuplicateRecord: return "duplicate_record";
    case Violation::Kind::SelfPair: return "self_pair";
    case Violation::Kind::UnknownEndpoint: return "unknown_endpoint";
    case Violation::Kind::DuplicatePair: return "duplicate_pair";
    case Violation::Kind::ProbabilityOutOfRange: return "probability_out_of_range";
  }
  return "unknown";
}

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](Violation::Kind kind, std::string field, std::string subject,
                 std::string message) {
    out.push_back({kind, std::move(field), std::move(subject), std::move(message)});
  };

  std::unordered_set<std::string_view> known;
  for (std::size_t i = 0; i < inst.records.size(); ++i) {
    const auto& id = inst.records[i];
    const std::string field = "records[" + std::to_string(i) + "]";
    if (id.empty()) {
      add(Violation::Kind::EmptyRecordId, field, id, "record id must be nonempty");
      continue;
    }
    if (!known.insert(id).second) {
      add(Violation::Kind::DuplicateRecord, field, id, "duplicate record id '" + id + "'");
    }
  }

  std::set<PairKey> seen;
  for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
    const auto& pr = inst.pairs[i];
    const std::string field = "pairs[" + std::to_string(i) + "]";
    if (!(pr.p >= 0.0 && pr.p <= 1.0)) {
      add(Violation::Kind::ProbabilityOutOfRange, field + ".p", pr.a + "|" + pr.b,
          "probability must lie in [0, 1]");
    }
    for (const auto* end : {&pr.a, &pr.b}) {
      if (!known.contains(*end)) {
        add(Violation::Kind::UnknownEndpoint, field + (end == &pr.a ? ".a" : ".b"), *end,
            "endpoint '" + *end + "' is not a listed record");
      }
    }
    if (pr.a == pr.b) {
      add(Violation::Kind::SelfPair, field, pr.a + "|" + pr.b,
          "pair joins record '" + pr.a + "' to itself");
      continue;
    }
    auto key = canonical_pair_key(pr.a, pr.b);
    std::string subject = key.first + "|" + key.second;
    if (!seen.insert(std::move(key)).second) {
      add(Violation::Kind::DuplicatePair, field, subject,
          "pair (" + pr.a + ", " + pr.b + ") is listed more than once");
    }
  }
  return out;
}

InvalidInstance::InvalidInstance(std::vector<Violation> violations)
    : Error([&] {
        std::string msg = "invalid instance";
        for (const auto& v : violations) msg += "\n  " + v.field + ": " + v.message;
        return msg;
      }()),
      violations_(std::move(violations)) {}

Order Order::identity(std::size_t m) {
  std::vector<std::size_t> seq(m);
  for (std::size_t i = 0; i < m; ++i) seq[i] = i;
  return Order(std::move(seq));
}

Order Order::from_sequence(std::vector<std::size_t> seq, std::size_t m) {
  if (!is_permutation_of_range(seq, m)) {
    throw InvalidArgument("order must be a permutation of the " + std::to_string(m) +
                          " pair indices");
  }
  return Order(std::move(seq));
}

bool is_permutation_of_range(std::span<const std::size_t> seq, std::size_t m) {
  if (seq.size() != m) return false;
  std::vector<bool> hit(m, false);
  for (auto i : seq) {
    if (i >= m || hit[i]) return false;
    hit[i] = true;
  }
  return true;
}

RecordIndex::RecordIndex(std::vector<RecordId> ids) : ids_(std::move(ids)) {
  lookup_.reserve(ids_.size());
  for (std::uint32_t i = 0; i < ids_.size(); ++i) {
    if (!lookup_.emplace(ids_[i], i).second) {
      throw InvalidArgument("duplicate record id '" + ids_[i] + "'");
    }
  }
}

std::optional<std::uint32_t> RecordIndex::find(std::string_view id) const {
  if (auto it = lookup_.find(id); it != lookup_.end()) return it->second;
  return std::nullopt;
}

std::uint32_t RecordIndex::at(std::string_view id) const {
  if (auto node = find(id)) return *node;
  throw InvalidArgument("unknown record id '" + std::string(id) + "'");
}

IndexedInstance IndexedInstance::build(const Instance& inst) {
  if (auto violations = validate_instance(inst); !violations.empty()) {
    throw InvalidInstance(std::move(violations));
  }
  IndexedInstance out;
  auto index = std::make_shared<RecordIndex>(inst.records);
  out.endpoints.reserve(inst.pairs.size());
  out.p.reserve(inst.pairs.size());
  for (const auto& pr : inst.pairs) {
    out.endpoints.push_back({index->at(pr.a), index->at(pr.b)});
    out.p.push_back(pr.p);
  }
  out.records = std::move(index);
  return out;
}

}  // namespace eolo
