#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "eolo/deduction.hpp"
#include "eolo/types.hpp"
#include "eolo/worlds.hpp"

namespace eolo {

/// The pair at the cursor cannot be deduced and needs an answer.
struct NeedsLabel {
  std::size_t pair;
};

/// The cursor moved past pairs whose labels followed from earlier answers.
struct AutoAdvanced {
  std::vector<TraceEntry> deduced;
};

struct Done {};

using NextQuestion = std::variant<NeedsLabel, AutoAdvanced, Done>;

enum class AnswerResult : std::uint8_t { Accepted, RejectedContradiction };

/// Thrown for answers that break the session protocol.
class SessionError : public Error {
 public:
  enum class Code { OutOfTurn, UnknownPair };

  SessionError(Code code, std::string what) : Error(std::move(what)), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

std::string_view to_string(SessionError::Code code) noexcept;

/// A labeling session over a fixed order. Pairs are processed one by one;
/// a pair is put to the labeler only when earlier answers do not already
/// determine it. Append-only: there is no undo.
class Session {
 public:
  /// Interactive session (no ground truth).
  Session(Instance inst, Order order);
  /// Batch session; `truth` must be consistent (InconsistentError otherwise).
  Session(Instance inst, Order order, World truth);

  /// Records Deduced outcomes for every implied pair at the cursor. Returns
  /// AutoAdvanced if that moved the cursor, otherwise the pending pair or
  /// Done. Never consumes the pending question, so repeated calls agree.
  NextQuestion next_question();

  /// Skips implied pairs, then applies `label` to the pending pair. A label
  /// that contradicts the known verdict of any pair is rejected without
  /// state change; other answers off the pending pair are
  /// SessionError::OutOfTurn.
  AnswerResult answer(std::size_t pair, Label label);

  /// Pending pair after skipping implied ones, if any.
  std::optional<std::size_t> pending();

  bool done() const noexcept { return cursor_ == order_.size(); }
  std::size_t cursor() const noexcept { return cursor_; }
  std::size_t asked_count() const noexcept { return asked_; }
  std::size_t deduced_count() const noexcept { return trace_.size() - asked_; }

  std::span<const TraceEntry> trace() const noexcept { return trace_; }
  const ClusterGraph& graph() const noexcept { return graph_; }
  const Instance& instance() const noexcept { return inst_; }
  const Order& order() const noexcept { return order_; }
  const std::optional<World>& truth() const noexcept { return truth_; }

 private:
  std::vector<TraceEntry> advance();

  Instance inst_;
  IndexedInstance indexed_;
  Order order_;
  ClusterGraph graph_;
  std::optional<World> truth_;
  std::size_t cursor_ = 0;
  std::size_t asked_ = 0;
  std::vector<TraceEntry> trace_;
};

/// Graph state implied by a trace, replayed from scratch.
ClusterGraph rebuild_graph(const Instance& inst, std::span<const TraceEntry> trace);

struct BatchResult {
  std::size_t asked = 0;
  std::size_t deduced = 0;
  std::vector<TraceEntry> trace;
  std::vector<std::vector<RecordId>> clusters;
};

/// Runs a session to completion, answering every question from `truth`.
BatchResult run_batch(const Instance& inst, const Order& order, const World& truth);

}  // namespace eolo
