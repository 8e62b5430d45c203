#include "eolo/simulator.hpp"

#include <string>

namespace eolo {

std::string_view to_string(SessionError::Code code) noexcept {
  switch (code) {
    case SessionError::Code::OutOfTurn: return "out_of_turn";
    case SessionError::Code::UnknownPair: return "unknown_pair";
  }
  return "out_of_turn";
}

Session::Session(Instance inst, Order order)
    : inst_(std::move(inst)),
      indexed_(IndexedInstance::build(inst_)),
      order_(std::move(order)),
      graph_(indexed_.records) {
  if (order_.size() != inst_.pair_count()) {
    throw InvalidArgument("order does not cover the instance's pairs");
  }
}

Session::Session(Instance inst, Order order, World truth) : Session(std::move(inst), std::move(order)) {
  if (!is_consistent(indexed_, truth)) {
    throw InconsistentError("ground truth violates transitivity on the instance's pairs");
  }
  truth_ = std::move(truth);
}

std::vector<TraceEntry> Session::advance() {
  std::vector<TraceEntry> deduced;
  while (cursor_ < order_.size()) {
    const std::size_t pair = order_[cursor_];
    const auto [a, b] = indexed_.endpoints[pair];
    const Verdict v = graph_.deduce(a, b);
    if (v == Verdict::Unknown) break;
    const TraceEntry e{pair, Outcome::deduced(v == Verdict::Match ? Label::Match : Label::NonMatch)};
    trace_.push_back(e);
    deduced.push_back(e);
    ++cursor_;
  }
  return deduced;
}

NextQuestion Session::next_question() {
  if (auto deduced = advance(); !deduced.empty()) return AutoAdvanced{std::move(deduced)};
  if (done()) return Done{};
  return NeedsLabel{order_[cursor_]};
}

std::optional<std::size_t> Session::pending() {
  advance();
  if (done()) return std::nullopt;
  return order_[cursor_];
}

AnswerResult Session::answer(std::size_t pair, Label label) {
  if (pair >= inst_.pair_count()) {
    throw SessionError(SessionError::Code::UnknownPair,
                       "pair index " + std::to_string(pair) + " is out of range");
  }
  const auto want = pending();
  const auto [a, b] = indexed_.endpoints[pair];
  if (!want || *want != pair) {
    // The pending pair is always Unknown to the graph, so a conflicting
    // label can only arrive for a pair whose verdict is already fixed.
    const Verdict known = graph_.deduce(a, b);
    const Verdict claimed = label == Label::Match ? Verdict::Match : Verdict::NonMatch;
    if (known != Verdict::Unknown && known != claimed) return AnswerResult::RejectedContradiction;
    throw SessionError(SessionError::Code::OutOfTurn,
                       want ? "pair " + std::to_string(pair) + " answered while pair " +
                                  std::to_string(*want) + " is pending"
                            : "pair " + std::to_string(pair) + " answered but the session is done");
  }
  if (graph_.assert_label(a, b, label) == AssertResult::Contradiction) {
    return AnswerResult::RejectedContradiction;
  }
  trace_.push_back({pair, Outcome::asked(label)});
  ++asked_;
  ++cursor_;
  return AnswerResult::Accepted;
}

ClusterGraph rebuild_graph(const Instance& inst, std::span<const TraceEntry> trace) {
  const auto indexed = IndexedInstance::build(inst);
  ClusterGraph g(indexed.records);
  for (const auto& e : trace) {
    if (e.pair >= indexed.pair_count()) throw InvalidArgument("trace names an unknown pair");
    const auto [a, b] = indexed.endpoints[e.pair];
    if (g.assert_label(a, b, e.outcome.label) == AssertResult::Contradiction) {
      throw InconsistentError("trace contradicts itself at pair " + std::to_string(e.pair));
    }
  }
  return g;
}

BatchResult run_batch(const Instance& inst, const Order& order, const World& truth) {
  Session s(inst, order, truth);
  for (;;) {
    const auto next = s.next_question();
    if (std::holds_alternative<Done>(next)) break;
    if (const auto* q = std::get_if<NeedsLabel>(&next)) {
      if (s.answer(q->pair, truth.labels[q->pair]) != AnswerResult::Accepted) {
        throw InconsistentError("ground truth contradicted the session graph");
      }
    }
  }
  BatchResult out;
  out.asked = s.asked_count();
  out.deduced = s.deduced_count();
  out.trace.assign(s.trace().begin(), s.trace().end());
  out.clusters = s.graph().clusters();
  return out;
}

}  // namespace eolo
