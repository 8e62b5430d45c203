#include "eolo/cost.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "eolo/deduction.hpp"

namespace eolo {

std::string_view to_string(CostMethod method) noexcept {
  switch (method) {
    case CostMethod::Exact: return "exact";
    case CostMethod::MonteCarlo: return "mc";
    case CostMethod::Independence: return "independence";
  }
  return "exact";
}

namespace {

void require_order_fits(std::size_t m, const Order& order) {
  if (order.size() != m) {
    throw InvalidArgument("order has " + std::to_string(order.size()) +
                          " positions for an instance with " + std::to_string(m) + " pairs");
  }
}

void require_within_cap(std::size_t m, std::size_t max_pairs, const char* what) {
  if (m > max_pairs) {
    throw CapExceeded(std::string(what) + " supports at most " + std::to_string(max_pairs) +
                          " pairs; instance has " + std::to_string(m) +
                          " (use --method mc for larger instances)",
                      max_pairs, m);
  }
}

double factor(double p, Label l) noexcept { return l == Label::Match ? p : 1.0 - p; }

void finish(CostReport& r, std::size_t m) {
  r.expected_asked = 0.0;
  for (double v : r.per_pair_ask_prob) r.expected_asked += v;
  r.expected_deduced = static_cast<double>(m) - r.expected_asked;
}

// Depth-first sweep along a fixed order. Frame d holds, for the subtree
// rooted at order position d, the total weight and the weight-times-asked
// mass of every pair. Frames are reused across siblings so the sweep does
// not allocate per node.
class OrderSweep {
 public:
  OrderSweep(const IndexedInstance& inst, const Order& order)
      : inst_(inst), order_(order.sequence()), m_(inst.pair_count()),
        weight_(m_ + 1, 0.0), ask_(m_ + 1, std::vector<double>(m_, 0.0)) {}

  void run() { visit(0, ClusterGraph(inst_.records)); }

  double total_weight() const { return weight_[0]; }
  const std::vector<double>& ask_mass() const { return ask_[0]; }

 private:
  void visit(std::size_t depth, const ClusterGraph& g) {
    auto& w = weight_[depth];
    auto& ask = ask_[depth];
    if (depth == m_) {
      w = 1.0;
      return;
    }
    w = 0.0;
    std::fill(ask.begin(), ask.end(), 0.0);

    const std::size_t pair = order_[depth];
    const auto [a, b] = inst_.endpoints[pair];
    const double p = inst_.p[pair];
    const Verdict v = g.deduce(a, b);

    if (v != Verdict::Unknown) {
      const double f = factor(p, v == Verdict::Match ? Label::Match : Label::NonMatch);
      if (f == 0.0) return;
      visit(depth + 1, g);
      absorb(depth, f, false, pair);
      return;
    }
    for (Label l : {Label::Match, Label::NonMatch}) {
      const double f = factor(p, l);
      if (f == 0.0) continue;
      ClusterGraph child = g;
      child.assert_label(a, b, l);
      visit(depth + 1, child);
      absorb(depth, f, true, pair);
    }
  }

  void absorb(std::size_t depth, double f, bool asked, std::size_t pair) {
    const double child_w = weight_[depth + 1];
    weight_[depth] += f * child_w;
    auto& ask = ask_[depth];
    const auto& child = ask_[depth + 1];
    if (depth + 1 < m_) {
      for (std::size_t i = 0; i < m_; ++i) ask[i] += f * child[i];
    }
    if (asked) ask[pair] += f * child_w;
  }

  const IndexedInstance& inst_;
  std::span<const std::size_t> order_;
  std::size_t m_;
  std::vector<double> weight_;
  std::vector<std::vector<double>> ask_;
};

}  // namespace

WorldReplay world_cost(const IndexedInstance& inst, const Order& order, const World& w) {
  const std::size_t m = inst.pair_count();
  require_order_fits(m, order);
  if (w.labels.size() != m) throw InvalidArgument("world is not total over the instance pairs");

  WorldReplay out;
  out.trace.reserve(m);
  ClusterGraph g(inst.records);
  for (std::size_t pair : order) {
    const auto [a, b] = inst.endpoints[pair];
    const Label truth = w.labels[pair];
    const Verdict v = g.deduce(a, b);
    if (v == Verdict::Unknown) {
      g.assert_label(a, b, truth);
      out.trace.push_back({pair, Outcome::asked(truth)});
      ++out.asked;
      continue;
    }
    const Label implied = v == Verdict::Match ? Label::Match : Label::NonMatch;
    if (implied != truth) {
      throw InconsistentError("world is inconsistent: pair " + std::to_string(pair) +
                              " is labeled " + std::string(to_string(truth)) +
                              " but earlier labels imply " + std::string(to_string(implied)));
    }
    out.trace.push_back({pair, Outcome::deduced(implied)});
  }
  return out;
}

WorldReplay world_cost(const Instance& inst, const Order& order, const World& w) {
  return world_cost(IndexedInstance::build(inst), order, w);
}

CostReport exact_expected_cost(const IndexedInstance& inst, const Order& order,
                               std::size_t max_pairs) {
  const std::size_t m = inst.pair_count();
  require_order_fits(m, order);
  require_within_cap(m, max_pairs, "exact expected cost");

  CostReport r;
  r.method = CostMethod::Exact;
  if (m == 0) return r;

  OrderSweep sweep(inst, order);
  sweep.run();
  const double total = sweep.total_weight();
  if (!(total > 0.0)) {
    throw InconsistentError(
        "every consistent world has weight zero: the hard constraints (p = 0 or p = 1) "
        "contradict transitivity");
  }
  r.per_pair_ask_prob = sweep.ask_mass();
  for (auto& v : r.per_pair_ask_prob) v = std::min(1.0, v / total);
  finish(r, m);
  return r;
}

CostReport exact_expected_cost(const Instance& inst, const Order& order, std::size_t max_pairs) {
  require_within_cap(inst.pair_count(), max_pairs, "exact expected cost");
  return exact_expected_cost(IndexedInstance::build(inst), order, max_pairs);
}

CostReport mc_expected_cost(const Instance& inst, const Order& order, std::size_t samples,
                            std::uint64_t seed, SamplerOptions options) {
  if (samples == 0) throw InvalidArgument("Monte-Carlo estimation needs at least one sample");
  auto indexed = IndexedInstance::build(inst);
  const std::size_t m = indexed.pair_count();
  require_order_fits(m, order);

  CostReport r;
  r.method = CostMethod::MonteCarlo;
  r.samples = samples;
  r.seed = seed;
  r.per_pair_ask_prob.assign(m, 0.0);

  WorldSampler sampler(indexed, options);
  Rng rng(seed);
  std::vector<std::uint64_t> asked_count(m, 0);
  // Welford running mean and variance of the per-sample asked count.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const World w = sampler.sample(rng);
    const auto replay = world_cost(indexed, order, w);
    for (const auto& e : replay.trace) {
      if (e.outcome.kind == OutcomeKind::Asked) ++asked_count[e.pair];
    }
    const double x = static_cast<double>(replay.asked);
    const double delta = x - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (x - mean);
  }
  for (std::size_t i = 0; i < m; ++i) {
    r.per_pair_ask_prob[i] = static_cast<double>(asked_count[i]) / static_cast<double>(samples);
  }
  finish(r, m);
  const double variance = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  r.standard_error = std::sqrt(variance / static_cast<double>(samples));
  return r;
}

CostReport independence_expected_cost(const Instance& inst, const Order& order,
                                      std::size_t max_pairs) {
  const std::size_t m = inst.pair_count();
  require_within_cap(m, max_pairs, "the independence estimator");
  const auto indexed = IndexedInstance::build(inst);
  require_order_fits(m, order);

  CostReport r;
  r.method = CostMethod::Independence;
  r.per_pair_ask_prob.assign(m, 0.0);

  const std::uint64_t vectors = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < vectors; ++mask) {
    // Bit i set means pair i is labeled Match in this vector.
    double weight = 1.0;
    for (std::size_t i = 0; i < m && weight > 0.0; ++i) {
      weight *= factor(indexed.p[i], ((mask >> i) & 1u) ? Label::Match : Label::NonMatch);
    }
    if (weight == 0.0) continue;

    ClusterGraph g(indexed.records);
    for (std::size_t pair : order) {
      const auto [a, b] = indexed.endpoints[pair];
      if (g.deduce(a, b) != Verdict::Unknown) continue;
      r.per_pair_ask_prob[pair] += weight;
      // Contradicting labels stay unasserted; the first fact wins.
      g.assert_label(a, b, ((mask >> pair) & 1u) ? Label::Match : Label::NonMatch);
    }
  }
  for (auto& v : r.per_pair_ask_prob) v = std::min(1.0, v);
  finish(r, m);
  return r;
}

}  // namespace eolo
