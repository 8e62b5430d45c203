#include "eolo/worlds.hpp"

#include <string>

namespace eolo {

namespace {

void require_total(std::size_t pair_count, const World& w) {
  if (w.labels.size() != pair_count) {
    throw InvalidArgument("world has " + std::to_string(w.labels.size()) +
                          " labels for an instance with " + std::to_string(pair_count) +
                          " pairs");
  }
}

void require_within_cap(std::size_t m, std::size_t max_pairs) {
  if (m > max_pairs) {
    throw CapExceeded("world enumeration supports at most " + std::to_string(max_pairs) +
                          " pairs; instance has " + std::to_string(m) +
                          " (use Monte-Carlo estimation instead)",
                      max_pairs, m);
  }
}

double label_factor(double p, Label l) noexcept { return l == Label::Match ? p : 1.0 - p; }

class WorldEnumerator {
 public:
  explicit WorldEnumerator(const IndexedInstance& inst)
      : inst_(inst), current_(inst.pair_count()) {}

  std::vector<World> run() {
    visit(0, ClusterGraph(inst_.records));
    return std::move(out_);
  }

 private:
  void visit(std::size_t i, const ClusterGraph& g) {
    if (i == inst_.pair_count()) {
      out_.push_back(World{current_});
      return;
    }
    const auto [a, b] = inst_.endpoints[i];
    switch (g.deduce(a, b)) {
      case Verdict::Match:
        current_[i] = Label::Match;
        visit(i + 1, g);
        return;
      case Verdict::NonMatch:
        current_[i] = Label::NonMatch;
        visit(i + 1, g);
        return;
      case Verdict::Unknown:
        for (Label l : {Label::Match, Label::NonMatch}) {
          ClusterGraph child = g;
          child.assert_label(a, b, l);
          current_[i] = l;
          visit(i + 1, child);
        }
        return;
    }
  }

  const IndexedInstance& inst_;
  std::vector<Label> current_;
  std::vector<World> out_;
};

}  // namespace

bool is_consistent(const IndexedInstance& inst, const World& w) {
  require_total(inst.pair_count(), w);
  ClusterGraph g(inst.records);
  for (std::size_t i = 0; i < w.labels.size(); ++i) {
    const auto [a, b] = inst.endpoints[i];
    if (g.assert_label(a, b, w.labels[i]) == AssertResult::Contradiction) return false;
  }
  return true;
}

bool is_consistent(const Instance& inst, const World& w) {
  return is_consistent(IndexedInstance::build(inst), w);
}

std::vector<World> enumerate_worlds(const Instance& inst, std::size_t max_pairs) {
  require_within_cap(inst.pair_count(), max_pairs);
  const auto indexed = IndexedInstance::build(inst);
  return WorldEnumerator(indexed).run();
}

double world_weight(const IndexedInstance& inst, const World& w) {
  require_total(inst.pair_count(), w);
  double weight = 1.0;
  for (std::size_t i = 0; i < w.labels.size(); ++i) weight *= label_factor(inst.p[i], w.labels[i]);
  return weight;
}

double world_weight(const Instance& inst, const World& w) {
  require_total(inst.pair_count(), w);
  double weight = 1.0;
  for (std::size_t i = 0; i < w.labels.size(); ++i) {
    weight *= label_factor(inst.pairs[i].p, w.labels[i]);
  }
  return weight;
}

WorldDistribution world_distribution(const Instance& inst, std::size_t max_pairs) {
  require_within_cap(inst.pair_count(), max_pairs);
  const auto indexed = IndexedInstance::build(inst);
  WorldDistribution dist;
  dist.worlds = WorldEnumerator(indexed).run();
  dist.probs.reserve(dist.worlds.size());
  double total = 0.0;
  for (const auto& w : dist.worlds) {
    dist.probs.push_back(world_weight(indexed, w));
    total += dist.probs.back();
  }
  if (!(total > 0.0)) {
    throw InconsistentError(
        "every consistent world has weight zero: the hard constraints (p = 0 or p = 1) "
        "contradict transitivity");
  }
  for (auto& p : dist.probs) p /= total;
  return dist;
}

WorldSampler::WorldSampler(const Instance& inst, SamplerOptions options)
    : WorldSampler(IndexedInstance::build(inst), options) {}

WorldSampler::WorldSampler(IndexedInstance inst, SamplerOptions options)
    : inst_(std::move(inst)), options_(options) {
  if (options_.max_attempts == 0) throw InvalidArgument("sampler needs max_attempts >= 1");
}

World WorldSampler::sample(Rng& rng) {
  World w{std::vector<Label>(inst_.pair_count())};
  for (std::size_t attempt = 0; attempt < options_.max_attempts; ++attempt) {
    ++attempts_;
    for (std::size_t i = 0; i < w.labels.size(); ++i) {
      w.labels[i] = rng.bernoulli(inst_.p[i]) ? Label::Match : Label::NonMatch;
    }
    if (is_consistent(inst_, w)) {
      ++accepted_;
      return w;
    }
  }
  throw SamplingError("rejection sampler found no consistent world in " +
                          std::to_string(options_.max_attempts) +
                          " attempts (observed acceptance rate " +
                          std::to_string(acceptance_rate()) + ")",
                      options_.max_attempts, acceptance_rate());
}

World sample_world(const Instance& inst, Rng& rng, SamplerOptions options) {
  return WorldSampler(inst, options).sample(rng);
}

}  // namespace eolo
