#include "eolo/strategies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "eolo/random.hpp"

namespace eolo {

namespace {

constexpr std::string_view kForms = "random:SEED, desc, asc, optimal, worst, explicit:FILE";

[[noreturn]] void bad_strategy(std::string_view text, std::string why) {
  throw ParseError({{std::string(text), std::move(why) + "; expected one of " + std::string(kForms)}});
}

Order sorted_order(const Instance& inst, bool descending) {
  std::vector<std::size_t> seq(inst.pair_count());
  for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = i;
  std::stable_sort(seq.begin(), seq.end(), [&](std::size_t x, std::size_t y) {
    return descending ? inst.pairs[x].p > inst.pairs[y].p : inst.pairs[x].p < inst.pairs[y].p;
  });
  return Order::from_sequence(std::move(seq), inst.pair_count());
}

void require_brute_force_cap(std::size_t m, const StrategyOptions& options) {
  if (m > options.brute_force_max_pairs) {
    throw CapExceeded("brute-force order search supports at most " +
                          std::to_string(options.brute_force_max_pairs) +
                          " pairs; instance has " + std::to_string(m) +
                          " (use desc, asc, random:SEED or explicit:FILE instead)",
                      options.brute_force_max_pairs, m);
  }
}

}  // namespace

std::string to_string(const StrategySpec& spec) {
  using Kind = StrategySpec::Kind;
  switch (spec.kind) {
    case Kind::Random: return "random:" + std::to_string(spec.seed);
    case Kind::SortedDescending: return "desc";
    case Kind::SortedAscending: return "asc";
    case Kind::BruteForceOptimal: return "optimal";
    case Kind::BruteForceWorst: return "worst";
    case Kind::Explicit: return "explicit:" + spec.source;
  }
  return "desc";
}

StrategySpec parse_strategy(std::string_view text) {
  if (text == "desc") return StrategySpec::descending();
  if (text == "asc") return StrategySpec::ascending();
  if (text == "optimal") return StrategySpec::optimal();
  if (text == "worst") return StrategySpec::worst();
  if (text.starts_with("random:")) {
    const auto digits = text.substr(7);
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
      bad_strategy(text, "random needs an unsigned integer seed");
    }
    return StrategySpec::random(seed);
  }
  if (text.starts_with("explicit:")) {
    if (text.size() == 9) bad_strategy(text, "explicit needs a file path");
    StrategySpec spec;
    spec.kind = StrategySpec::Kind::Explicit;
    spec.source = std::string(text.substr(9));
    return spec;
  }
  bad_strategy(text, "unknown strategy");
}

std::vector<StrategySpec> parse_strategy_list(std::string_view text) {
  std::vector<StrategySpec> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    if (item.empty()) bad_strategy(text, "empty entry in strategy list");
    out.push_back(parse_strategy(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Order make_order(const Instance& inst, const StrategySpec& spec, const StrategyOptions& options) {
  using Kind = StrategySpec::Kind;
  const std::size_t m = inst.pair_count();
  switch (spec.kind) {
    case Kind::Random: {
      std::vector<std::size_t> seq(m);
      for (std::size_t i = 0; i < m; ++i) seq[i] = i;
      Rng rng(spec.seed);
      rng.shuffle(std::span<std::size_t>(seq));
      return Order::from_sequence(std::move(seq), m);
    }
    case Kind::SortedDescending: return sorted_order(inst, true);
    case Kind::SortedAscending: return sorted_order(inst, false);
    case Kind::Explicit: return Order::from_sequence(spec.explicit_order, m);
    case Kind::BruteForceOptimal: return brute_force_order(inst, Objective::Minimize, options).order;
    case Kind::BruteForceWorst: return brute_force_order(inst, Objective::Maximize, options).order;
  }
  throw InvalidArgument("unknown strategy kind");
}

BruteForceResult brute_force_order(const Instance& inst, Objective objective,
                                   const StrategyOptions& options) {
  const std::size_t m = inst.pair_count();
  require_brute_force_cap(m, options);
  const auto indexed = IndexedInstance::build(inst);

  std::vector<std::size_t> seq(m);
  for (std::size_t i = 0; i < m; ++i) seq[i] = i;

  BruteForceResult best;
  bool have_best = false;
  do {
    auto order = Order::from_sequence(seq, m);
    const double cost = exact_expected_cost(indexed, order, options.world_cap).expected_asked;
    ++best.orders_examined;
    const double band = 1e-12 * std::max(1.0, std::abs(best.expected_asked));
    const bool better = objective == Objective::Minimize ? cost < best.expected_asked - band
                                                         : cost > best.expected_asked + band;
    if (!have_best || better) {
      best.order = std::move(order);
      best.expected_asked = cost;
      have_best = true;
    }
  } while (std::next_permutation(seq.begin(), seq.end()));
  return best;
}

CostReport evaluate_order(const Instance& inst, const Order& order, const EvalMethod& method,
                          const StrategyOptions& options) {
  switch (method.kind) {
    case CostMethod::Exact: return exact_expected_cost(inst, order, options.world_cap);
    case CostMethod::MonteCarlo:
      return mc_expected_cost(inst, order, method.samples, method.seed, method.sampler);
    case CostMethod::Independence:
      return independence_expected_cost(inst, order, options.world_cap);
  }
  throw InvalidArgument("unknown cost method");
}

std::vector<StrategyRow> evaluate_strategies(const Instance& inst,
                                             std::span<const StrategySpec> specs,
                                             const EvalMethod& method,
                                             const StrategyOptions& options) {
  std::vector<StrategyRow> rows;
  rows.reserve(specs.size());
  for (const auto& spec : specs) {
    auto order = make_order(inst, spec, options);
    auto report = evaluate_order(inst, order, method, options);
    rows.push_back({spec, std::move(order), std::move(report)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const StrategyRow& x, const StrategyRow& y) {
    return x.report.expected_asked < y.report.expected_asked;
  });
  return rows;
}

}  // namespace eolo
