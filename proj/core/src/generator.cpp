#include <algorithm>
#include <cmath>
#include <string>

#include "eolo/ingestion.hpp"
#include "eolo/random.hpp"

namespace eolo {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

void check_config(const GeneratorConfig& cfg) {
  if (cfg.n_records < 2) throw InvalidArgument("generator needs at least 2 records");
  if (!in_unit(cfg.p_match_mean)) throw InvalidArgument("p_match_mean must lie in [0, 1]");
  if (!in_unit(cfg.p_nonmatch_mean)) throw InvalidArgument("p_nonmatch_mean must lie in [0, 1]");
  if (!(cfg.jitter >= 0.0 && cfg.jitter <= 1.0)) throw InvalidArgument("jitter must lie in [0, 1]");
  if (!in_unit(cfg.pair_fraction)) throw InvalidArgument("pair_fraction must lie in [0, 1]");
  if (!in_unit(cfg.new_cluster_probability)) {
    throw InvalidArgument("new_cluster_probability must lie in [0, 1]");
  }
}

std::vector<std::size_t> truth_blocks(const GeneratorConfig& cfg, Rng& rng) {
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> block(cfg.n_records, kUnset);
  if (!cfg.explicit_truth.empty()) {
    for (std::size_t b = 0; b < cfg.explicit_truth.size(); ++b) {
      for (auto r : cfg.explicit_truth[b]) {
        if (r >= cfg.n_records) throw InvalidArgument("explicit truth names record " + std::to_string(r) + " beyond n_records");
        if (block[r] != kUnset) throw InvalidArgument("explicit truth blocks overlap at record " + std::to_string(r));
        block[r] = b;
      }
    }
    // Unlisted records are singletons.
    std::size_t next = cfg.explicit_truth.size();
    for (auto& b : block) {
      if (b == kUnset) b = next++;
    }
    return block;
  }
  std::size_t blocks = 1;
  block[0] = 0;
  for (std::size_t r = 1; r < cfg.n_records; ++r) {
    if (rng.bernoulli(cfg.new_cluster_probability)) {
      block[r] = blocks++;
    } else {
      block[r] = static_cast<std::size_t>(rng.below(blocks));
    }
  }
  return block;
}

}  // namespace

std::string record_name(std::size_t i) {
  std::string out;
  for (std::size_t n = i + 1; n > 0; n = (n - 1) / 26) {
    out.push_back(static_cast<char>('a' + (n - 1) % 26));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

GeneratedInstance generate_instance(const GeneratorConfig& cfg) {
  check_config(cfg);
  Rng rng(cfg.seed);
  const std::size_t n = cfg.n_records;

  const auto block = truth_blocks(cfg, rng);

  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
  }
  if (!cfg.complete) {
    const auto keep = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(all.size()),
                         std::round(cfg.pair_fraction * static_cast<double>(all.size()))));
    rng.shuffle(std::span(all));
    all.resize(keep);
    std::sort(all.begin(), all.end());
  }

  GeneratedInstance out;
  for (std::size_t i = 0; i < n; ++i) out.instance.records.push_back(record_name(i));
  out.truth.labels.reserve(all.size());
  for (const auto& [i, j] : all) {
    const bool same = block[i] == block[j];
    const double mean = same ? cfg.p_match_mean : cfg.p_nonmatch_mean;
    const double u = 2.0 * rng.uniform() - 1.0;
    const double p = std::clamp(mean + cfg.jitter * u, 0.0, 1.0);
    auto [a, b] = canonical_pair_key(out.instance.records[i], out.instance.records[j]);
    out.instance.pairs.push_back({std::move(a), std::move(b), p});
    out.truth.labels.push_back(same ? Label::Match : Label::NonMatch);
  }

  std::size_t blocks = 0;
  for (auto b : block) blocks = std::max(blocks, b + 1);
  Partition partition(blocks);
  for (std::size_t r = 0; r < n; ++r) partition[block[r]].push_back(out.instance.records[r]);
  std::erase_if(partition, [](const auto& members) { return members.empty(); });
  for (auto& members : partition) std::sort(members.begin(), members.end());
  std::sort(partition.begin(), partition.end());
  out.partition = std::move(partition);
  return out;
}

}  // namespace eolo
