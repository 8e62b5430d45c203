#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "eolo/cost.hpp"
#include "eolo/strategies.hpp"
#include "eolo/types.hpp"
#include "eolo/worlds.hpp"

namespace eolo {

/// Blocks of records that refer to the same entity.
using Partition = std::vector<std::vector<RecordId>>;

// Instance files:
//   {"pairs": [{"a": "x", "b": "y", "p": 0.5}, ...], "records": ["x", "y", ...]}
// Parsing is strict: unknown or missing fields, wrong types and every
// validate_instance violation are reported together in one ParseError.

Instance instance_from_json(const nlohmann::json& doc);
Instance parse_instance(std::string_view json_text);
/// Flat `a,b,p` CSV with that header. Records are taken from the pair
/// endpoints in order of first appearance.
Instance parse_instance_csv(std::string_view csv_text);
/// Dispatches on extension: `.csv` goes to the CSV importer, anything else
/// is parsed as JSON.
Instance load_instance(const std::filesystem::path& path);

nlohmann::json instance_to_json(const Instance& inst);
/// Canonical text: sorted keys, two-space indent, shortest round-trip
/// floats, trailing newline. Canonical files survive load/save byte for byte.
std::string format_instance(const Instance& inst);
void save_instance(const std::filesystem::path& path, const Instance& inst);

// Truth files: {"clusters": [["a", "b"], ["c"]]}. Records missing from
// every block are singletons.

Partition partition_from_json(const nlohmann::json& doc);
/// Pairs inside one block are Match, all others NonMatch. Throws ParseError
/// for overlapping blocks or unknown records.
World project_partition(const Instance& inst, const Partition& partition);
World parse_truth(std::string_view json_text, const Instance& inst);
World load_truth(const std::filesystem::path& path, const Instance& inst);

nlohmann::json partition_to_json(const Partition& partition);
std::string format_truth(const Partition& partition);
void save_truth(const std::filesystem::path& path, const Partition& partition);

// Order files: a JSON array whose items are pair indices or [a, b] record
// pairs, optionally wrapped as {"order": [...]}.

Order order_from_json(const nlohmann::json& doc, const Instance& inst);
Order load_order(const std::filesystem::path& path, const Instance& inst);
/// Loads the file named by an `explicit:FILE` spec into its order.
StrategySpec resolve_strategy(StrategySpec spec, const Instance& inst);

/// Pair index of (a, b) in either orientation. Throws InvalidArgument.
std::size_t find_pair(const Instance& inst, std::string_view a, std::string_view b);

// Traces: one object per outcome,
//   {"label": "match"|"nonmatch", "outcome": "asked"|"deduced", "pair": [a, b]}

nlohmann::json trace_entry_to_json(const Instance& inst, const TraceEntry& entry);
TraceEntry trace_entry_from_json(const nlohmann::json& doc, const Instance& inst);
nlohmann::json trace_to_json(const Instance& inst, std::span<const TraceEntry> trace);
/// JSON lines, one entry per line.
std::string format_trace_jsonl(const Instance& inst, std::span<const TraceEntry> trace);

// Results: one object per strategy row.

nlohmann::json cost_report_to_json(const CostReport& report);
nlohmann::json strategy_row_to_json(const StrategyRow& row);
/// JSON lines, one row per line, in table order.
std::string format_results(std::span<const StrategyRow> rows);
void save_results(const std::filesystem::path& path, std::span<const StrategyRow> rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Synthetic instance generator.
struct GeneratorConfig {
  std::size_t n_records = 3;

  /// Ground-truth blocks as record positions. When empty, the truth is
  /// sampled: each record after the first opens a new block with
  /// `new_cluster_probability`, otherwise joins a uniformly chosen one.
  std::vector<std::vector<std::size_t>> explicit_truth;
  double new_cluster_probability = 0.5;

  /// Within-block pairs get p around p_match_mean, cross-block pairs around
  /// p_nonmatch_mean; each p is mean + jitter * U(-1, 1), clamped to [0, 1].
  double p_match_mean = 0.8;
  double p_nonmatch_mean = 0.2;
  double jitter = 0.1;

  /// Keep every pair, or round(pair_fraction * n(n-1)/2) of them chosen
  /// uniformly.
  bool complete = true;
  double pair_fraction = 1.0;

  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  Instance instance;
  World truth;          // projected onto instance.pairs
  Partition partition;  // full ground truth
};

/// Deterministic given the config. Records are named a..z, aa, ab, ...
/// Throws InvalidArgument for degenerate configs (fewer than two records,
/// parameters out of range, malformed explicit truth).
GeneratedInstance generate_instance(const GeneratorConfig& cfg);

/// Spreadsheet-style name for record position i: a, ..., z, aa, ab, ...
std::string record_name(std::size_t i);

}  // namespace eolo
