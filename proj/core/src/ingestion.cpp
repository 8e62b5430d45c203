#include "eolo/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>

namespace eolo {

using nlohmann::json;

namespace {

class Diagnostics {
 public:
  void add(std::string location, std::string message) {
    items_.push_back({std::move(location), std::move(message)});
  }
  bool empty() const noexcept { return items_.empty(); }
  void throw_if_any() {
    if (!items_.empty()) throw ParseError(std::move(items_));
  }

  // Checks that `doc` is an object holding exactly the given keys.
  bool object_with(const json& doc, const std::string& where,
                   std::initializer_list<std::string_view> keys) {
    const std::string at = where.empty() ? "document" : where;
    if (!doc.is_object()) {
      add(at, "expected a JSON object");
      return false;
    }
    bool ok = true;
    for (const auto& [key, value] : doc.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        add(join(where, key), "unknown field");
        ok = false;
      }
    }
    for (auto key : keys) {
      if (!doc.contains(key)) {
        add(join(where, std::string(key)), "missing required field");
        ok = false;
      }
    }
    return ok;
  }

  static std::string join(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
  }

 private:
  std::vector<Diagnostic> items_;
};

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError({{"line " + std::to_string(line) + ", column " + std::to_string(column),
                       std::string("malformed JSON: ") + e.what()}});
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

void throw_on_violations(const Instance& inst, Diagnostics& diags) {
  for (const auto& v : validate_instance(inst)) diags.add(v.field, v.message);
  diags.throw_if_any();
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

Instance instance_from_json(const json& doc) {
  Diagnostics diags;
  Instance inst;
  if (!diags.object_with(doc, "", {"records", "pairs"})) {
    if (!doc.is_object() || !doc.contains("records") || !doc.contains("pairs")) diags.throw_if_any();
  }

  const auto& records = doc.at("records");
  if (!records.is_array()) {
    diags.add("records", "expected an array of record ids");
  } else {
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!records[i].is_string()) {
        diags.add(index_path("records", i), "expected a string");
        continue;
      }
      inst.records.push_back(records[i].get<std::string>());
    }
  }

  const auto& pairs = doc.at("pairs");
  if (!pairs.is_array()) {
    diags.add("pairs", "expected an array of pair objects");
  } else {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string at = index_path("pairs", i);
      const auto& item = pairs[i];
      if (!diags.object_with(item, at, {"a", "b", "p"})) {
        if (!item.is_object() || !item.contains("a") || !item.contains("b") || !item.contains("p")) continue;
      }
      Pair pr;
      bool ok = true;
      for (const char* key : {"a", "b"}) {
        if (!item.at(key).is_string()) {
          diags.add(at + "." + key, "expected a string");
          ok = false;
        }
      }
      if (!item.at("p").is_number()) {
        diags.add(at + ".p", "expected a number");
        ok = false;
      }
      if (!ok) continue;
      pr.a = item.at("a").get<std::string>();
      pr.b = item.at("b").get<std::string>();
      pr.p = item.at("p").get<double>();
      inst.pairs.push_back(std::move(pr));
    }
  }
  diags.throw_if_any();
  throw_on_violations(inst, diags);
  return inst;
}

Instance parse_instance(std::string_view json_text) { return instance_from_json(parse_json(json_text)); }

Instance parse_instance_csv(std::string_view csv_text) {
  Diagnostics diags;
  Instance inst;
  std::map<std::string, bool, std::less<>> seen;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t start = 0;
  while (start < csv_text.size()) {
    auto end = csv_text.find('\n', start);
    if (end == std::string_view::npos) end = csv_text.size();
    const auto line = trim(csv_text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);

    std::vector<std::string_view> cells;
    std::size_t from = 0;
    for (;;) {
      const auto comma = line.find(',', from);
      cells.push_back(trim(line.substr(from, comma == std::string_view::npos ? line.npos : comma - from)));
      if (comma == std::string_view::npos) break;
      from = comma + 1;
    }
    if (!header_seen) {
      header_seen = true;
      if (cells.size() != 3 || cells[0] != "a" || cells[1] != "b" || cells[2] != "p") {
        diags.add(where, "expected header 'a,b,p'");
        diags.throw_if_any();
      }
      continue;
    }
    if (cells.size() != 3) {
      diags.add(where, "expected 3 fields, found " + std::to_string(cells.size()));
      continue;
    }
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(cells[2].data(), cells[2].data() + cells[2].size(), p);
    if (cells[2].empty() || ec != std::errc{} || ptr != cells[2].data() + cells[2].size()) {
      diags.add(where, "field p is not a number: '" + std::string(cells[2]) + "'");
      continue;
    }
    for (auto id : {cells[0], cells[1]}) {
      if (!id.empty() && seen.emplace(std::string(id), true).second) inst.records.emplace_back(id);
    }
    inst.pairs.push_back({std::string(cells[0]), std::string(cells[1]), p});
  }
  if (!header_seen) diags.add("line 1", "expected header 'a,b,p'");
  diags.throw_if_any();
  throw_on_violations(inst, diags);
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  if (path.extension() == ".csv") return parse_instance_csv(text);
  return parse_instance(text);
}

json instance_to_json(const Instance& inst) {
  json pairs = json::array();
  for (const auto& pr : inst.pairs) pairs.push_back({{"a", pr.a}, {"b", pr.b}, {"p", pr.p}});
  return {{"records", inst.records}, {"pairs", std::move(pairs)}};
}

std::string format_instance(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

void save_instance(const std::filesystem::path& path, const Instance& inst) {
  write_text_file(path, format_instance(inst));
}

Partition partition_from_json(const json& doc) {
  Diagnostics diags;
  if (!diags.object_with(doc, "", {"clusters"})) diags.throw_if_any();
  const auto& clusters = doc.at("clusters");
  Partition out;
  if (!clusters.is_array()) {
    diags.add("clusters", "expected an array of arrays of record ids");
    diags.throw_if_any();
  }
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const std::string at = index_path("clusters", i);
    if (!clusters[i].is_array()) {
      diags.add(at, "expected an array of record ids");
      continue;
    }
    std::vector<RecordId> block;
    for (std::size_t j = 0; j < clusters[i].size(); ++j) {
      if (!clusters[i][j].is_string()) {
        diags.add(index_path(at, j), "expected a string");
        continue;
      }
      block.push_back(clusters[i][j].get<std::string>());
    }
    out.push_back(std::move(block));
  }
  diags.throw_if_any();
  return out;
}

World project_partition(const Instance& inst, const Partition& partition) {
  Diagnostics diags;
  const RecordIndex index(inst.records);
  std::vector<std::size_t> block_of(inst.records.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < partition.size(); ++i) {
    for (std::size_t j = 0; j < partition[i].size(); ++j) {
      const std::string at = index_path(index_path("clusters", i), j);
      const auto node = index.find(partition[i][j]);
      if (!node) {
        diags.add(at, "unknown record '" + partition[i][j] + "'");
        continue;
      }
      if (block_of[*node] != static_cast<std::size_t>(-1)) {
        diags.add(at, "record '" + partition[i][j] + "' already appears in clusters[" +
                          std::to_string(block_of[*node]) + "]; blocks must be disjoint");
        continue;
      }
      block_of[*node] = i;
    }
  }
  diags.throw_if_any();

  World w{std::vector<Label>(inst.pairs.size(), Label::NonMatch)};
  for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
    const auto ba = block_of[index.at(inst.pairs[k].a)];
    const auto bb = block_of[index.at(inst.pairs[k].b)];
    if (ba != static_cast<std::size_t>(-1) && ba == bb) w.labels[k] = Label::Match;
  }
  if (!is_consistent(inst, w)) {
    throw InconsistentError("truth partition is inconsistent with the instance's pairs");
  }
  return w;
}

World parse_truth(std::string_view json_text, const Instance& inst) {
  return project_partition(inst, partition_from_json(parse_json(json_text)));
}

World load_truth(const std::filesystem::path& path, const Instance& inst) {
  return parse_truth(read_text_file(path), inst);
}

json partition_to_json(const Partition& partition) { return {{"clusters", partition}}; }

std::string format_truth(const Partition& partition) {
  return partition_to_json(partition).dump(2) + "\n";
}

void save_truth(const std::filesystem::path& path, const Partition& partition) {
  write_text_file(path, format_truth(partition));
}

std::size_t find_pair(const Instance& inst, std::string_view a, std::string_view b) {
  for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
    const auto& pr = inst.pairs[i];
    if ((pr.a == a && pr.b == b) || (pr.a == b && pr.b == a)) return i;
  }
  throw InvalidArgument("no pair (" + std::string(a) + ", " + std::string(b) + ") in the instance");
}

Order order_from_json(const json& doc, const Instance& inst) {
  Diagnostics diags;
  const json* items = &doc;
  if (doc.is_object()) {
    if (!diags.object_with(doc, "", {"order"})) diags.throw_if_any();
    items = &doc.at("order");
  }
  if (!items->is_array()) {
    diags.add("order", "expected an array of pair indices or [a, b] record pairs");
    diags.throw_if_any();
  }
  std::vector<std::size_t> seq;
  for (std::size_t i = 0; i < items->size(); ++i) {
    const auto& item = (*items)[i];
    const std::string at = index_path("order", i);
    if (item.is_number_unsigned()) {
      seq.push_back(item.get<std::size_t>());
    } else if (item.is_array() && item.size() == 2 && item[0].is_string() && item[1].is_string()) {
      try {
        seq.push_back(find_pair(inst, item[0].get<std::string>(), item[1].get<std::string>()));
      } catch (const InvalidArgument& e) {
        diags.add(at, e.what());
      }
    } else {
      diags.add(at, "expected a pair index or an [a, b] record pair");
    }
  }
  diags.throw_if_any();
  if (!is_permutation_of_range(seq, inst.pair_count())) {
    throw ParseError({{"order", "must list every one of the " + std::to_string(inst.pair_count()) +
                                    " pairs exactly once"}});
  }
  return Order::from_sequence(std::move(seq), inst.pair_count());
}

Order load_order(const std::filesystem::path& path, const Instance& inst) {
  return order_from_json(parse_json(read_text_file(path)), inst);
}

StrategySpec resolve_strategy(StrategySpec spec, const Instance& inst) {
  if (spec.kind == StrategySpec::Kind::Explicit && spec.explicit_order.empty() &&
      inst.pair_count() > 0) {
    const auto order = load_order(spec.source, inst);
    spec.explicit_order.assign(order.begin(), order.end());
  }
  return spec;
}

json trace_entry_to_json(const Instance& inst, const TraceEntry& entry) {
  const auto& pr = inst.pairs.at(entry.pair);
  return {{"pair", {pr.a, pr.b}},
          {"outcome", to_string(entry.outcome.kind)},
          {"label", to_string(entry.outcome.label)}};
}

TraceEntry trace_entry_from_json(const json& doc, const Instance& inst) {
  Diagnostics diags;
  if (!diags.object_with(doc, "", {"pair", "outcome", "label"})) diags.throw_if_any();
  const auto& pair = doc.at("pair");
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
    diags.add("pair", "expected [a, b]");
  }
  const auto outcome = doc.at("outcome").is_string() ? doc.at("outcome").get<std::string>() : "";
  if (outcome != "asked" && outcome != "deduced") diags.add("outcome", "expected \"asked\" or \"deduced\"");
  const auto label = doc.at("label").is_string() ? parse_label(doc.at("label").get<std::string>())
                                                 : std::nullopt;
  if (!label) diags.add("label", "expected \"match\" or \"nonmatch\"");
  diags.throw_if_any();
  const auto idx = find_pair(inst, pair[0].get<std::string>(), pair[1].get<std::string>());
  const Label l = label.value_or(Label::Match);
  return {idx, outcome == "asked" ? Outcome::asked(l) : Outcome::deduced(l)};
}

json trace_to_json(const Instance& inst, std::span<const TraceEntry> trace) {
  json out = json::array();
  for (const auto& e : trace) out.push_back(trace_entry_to_json(inst, e));
  return out;
}

std::string format_trace_jsonl(const Instance& inst, std::span<const TraceEntry> trace) {
  std::string out;
  for (const auto& e : trace) {
    out += trace_entry_to_json(inst, e).dump();
    out += '\n';
  }
  return out;
}

json cost_report_to_json(const CostReport& report) {
  json out = {
      {"method", to_string(report.method)},
      {"expected_asked", report.expected_asked},
      {"expected_deduced", report.expected_deduced},
      {"per_pair_ask_prob", report.per_pair_ask_prob},
      {"samples", nullptr},
      {"seed", nullptr},
      {"standard_error", nullptr},
  };
  if (report.samples) out["samples"] = *report.samples;
  if (report.seed) out["seed"] = *report.seed;
  if (report.standard_error) out["standard_error"] = *report.standard_error;
  return out;
}

json strategy_row_to_json(const StrategyRow& row) {
  json out = cost_report_to_json(row.report);
  out["strategy"] = to_string(row.spec);
  out["order"] = std::vector<std::size_t>(row.order.begin(), row.order.end());
  return out;
}

std::string format_results(std::span<const StrategyRow> rows) {
  std::string out;
  for (const auto& row : rows) {
    out += strategy_row_to_json(row).dump();
    out += '\n';
  }
  return out;
}

void save_results(const std::filesystem::path& path, std::span<const StrategyRow> rows) {
  write_text_file(path, format_results(rows));
}

}  // namespace eolo
