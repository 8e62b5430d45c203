#include "eolo_app/service.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <optional>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "eolo/ingestion.hpp"

namespace eolo::app {

using nlohmann::json;

namespace {

ApiResponse error(int status, std::string_view code, std::string_view message) {
  return {status, json{{"error", {{"code", code}, {"message", message}}}}};
}

ApiResponse parse_error(std::string_view code, const ParseError& e, std::string_view prefix) {
  json diags = json::array();
  for (const auto& d : e.diagnostics()) {
    std::string location = d.location;
    if (!prefix.empty()) location = location.empty() ? std::string(prefix) : std::string(prefix) + "." + location;
    diags.push_back({{"location", location}, {"message", d.message}});
  }
  auto r = error(400, code, e.what());
  r.body["error"]["diagnostics"] = std::move(diags);
  return r;
}

json pair_json(const Instance& inst, std::size_t i) {
  const auto& pr = inst.pairs[i];
  return {{"index", i}, {"a", pr.a}, {"b", pr.b}, {"p", pr.p}};
}

json clusters_json(const ClusterGraph& g) { return g.clusters(); }

json edges_json(const ClusterGraph& g) {
  json out = json::array();
  for (const auto& [a, b] : g.nonmatch_edges()) out.push_back({a, b});
  return out;
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    const auto slash = path.find('/');
    const auto part = path.substr(0, slash);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash + 1);
  }
  return parts;
}

std::optional<json> parse_body(std::string_view body) {
  if (body.empty()) return json::object();
  auto doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  return doc;
}

}  // namespace

Instance bundled_triangle() {
  return {{"a", "b", "c"}, {{"a", "b", 0.5}, {"a", "c", 0.5}, {"b", "c", 0.5}}};
}

struct SessionService::Resource {
  Resource(std::string id_, std::string instance_name_, std::string strategy_, Instance inst, Order order)
      : id(std::move(id_)),
        instance_name(std::move(instance_name_)),
        strategy(std::move(strategy_)),
        session(std::move(inst), std::move(order)) {}

  const std::string id;
  const std::string instance_name;
  const std::string strategy;
  mutable std::mutex mutex;
  Session session;

  /// Pending question plus the deductions recorded since the last answer.
  json question() {
    session.next_question();  // records any implied pairs at the cursor
    const auto& inst = session.instance();
    json deduced = json::array();
    const auto trace = session.trace();
    std::size_t start = trace.size();
    while (start > 0 && trace[start - 1].outcome.kind == OutcomeKind::Deduced) --start;
    for (std::size_t k = start; k < trace.size(); ++k) deduced.push_back(trace_entry_to_json(inst, trace[k]));

    json out = {{"id", id},
                {"m", inst.pair_count()},
                {"asked", session.asked_count()},
                {"deduced", session.deduced_count()},
                {"remaining", inst.pair_count() - session.cursor()},
                {"deduced_since_last", std::move(deduced)}};
    if (const auto pending = session.pending()) {
      out["status"] = "needs_label";
      out["pair"] = pair_json(inst, *pending);
    } else {
      out["status"] = "done";
      out["pair"] = nullptr;
      out["summary"] = {{"asked", session.asked_count()},
                        {"deduced", session.deduced_count()},
                        {"clusters", clusters_json(session.graph())}};
    }
    return out;
  }

  json snapshot() const {
    const auto& inst = session.instance();
    json order = json::array();
    for (auto i : session.order()) order.push_back({inst.pairs[i].a, inst.pairs[i].b});
    return {{"id", id},
            {"instance", instance_name.empty() ? json(nullptr) : json(instance_name)},
            {"strategy", strategy},
            {"m", inst.pair_count()},
            {"cursor", session.cursor()},
            {"asked", session.asked_count()},
            {"deduced", session.deduced_count()},
            {"status", session.done() ? "done" : "in_progress"},
            {"order", std::move(order)},
            {"clusters", clusters_json(session.graph())},
            {"nonmatch_edges", edges_json(session.graph())},
            {"trace", trace_to_json(inst, session.trace())}};
  }
};

SessionService::SessionService(ServiceOptions options) : options_(std::move(options)) {
  preload("paper-triangle", bundled_triangle());
}

SessionService::~SessionService() = default;

void SessionService::preload(std::string name, Instance inst) {
  if (const auto v = validate_instance(inst); !v.empty()) throw InvalidInstance(v);
  std::unique_lock lock(mutex_);
  instances_.insert_or_assign(std::move(name), std::move(inst));
}

std::size_t SessionService::session_count() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

std::string SessionService::fresh_id() {
  std::lock_guard lock(id_mutex_);
  for (;;) {
    std::array<std::uint32_t, 4> words{};
    for (auto& w : words) w = entropy_();
    char buf[33];
    std::snprintf(buf, sizeof buf, "%08x%08x%08x%08x", words[0], words[1], words[2], words[3]);
    std::shared_lock map_lock(mutex_);
    if (!sessions_.contains(std::string_view(buf))) return buf;
  }
}

std::shared_ptr<SessionService::Resource> SessionService::find(std::string_view id) const {
  std::shared_lock lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

ApiResponse SessionService::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    if (method == "OPTIONS") return {204, nullptr};
    const auto parts = split_path(path.substr(0, path.find('?')));

    if (parts.size() == 1 && parts[0] == "health") {
      if (method != "GET") return error(405, "method_not_allowed", "use GET");
      return {200, {{"status", "ok"}, {"sessions", session_count()}}};
    }
    if (!parts.empty() && parts[0] == "instances") {
      if (method != "GET") return error(405, "method_not_allowed", "use GET");
      std::shared_lock lock(mutex_);
      if (parts.size() == 1) {
        json list = json::array();
        for (const auto& [name, inst] : instances_) {
          list.push_back({{"name", name}, {"records", inst.record_count()}, {"pairs", inst.pair_count()}});
        }
        return {200, {{"instances", std::move(list)}}};
      }
      if (parts.size() == 2) {
        const auto it = instances_.find(parts[1]);
        if (it == instances_.end()) return error(404, "not_found", "no instance named '" + std::string(parts[1]) + "'");
        return {200, instance_to_json(it->second)};
      }
      return error(404, "not_found", "no such route");
    }
    if (parts.empty() || parts[0] != "sessions") return error(404, "not_found", "no such route");

    if (parts.size() == 1) {
      if (method == "POST") {
        const auto request = parse_body(body);
        if (!request) return error(400, "invalid_request", "request body must be a JSON object");
        return create(*request);
      }
      if (method == "GET") {
        std::shared_lock lock(mutex_);
        json list = json::array();
        for (const auto& [id, res] : sessions_) list.push_back(id);
        return {200, {{"sessions", std::move(list)}}};
      }
      return error(405, "method_not_allowed", "use POST to create a session");
    }

    const auto res = find(parts[1]);
    if (!res) return error(404, "not_found", "no session with id '" + std::string(parts[1]) + "'");
    if (parts.size() == 2 && method == "GET") return state(*res);
    if (parts.size() != 3) return error(404, "not_found", "no such route");
    if (parts[2] == "next" && method == "GET") return next(*res);
    if (parts[2] == "state" && method == "GET") return state(*res);
    if (parts[2] == "answer" && method == "POST") {
      const auto request = parse_body(body);
      if (!request) return error(400, "invalid_request", "request body must be a JSON object");
      return answer(*res, *request);
    }
    if (parts[2] == "next" || parts[2] == "state" || parts[2] == "answer") {
      return error(405, "method_not_allowed", "wrong method for this route");
    }
    return error(404, "not_found", "no such route");
  } catch (const std::exception& e) {
    spdlog::error("request {} {} failed: {}", method, path, e.what());
    return error(500, "internal", e.what());
  }
}

ApiResponse SessionService::create(const json& request) {
  for (const auto& [key, value] : request.items()) {
    if (key != "instance" && key != "strategy" && key != "seed" && key != "order") {
      return error(400, "invalid_request", "unknown field '" + key + "'");
    }
  }
  if (!request.contains("instance")) return error(400, "invalid_request", "missing field 'instance'");

  Instance inst;
  std::string instance_name;
  const auto& ref = request.at("instance");
  if (ref.is_string()) {
    instance_name = ref.get<std::string>();
    std::shared_lock lock(mutex_);
    const auto it = instances_.find(instance_name);
    if (it == instances_.end()) return error(400, "unknown_instance", "no instance named '" + instance_name + "'");
    inst = it->second;
  } else {
    try {
      inst = instance_from_json(ref);
    } catch (const ParseError& e) {
      return parse_error("invalid_instance", e, "instance");
    }
  }

  std::string text = "desc";
  if (request.contains("strategy")) {
    if (!request.at("strategy").is_string()) return error(400, "invalid_strategy", "strategy must be a string");
    text = request.at("strategy").get<std::string>();
  }
  std::optional<std::uint64_t> seed;
  if (request.contains("seed")) {
    if (!request.at("seed").is_number_unsigned()) {
      return error(400, "invalid_request", "seed must be a nonnegative integer");
    }
    seed = request.at("seed").get<std::uint64_t>();
  }

  StrategySpec spec;
  if (text == "random") {
    spec = StrategySpec::random(seed.value_or(0));
  } else if (text == "explicit") {
    if (!request.contains("order")) return error(400, "invalid_strategy", "strategy 'explicit' needs an 'order' field");
    try {
      const auto order = order_from_json(request.at("order"), inst);
      spec = StrategySpec::explicit_sequence({order.begin(), order.end()});
    } catch (const ParseError& e) {
      return parse_error("invalid_order", e, "order");
    } catch (const Error& e) {
      return error(400, "invalid_order", e.what());
    }
  } else {
    try {
      spec = parse_strategy(text);
    } catch (const ParseError& e) {
      return parse_error("invalid_strategy", e, "strategy");
    }
    if (spec.kind == StrategySpec::Kind::Explicit) {
      return error(400, "invalid_strategy", "use strategy 'explicit' with an inline 'order' array");
    }
  }

  Order order;
  try {
    order = make_order(inst, spec, options_.strategy);
  } catch (const CapExceeded& e) {
    auto r = error(422, "cap_exceeded", e.what());
    r.body["error"]["limit"] = e.limit();
    r.body["error"]["actual"] = e.actual();
    return r;
  }

  auto res = std::make_shared<Resource>(fresh_id(), std::move(instance_name), to_string(spec), std::move(inst),
                                        std::move(order));
  json payload;
  {
    std::lock_guard lock(res->mutex);
    payload = res->question();
  }
  payload["strategy"] = res->strategy;
  {
    std::unique_lock lock(mutex_);
    sessions_.emplace(res->id, res);
  }
  spdlog::info("session {} created ({} pairs, {})", res->id, payload["m"].get<std::size_t>(), res->strategy);
  return {201, std::move(payload)};
}

ApiResponse SessionService::next(Resource& res) {
  std::lock_guard lock(res.mutex);
  return {200, res.question()};
}

ApiResponse SessionService::state(Resource& res) const {
  std::lock_guard lock(res.mutex);
  return {200, res.snapshot()};
}

ApiResponse SessionService::answer(Resource& res, const json& request) {
  for (const auto& [key, value] : request.items()) {
    if (key != "pair" && key != "label") return error(400, "invalid_request", "unknown field '" + key + "'");
  }
  if (!request.contains("pair") || !request.contains("label")) {
    return error(400, "invalid_request", "answer needs 'pair' and 'label'");
  }
  const auto& inst = res.session.instance();  // immutable after construction
  std::size_t pair = 0;
  const auto& p = request.at("pair");
  if (p.is_number_unsigned()) {
    pair = p.get<std::size_t>();
    if (pair >= inst.pair_count()) return error(400, "unknown_pair", "pair index out of range");
  } else if (p.is_array() && p.size() == 2 && p[0].is_string() && p[1].is_string()) {
    try {
      pair = find_pair(inst, p[0].get<std::string>(), p[1].get<std::string>());
    } catch (const InvalidArgument& e) {
      return error(400, "unknown_pair", e.what());
    }
  } else {
    return error(400, "invalid_request", "pair must be an index or an [a, b] array");
  }
  const auto label = request.at("label").is_string() ? parse_label(request.at("label").get<std::string>())
                                                     : std::nullopt;
  if (!label) return error(400, "invalid_request", "label must be \"match\" or \"nonmatch\"");

  std::lock_guard lock(res.mutex);
  try {
    if (res.session.answer(pair, *label) == AnswerResult::RejectedContradiction) {
      auto r = error(409, "contradiction",
                     "label contradicts earlier answers for (" + inst.pairs[pair].a + ", " + inst.pairs[pair].b + ")");
      r.body["state"] = res.question();
      return r;
    }
  } catch (const SessionError& e) {
    auto r = error(409, to_string(e.code()), e.what());
    r.body["state"] = res.question();
    return r;
  }
  auto payload = res.question();
  payload["result"] = "accepted";
  payload["clusters"] = clusters_json(res.session.graph());
  return {200, std::move(payload)};
}

void SessionService::mount(httplib::Server& server) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  auto route = [this](const httplib::Request& req, httplib::Response& out) {
    const auto r = handle(req.method, req.path, req.body);
    out.status = r.status;
    if (r.status != 204) out.set_content(r.body.dump(), "application/json");
  };
  for (const char* pattern : {R"(/sessions.*)", R"(/instances.*)", R"(/health)"}) {
    server.Get(pattern, route);
    server.Post(pattern, route);
    server.Options(pattern, route);
  }
}

void SessionService::save_sessions() const {
  if (options_.persist_dir.empty()) return;
  std::filesystem::create_directories(options_.persist_dir);
  std::shared_lock lock(mutex_);
  for (const auto& [id, res] : sessions_) {
    std::lock_guard session_lock(res->mutex);
    const auto& s = res->session;
    json doc = {{"id", id},
                {"instance_name", res->instance_name},
                {"instance", instance_to_json(s.instance())},
                {"strategy", res->strategy},
                {"order", std::vector<std::size_t>(s.order().begin(), s.order().end())},
                {"trace", trace_to_json(s.instance(), s.trace())}};
    write_text_file(options_.persist_dir / (id + ".json"), doc.dump(2) + "\n");
  }
}

std::size_t SessionService::load_sessions() {
  if (options_.persist_dir.empty() || !std::filesystem::is_directory(options_.persist_dir)) return 0;
  std::size_t loaded = 0;
  for (const auto& entry : std::filesystem::directory_iterator(options_.persist_dir)) {
    if (entry.path().extension() != ".json") continue;
    try {
      const auto doc = json::parse(read_text_file(entry.path()));
      auto inst = instance_from_json(doc.at("instance"));
      const auto order = order_from_json(doc.at("order"), inst);
      auto res = std::make_shared<Resource>(doc.at("id").get<std::string>(), doc.at("instance_name").get<std::string>(),
                                            doc.at("strategy").get<std::string>(), inst, order);
      std::vector<TraceEntry> trace;
      for (const auto& e : doc.at("trace")) trace.push_back(trace_entry_from_json(e, inst));
      for (const auto& e : trace) {
        if (e.outcome.kind == OutcomeKind::Asked &&
            res->session.answer(e.pair, e.outcome.label) != AnswerResult::Accepted) {
          throw Error("stored trace contradicts itself");
        }
      }
      res->session.next_question();
      const auto replayed = res->session.trace();
      if (!std::equal(trace.begin(), trace.end(), replayed.begin(), replayed.end()) &&
          !(trace.size() < replayed.size() && std::equal(trace.begin(), trace.end(), replayed.begin()))) {
        throw Error("stored trace does not replay");
      }
      std::unique_lock lock(mutex_);
      sessions_.insert_or_assign(res->id, res);
      ++loaded;
    } catch (const std::exception& e) {
      spdlog::warn("skipping {}: {}", entry.path().string(), e.what());
    }
  }
  return loaded;
}

}  // namespace eolo::app
