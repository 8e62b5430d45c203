#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "eolo/simulator.hpp"
#include "eolo/strategies.hpp"

namespace httplib {
class Server;
}

namespace eolo::app {

/// A transport-independent HTTP response.
struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  StrategyOptions strategy;
  /// Sessions are restored from and saved to this directory when set.
  std::filesystem::path persist_dir;
};

/// The triangle from the worked example: records a, b, c with every pair at
/// p = 0.5. Preloaded under the name "paper-triangle".
Instance bundled_triangle();

/// In-memory labeling sessions behind a small JSON API:
///
///   POST /sessions                 create; 201
///   GET  /sessions/{id}/next       pending question or done
///   POST /sessions/{id}/answer     apply an answer; 409 on contradiction or out-of-turn
///   GET  /sessions/{id}/state      full snapshot
///   GET  /instances                names of preloaded instances
///   GET  /health
///
/// Mutations of one session are serialized; distinct sessions run
/// independently.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options = {});
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  void preload(std::string name, Instance inst);

  /// Routes one request. Never throws.
  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body);

  /// Registers routes (and CORS headers) on an httplib server.
  void mount(httplib::Server& server);

  /// Writes every session to options.persist_dir as <id>.json.
  void save_sessions() const;
  /// Restores sessions written by save_sessions. Returns the count loaded.
  std::size_t load_sessions();

  std::size_t session_count() const;

 private:
  struct Resource;

  ApiResponse create(const nlohmann::json& request);
  ApiResponse next(Resource& res);
  ApiResponse answer(Resource& res, const nlohmann::json& request);
  ApiResponse state(Resource& res) const;

  std::shared_ptr<Resource> find(std::string_view id) const;
  std::string fresh_id();

  ServiceOptions options_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Resource>, std::less<>> sessions_;
  std::map<std::string, Instance, std::less<>> instances_;
  std::mutex id_mutex_;
  std::random_device entropy_;
};

}  // namespace eolo::app
