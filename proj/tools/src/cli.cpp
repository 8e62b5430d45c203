#include "eolo_app/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <CLI11.hpp>
#include <httplib.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "eolo/eolo.hpp"
#include "eolo_app/service.hpp"

namespace eolo::app {
namespace {

using nlohmann::json;

/// Flag combinations CLI11 cannot express; reported like parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string format = "table";
  bool quiet = false;
};

struct GenFlags {
  std::size_t records = 0;
  std::string out;
  std::string truth_out;
  bool complete = false;
  std::optional<double> pair_fraction;
  double p_match = 0.8;
  double p_nonmatch = 0.2;
  double jitter = 0.1;
  double new_cluster_prob = 0.5;
};

struct EvalFlags {
  std::string instance;
  std::string strategies;
  std::string method = "exact";
  std::optional<std::size_t> samples;
  std::string out;
};

struct SimulateFlags {
  std::string instance;
  std::string truth;
  std::string strategy = "desc";
  std::string trace_out;
};

struct WorldsFlags {
  std::string instance;
};

struct ServeFlags {
  int port = 0;
  std::string host = "127.0.0.1";
  std::string static_dir;
  std::string persist_dir;
  std::vector<std::string> preload;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err, bool quiet) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, /*force_flush=*/true);
  auto logger = std::make_shared<spdlog::logger>("eolo", sink);
  logger->set_pattern("[%l] %v");
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("EOLO_LOG"); env != nullptr && *env != '\0') {
    level = spdlog::level::from_str(env);
  }
  if (quiet) level = std::max(level, spdlog::level::err);
  logger->set_level(level);
  return logger;
}

std::string fixed4(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << x;
  return s.str();
}

std::string clusters_text(const std::vector<std::vector<RecordId>>& clusters) {
  std::string out;
  for (const auto& c : clusters) {
    if (!out.empty()) out += ' ';
    out += '{';
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + c[i];
    out += '}';
  }
  return out;
}

json order_pairs(const Instance& inst, const Order& order) {
  json out = json::array();
  for (auto i : order) out.push_back({inst.pairs[i].a, inst.pairs[i].b});
  return out;
}

std::string cap_hint(const CapExceeded& e) {
  return std::string(e.what()) +
         "; brute-force strategies need a smaller instance, and large instances need --method mc";
}

int cmd_gen(const GenFlags& f, const Globals& g, std::ostream& out) {
  GeneratorConfig cfg;
  cfg.n_records = f.records;
  cfg.complete = !f.pair_fraction.has_value();
  cfg.pair_fraction = f.pair_fraction.value_or(1.0);
  cfg.p_match_mean = f.p_match;
  cfg.p_nonmatch_mean = f.p_nonmatch;
  cfg.jitter = f.jitter;
  cfg.new_cluster_probability = f.new_cluster_prob;
  cfg.seed = g.seed;
  const auto generated = generate_instance(cfg);
  save_instance(f.out, generated.instance);
  if (!f.truth_out.empty()) save_truth(f.truth_out, generated.partition);
  spdlog::get("eolo")->info("generated {} records, {} pairs", generated.instance.record_count(),
                            generated.instance.pair_count());

  if (g.format == "json") {
    out << json{{"instance", f.out},
                {"truth", f.truth_out.empty() ? json(nullptr) : json(f.truth_out)},
                {"records", generated.instance.record_count()},
                {"pairs", generated.instance.pair_count()},
                {"clusters", generated.partition.size()},
                {"seed", g.seed}}
               .dump()
        << '\n';
  } else if (!g.quiet) {
    out << "wrote " << f.out << " (" << generated.instance.record_count() << " records, "
        << generated.instance.pair_count() << " pairs)";
    if (!f.truth_out.empty()) out << " and " << f.truth_out << " (" << generated.partition.size() << " clusters)";
    out << '\n';
  }
  return kExitOk;
}

int cmd_eval(const EvalFlags& f, const Globals& g, std::ostream& out, std::ostream& err) {
  std::vector<StrategySpec> specs;
  try {
    specs = parse_strategy_list(f.strategies.empty() ? "desc,asc,random:" + std::to_string(g.seed) : f.strategies);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  EvalMethod method;
  method.kind = f.method == "mc" ? CostMethod::MonteCarlo
                : f.method == "independence" ? CostMethod::Independence
                                             : CostMethod::Exact;
  method.samples = f.samples.value_or(method.samples);
  method.seed = g.seed;

  const auto inst = load_instance(f.instance);
  for (auto& spec : specs) spec = resolve_strategy(spec, inst);
  if (method.kind == CostMethod::Independence) {
    err << "warning: the independence estimator ignores transitivity between pairs and is known to be "
           "incorrect; it is provided for comparison only (use --method exact or mc)\n";
  }

  const auto rows = evaluate_strategies(inst, specs, method);
  if (!f.out.empty()) save_results(f.out, rows);

  if (g.format == "json") {
    out << format_results(rows);
    return kExitOk;
  }
  const bool mc = method.kind == CostMethod::MonteCarlo;
  std::size_t width = std::string_view("strategy").size();
  for (const auto& r : rows) width = std::max(width, to_string(r.spec).size());
  out << std::left << std::setw(static_cast<int>(width)) << "strategy" << "  " << std::right << std::setw(8)
      << "asked" << "  " << std::setw(8) << "deduced";
  if (mc) out << "  " << std::setw(8) << "se";
  out << "  order\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << to_string(r.spec) << "  " << std::right
        << std::setw(8) << fixed4(r.report.expected_asked) << "  " << std::setw(8)
        << fixed4(r.report.expected_deduced);
    if (mc) out << "  " << std::setw(8) << fixed4(r.report.standard_error.value_or(0.0));
    out << "  ";
    for (std::size_t k = 0; k < r.order.size(); ++k) {
      const auto& pr = inst.pairs[r.order[k]];
      out << (k ? " " : "") << '(' << pr.a << ',' << pr.b << ')';
    }
    out << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const SimulateFlags& f, const Globals& g, std::ostream& out) {
  StrategySpec spec;
  try {
    spec = parse_strategy(f.strategy);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  const auto inst = load_instance(f.instance);
  const auto truth = load_truth(f.truth, inst);
  const auto order = make_order(inst, resolve_strategy(spec, inst));
  const auto result = run_batch(inst, order, truth);
  if (!f.trace_out.empty()) write_text_file(f.trace_out, format_trace_jsonl(inst, result.trace));

  if (g.format == "json") {
    out << json{{"strategy", to_string(spec)},
                {"m", inst.pair_count()},
                {"asked", result.asked},
                {"deduced", result.deduced},
                {"order", order_pairs(inst, order)},
                {"clusters", result.clusters}}
               .dump()
        << '\n';
  } else {
    out << "asked=" << result.asked << " deduced=" << result.deduced << '\n';
    if (!g.quiet) out << "clusters: " << clusters_text(result.clusters) << '\n';
  }
  return kExitOk;
}

int cmd_worlds(const WorldsFlags& f, const Globals& g, std::ostream& out) {
  const auto inst = load_instance(f.instance);
  const auto dist = world_distribution(inst);
  if (g.format == "json") {
    for (std::size_t k = 0; k < dist.worlds.size(); ++k) {
      json labels = json::array();
      for (auto l : dist.worlds[k].labels) labels.push_back(to_string(l));
      out << json{{"labels", labels}, {"prob", dist.probs[k]}}.dump() << '\n';
    }
    return kExitOk;
  }
  for (std::size_t i = 0; i < inst.pair_count(); ++i) {
    out << (i ? " " : "") << '(' << inst.pairs[i].a << ',' << inst.pairs[i].b << ')';
  }
  out << "  prob\n";
  for (std::size_t k = 0; k < dist.worlds.size(); ++k) {
    for (std::size_t i = 0; i < inst.pair_count(); ++i) {
      out << (i ? " " : "") << (dist.worlds[k].labels[i] == Label::Match ? 'M' : 'N');
    }
    out << "  " << fixed4(dist.probs[k]) << '\n';
  }
  return kExitOk;
}

int cmd_serve(const ServeFlags& f, std::ostream& out, std::ostream& err) {
  if (!f.static_dir.empty() && !std::filesystem::is_directory(f.static_dir)) {
    err << "error: static directory '" << f.static_dir << "' does not exist\n";
    return kExitRuntime;
  }
  ServiceOptions options;
  options.persist_dir = f.persist_dir;
  SessionService service(options);
  for (const auto& item : f.preload) {
    const auto eq = item.find('=');
    const std::filesystem::path path = eq == std::string::npos ? item : item.substr(eq + 1);
    const std::string name = eq == std::string::npos ? path.stem().string() : item.substr(0, eq);
    service.preload(name, load_instance(path));
  }
  if (const auto n = service.load_sessions(); n > 0) spdlog::get("eolo")->info("restored {} sessions", n);

  httplib::Server server;
  service.mount(server);
  if (!f.static_dir.empty()) server.set_mount_point("/", f.static_dir);

  // Signals are taken synchronously by a waiter thread, so shutdown runs
  // outside signal-handler context.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });

  int code = kExitOk;
  if (!server.bind_to_port(f.host, f.port)) {
    err << "error: cannot listen on " << f.host << ':' << f.port << " (port in use or address unavailable)\n";
    code = kExitRuntime;
  } else {
    out << "listening on http://" << f.host << ':' << f.port << std::endl;
    server.listen_after_bind();
  }
  pthread_kill(waiter.native_handle(), SIGTERM);  // no-op when a signal already arrived
  waiter.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);

  service.save_sessions();
  if (code == kExitOk) spdlog::get("eolo")->info("server stopped");
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transitivity-aware pair labeling: generate instances, compare labeling orders, "
               "replay sessions and serve interactive labeling."};
  app.name("eolo");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for generation, random orders and sampling")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  app.add_flag("--quiet,-q", g.quiet, "Print results only");

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance and its ground truth");
  gen_cmd->add_option("--records", gen.records, "Number of records")->required()->check(CLI::Range(2, 100000));
  gen_cmd->add_option("--out", gen.out, "Instance file to write")->required();
  gen_cmd->add_option("--truth-out", gen.truth_out, "Truth file to write");
  auto* complete = gen_cmd->add_flag("--complete", gen.complete, "Keep every pair (default)");
  gen_cmd->add_option("--pair-fraction", gen.pair_fraction, "Keep this fraction of all pairs")
      ->check(CLI::Range(0.0, 1.0))
      ->excludes(complete);
  gen_cmd->add_option("--p-match", gen.p_match, "Mean p of same-entity pairs")->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_cmd->add_option("--p-nonmatch", gen.p_nonmatch, "Mean p of cross-entity pairs")->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_cmd->add_option("--jitter", gen.jitter, "Half-width of the uniform noise on p")->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_cmd->add_option("--new-cluster-prob", gen.new_cluster_prob, "Chance that a record starts a new entity")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compare the expected number of questions of labeling orders");
  eval_cmd->add_option("--instance", eval.instance, "Instance file (.json or .csv)")->required();
  eval_cmd->add_option("--strategies", eval.strategies,
                       "Comma-separated list of random:SEED, desc, asc, optimal, worst, explicit:FILE "
                       "(default desc,asc,random:<seed>)");
  eval_cmd->add_option("--method", eval.method, "Cost model; independence is a known-incorrect diagnostic")
      ->check(CLI::IsMember({"exact", "mc", "independence"}))
      ->capture_default_str();
  eval_cmd->add_option("--samples", eval.samples, "Monte-Carlo sample count (with --method mc, default 10000)")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", eval.out, "Also write JSON-lines results here");

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Replay a labeling session against a ground truth");
  sim_cmd->add_option("--instance", sim.instance, "Instance file (.json or .csv)")->required();
  sim_cmd->add_option("--truth", sim.truth, "Truth file")->required();
  sim_cmd->add_option("--strategy", sim.strategy, "Labeling order")->capture_default_str();
  sim_cmd->add_option("--trace-out", sim.trace_out, "Write the JSON-lines trace here");

  WorldsFlags worlds;
  auto* worlds_cmd = app.add_subcommand("worlds", "List the consistent label assignments and their probabilities");
  worlds_cmd->add_option("--instance", worlds.instance, "Instance file (.json or .csv)")->required();

  ServeFlags serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the labeling session HTTP service");
  serve_cmd->add_option("--port", serve.port, "TCP port")->required()->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", serve.host, "Address to bind")->capture_default_str();
  serve_cmd->add_option("--static-dir", serve.static_dir, "Serve web UI assets from this directory");
  serve_cmd->add_option("--persist-dir", serve.persist_dir, "Restore sessions from and save them to this directory");
  serve_cmd->add_option("--preload", serve.preload, "Extra named instance, NAME=FILE or FILE")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto logger = make_logger(err, g.quiet);
  spdlog::drop("eolo");
  spdlog::register_logger(logger);
  spdlog::set_default_logger(logger);

  try {
    if (eval_cmd->parsed() && eval.samples && eval.method != "mc") {
      throw UsageError("--samples only applies to --method mc");
    }
    if (*gen_cmd) return cmd_gen(gen, g, out);
    if (*eval_cmd) return cmd_eval(eval, g, out, err);
    if (*sim_cmd) return cmd_simulate(sim, g, out);
    if (*worlds_cmd) return cmd_worlds(worlds, g, out);
    if (*serve_cmd) return cmd_serve(serve, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return kExitUsage;
  } catch (const CapExceeded& e) {
    err << "error: " << cap_hint(e) << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace eolo::app
