#include <algorithm>
#include <cstdio>
#include <thread>

#include "common.hpp"
#include "haarboost/engine.hpp"
#include "haarboost/model_io.hpp"

namespace haarboost::cli {
namespace {

struct TrainOptions {
  DataFlags data;
  TimeoutFlags timeouts;
  int rounds = 0;
  std::string mode = "seq";
  std::size_t workers = 0;
  std::string topology = "one";
  std::size_t fanout = 1;
  bool simulate = false;
  std::string listen;
  std::size_t expect = 0;
  std::size_t features = 0;
  std::string partition = "type";
  std::size_t worker_threads = 1;
  std::string out;
};

int run_train(const TrainOptions& o) {
  const bool cluster = o.mode == "cluster";
  if (!cluster && (o.simulate || !o.listen.empty() || o.expect != 0)) {
    throw UsageError("--simulate, --listen and --expect apply to --mode cluster only");
  }
  if (cluster && !o.simulate && (o.listen.empty() || o.expect == 0)) {
    throw UsageError("--mode cluster requires --simulate, or --listen ADDR together with --expect N");
  }
  if (cluster && o.simulate && !o.listen.empty()) throw UsageError("--simulate and --listen are mutually exclusive");

  const Dataset data = o.data.load();
  const std::uint32_t limit = feature_limit(o.features);
  std::fprintf(stderr, "dataset %s: %zu positives, %zu negatives, hash %s\n", data.source().c_str(),
               data.stats().positives, data.stats().negatives, hash_hex(data.content_hash()).c_str());

  StrongClassifier model;
  if (o.mode == "seq") {
    SequentialExecutor seq(data, {0, limit});
    model = train(data, o.rounds, seq, progress_printer()).model;
  } else if (o.mode == "par") {
    const std::size_t budget = o.workers ? o.workers : std::max(1u, std::thread::hardware_concurrency());
    const FeaturePartition p = o.partition == "type" ? partition(limit, PartitionScheme::ByType)
                                                     : partition(limit, PartitionScheme::ByChunk, budget);
    ParallelExecutor par(data, p, budget);
    model = train(data, o.rounds, par, progress_printer()).model;
  } else if (o.simulate) {
    const std::size_t k = o.workers ? o.workers : 5;
    const Topology topo = o.topology == "one" ? Topology::one_level(k) : Topology::two_level(k, o.fanout);
    SimulateOptions so;
    so.feature_count = limit;
    so.worker_budget = o.worker_threads;
    so.cluster = o.timeouts.options();
    so.on_round = progress_printer();
    const SimulationResult r = simulate_local(topo, data, o.rounds, so);
    std::fprintf(stderr, "simulated %s: wall %.3f s\n", topo.label().c_str(), r.wall_s);
    model = r.model;
  } else {
    MasterConfig cfg;
    cfg.expected_children = o.expect;
    cfg.feature_count = limit;
    cfg.rounds = o.rounds;
    cfg.options = o.timeouts.options();
    cfg.on_round = progress_printer();
    auto listener = net::Listener::bind(net::Endpoint::parse(o.listen));
    std::fprintf(stderr, "master listening on %s\n", listener.endpoint().str().c_str());
    model = run_master(listener, data, cfg).model;
  }

  save_model(o.out, model);
  std::fprintf(stderr, "training error %.6f; model written to %s\n", training_error(model, data), o.out.c_str());
  return 0;
}

}  // namespace

void register_train(CLI::App& app, Action& action) {
  auto opts = std::make_shared<TrainOptions>();
  auto* sub = app.add_subcommand("train", "Train a boosted classifier");
  opts->data.add_to(*sub);
  sub->add_option("--rounds", opts->rounds, "Boosting rounds T")->required()->check(CLI::Range(1, 100000));
  sub->add_option("--mode", opts->mode, "seq, par or cluster")
      ->check(CLI::IsMember({"seq", "par", "cluster"}))
      ->capture_default_str();
  sub->add_option("--workers", opts->workers,
                  "par: worker threads (default: all cores); cluster: workers (one) or sub-masters (two), default 5")
      ->check(CLI::PositiveNumber);
  sub->add_option("--topology", opts->topology, "Simulated cluster shape: one or two levels")
      ->check(CLI::IsMember({"one", "two"}))
      ->capture_default_str();
  sub->add_option("--fanout", opts->fanout, "Workers per sub-master (two levels)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_flag("--simulate", opts->simulate, "Run every cluster role as a local process");
  sub->add_option("--listen", opts->listen, "Run as cluster master on HOST:PORT and wait for external roles");
  sub->add_option("--expect", opts->expect, "Children the master waits for")->check(CLI::PositiveNumber);
  sub->add_option("--features", opts->features, "Scan only the first N features (default: all)");
  sub->add_option("--partition", opts->partition, "par: group features by type or into equal chunks")
      ->check(CLI::IsMember({"type", "chunk"}))
      ->capture_default_str();
  sub->add_option("--worker-threads", opts->worker_threads, "Threads per simulated worker")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  opts->timeouts.add_to(*sub);
  sub->add_option("--out", opts->out, "Model file to write")->required();
  sub->callback([&action, opts] { action = [opts] { return run_train(*opts); }; });
}

}  // namespace haarboost::cli
