#include <cstdio>
#include <unistd.h>

#include "common.hpp"
#include "haarboost/model_io.hpp"

namespace haarboost::cli {
namespace {

std::string default_id(const char* prefix) { return std::string(prefix) + "-" + std::to_string(::getpid()); }

struct MasterOptions {
  DataFlags data;
  TimeoutFlags timeouts;
  std::string listen;
  std::size_t expect = 0;
  int rounds = 0;
  std::size_t features = 0;
  std::string out;
};

struct SubmasterOptions {
  TimeoutFlags timeouts;
  std::string listen;
  std::string parent;
  std::size_t expect = 0;
  std::string id;
};

struct WorkerOptions {
  DataFlags data;
  TimeoutFlags timeouts;
  std::string parent;
  std::string id;
  std::size_t threads = 1;
  int crash_at_round = 0;
};

int run_master_role(const MasterOptions& o) {
  const Dataset data = o.data.load();
  MasterConfig cfg;
  cfg.expected_children = o.expect;
  cfg.feature_count = feature_limit(o.features);
  cfg.rounds = o.rounds;
  cfg.options = o.timeouts.options();
  cfg.on_round = progress_printer();
  auto listener = net::Listener::bind(net::Endpoint::parse(o.listen));
  std::fprintf(stderr, "master listening on %s, dataset hash %s\n", listener.endpoint().str().c_str(),
               hash_hex(data.content_hash()).c_str());
  const MasterResult r = run_master(listener, data, cfg);
  save_model(o.out, r.model);
  std::fprintf(stderr, "master: model written to %s\n", o.out.c_str());
  return 0;
}

int run_submaster_role(const SubmasterOptions& o) {
  SubmasterConfig cfg;
  cfg.node_id = o.id.empty() ? default_id("submaster") : o.id;
  cfg.parent = net::Endpoint::parse(o.parent);
  cfg.expected_workers = o.expect;
  cfg.options = o.timeouts.options();
  auto listener = net::Listener::bind(net::Endpoint::parse(o.listen));
  std::fprintf(stderr, "submaster %s listening on %s\n", cfg.node_id.c_str(), listener.endpoint().str().c_str());
  const RoleReport r = run_submaster(listener, cfg);
  std::fprintf(stderr, "submaster %s: done after %zu rounds\n", r.node.c_str(), r.timings.size());
  return 0;
}

int run_worker_role(const WorkerOptions& o) {
  const Dataset data = o.data.load();
  WorkerConfig cfg;
  cfg.node_id = o.id.empty() ? default_id("worker") : o.id;
  cfg.parent = net::Endpoint::parse(o.parent);
  cfg.worker_budget = o.threads;
  cfg.options = o.timeouts.options();
  cfg.crash_at_round = o.crash_at_round;
  const RoleReport r = run_worker(data, cfg);
  std::fprintf(stderr, "worker %s: done after %zu rounds\n", r.node.c_str(), r.timings.size());
  return 0;
}

}  // namespace

void register_role(CLI::App& app, Action& action) {
  auto* role = app.add_subcommand("role", "Run one node of a distributed training job");
  role->require_subcommand(1);

  auto m = std::make_shared<MasterOptions>();
  auto* master = role->add_subcommand("master", "Root node: runs boosting and writes the model");
  master->add_option("--listen", m->listen, "HOST:PORT to accept children on")->required();
  master->add_option("--expect", m->expect, "Number of direct children")->required()->check(CLI::PositiveNumber);
  m->data.add_to(*master);
  master->add_option("--rounds", m->rounds, "Boosting rounds T")->required()->check(CLI::Range(1, 100000));
  master->add_option("--features", m->features, "Scan only the first N features (default: all)");
  master->add_option("--out", m->out, "Model file to write")->required();
  m->timeouts.add_to(*master);
  master->callback([&action, m] { action = [m] { return run_master_role(*m); }; });

  auto s = std::make_shared<SubmasterOptions>();
  auto* sub = role->add_subcommand("submaster", "Middle node: splits its range over workers and reduces");
  sub->add_option("--listen", s->listen, "HOST:PORT to accept workers on")->required();
  sub->add_option("--parent", s->parent, "Master HOST:PORT")->required();
  sub->add_option("--expect", s->expect, "Number of workers")->required()->check(CLI::PositiveNumber);
  sub->add_option("--id", s->id, "Node id (default: submaster-PID)");
  s->timeouts.add_to(*sub);
  sub->callback([&action, s] { action = [s] { return run_submaster_role(*s); }; });

  auto w = std::make_shared<WorkerOptions>();
  auto* worker = role->add_subcommand("worker", "Leaf node: scans its assigned features each round");
  worker->add_option("--parent", w->parent, "Parent HOST:PORT")->required();
  w->data.add_to(*worker);
  worker->add_option("--id", w->id, "Node id (default: worker-PID)");
  worker->add_option("--threads", w->threads, "Scan threads")->check(CLI::PositiveNumber)->capture_default_str();
  worker->add_option("--crash-at-round", w->crash_at_round)->group("");
  w->timeouts.add_to(*worker);
  worker->callback([&action, w] { action = [w] { return run_worker_role(*w); }; });
}

}  // namespace haarboost::cli
