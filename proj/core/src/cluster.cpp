#include "haarboost/cluster.hpp"

#include <signal.h>

#include <algorithm>
#include <set>

#include "haarboost/engine.hpp"

namespace haarboost {

using net::Clock;
using net::LineChannel;

namespace {

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Peer {
  std::string node;
  RoleKind role = RoleKind::Worker;
  LineChannel channel;
  FeatureRange range;
};

/// Accepts `expected` peers that each open with HELLO into `peers`, ordered by node id afterwards.
/// Peers accepted before a failure stay in `peers` so the caller can notify them.
void accept_children(net::Listener& listener, std::size_t expected, RoleKind allowed_a, RoleKind allowed_b,
                     net::Deadline deadline, std::vector<Peer>& peers) {
  std::set<std::string> seen;
  auto missing = [&] {
    return ClusterError("timed out waiting for children: " + std::to_string(peers.size()) + " of " +
                        std::to_string(expected) + " connected, " + std::to_string(expected - peers.size()) +
                        " missing");
  };
  while (peers.size() < expected) {
    Peer p;
    try {
      p.channel = LineChannel(listener.accept(deadline));
      const ClusterMessage msg = decode(p.channel.recv(deadline));
      const auto* hello = std::get_if<HelloMsg>(&msg);
      if (!hello) throw ProtocolError("expected HELLO, got " + std::string(message_type(msg)));
      if (hello->role != allowed_a && hello->role != allowed_b) {
        throw ProtocolError("unexpected child role " + std::string(to_string(hello->role)));
      }
      if (!seen.insert(hello->node).second) throw ProtocolError("duplicate node id \"" + hello->node + "\"");
      p.node = hello->node;
      p.role = hello->role;
    } catch (const net::TimeoutError&) {
      throw missing();
    }
    peers.push_back(std::move(p));
  }
  std::sort(peers.begin(), peers.end(), [](const Peer& a, const Peer& b) { return a.node < b.node; });
}

void broadcast_error(std::vector<Peer>& peers, const std::string& node, const std::string& message) {
  const std::string line = encode(ErrorMsg{node, message});
  for (auto& p : peers) {
    try {
      p.channel.send(line);
    } catch (const std::exception&) {
      // Peer already gone.
    }
  }
}

/// Sends one line to every peer and collects one decoded BEST per peer for `round`,
/// in peer order. `roundtrip` receives per-peer latency.
std::vector<WeakClassifier> exchange_round(std::vector<Peer>& peers, const std::string& weights_line, int round,
                              net::Deadline deadline, std::vector<double>& roundtrip) {
  std::vector<LineChannel*> channels;
  std::vector<std::string> names;
  std::vector<Clock::time_point> sent(peers.size());
  for (std::size_t i = 0; i < peers.size(); ++i) {
    peers[i].channel.send(weights_line);
    sent[i] = Clock::now();
    channels.push_back(&peers[i].channel);
    names.push_back(peers[i].node);
  }
  roundtrip.assign(peers.size(), 0.0);
  std::vector<WeakClassifier> results(peers.size());
  net::gather(channels, names, deadline, [&](std::size_t i, std::string line) {
    roundtrip[i] = seconds_since(sent[i]);
    const ClusterMessage msg = decode(line);
    if (const auto* err = std::get_if<ErrorMsg>(&msg)) {
      throw ClusterError(peers[i].node + " reported: " + err->message);
    }
    const auto* best = std::get_if<BestMsg>(&msg);
    if (!best) throw ProtocolError("expected BEST from " + peers[i].node + ", got " + std::string(message_type(msg)));
    if (best->round != round) {
      throw ProtocolError("stale BEST from " + peers[i].node + ": round " + std::to_string(best->round) +
                          " received during round " + std::to_string(round));
    }
    const std::uint32_t f = best->weak.feature_index;
    if (f < peers[i].range.begin || f >= peers[i].range.end) {
      throw ProtocolError("BEST from " + peers[i].node + " names feature " + std::to_string(f) +
                          " outside its assigned range");
    }
    results[i] = best->weak;
  });
  return results;
}

WeakClassifier reduce_best(const std::vector<WeakClassifier>& results) {
  WeakClassifier out = results.at(0);
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (better(results[i], out)) out = results[i];
  }
  return out;
}

class NetworkExecutor final : public RoundExecutor {
 public:
  NetworkExecutor(std::vector<Peer>& peers, const ClusterOptions& options, MasterResult& result)
      : peers_(peers), options_(options), result_(result) {}

  WeakClassifier best(const WeightVector& w, PhaseTiming& timing) override {
    auto start = Clock::now();
    std::vector<double> roundtrip;
    const std::string line = encode(WeightsMsg{w.round, w.w});
    const auto results = exchange_round(peers_, line, w.round, net::deadline_in(options_.round_timeout), roundtrip);
    timing.scan_s = seconds_since(start);
    start = Clock::now();
    const WeakClassifier out = reduce_best(results);
    timing.reduce_s = seconds_since(start);
    for (std::size_t i = 0; i < peers_.size(); ++i) result_.child_roundtrip_s[peers_[i].node].push_back(roundtrip[i]);
    return out;
  }
  std::string name() const override { return "cluster"; }

 private:
  std::vector<Peer>& peers_;
  const ClusterOptions& options_;
  MasterResult& result_;
};

}  // namespace

std::vector<FeatureRange> master_assignment(std::size_t children, std::size_t feature_count) {
  if (children == 5) {
    const FeaturePartition by_type = partition(feature_count, PartitionScheme::ByType);
    if (by_type.groups.size() == 5) return by_type.groups;
  }
  return split_range({0, static_cast<std::uint32_t>(feature_count)}, children);
}

MasterResult run_master(net::Listener& listener, const Dataset& data, const MasterConfig& config) {
  const FeatureTable& table = standard_features();
  std::vector<Peer> peers;
  try {
    const std::size_t feature_count = config.feature_count ? config.feature_count : table.size();
    if (feature_count > table.size()) throw ClusterError("feature count exceeds the feature table");
    if (config.expected_children < 1) throw ClusterError("at least one child is required");
    if (config.expected_children > feature_count) throw ClusterError("more children than features");
    if (config.rounds < 1) throw ClusterError("rounds must be at least 1");

    accept_children(listener, config.expected_children, RoleKind::SubMaster, RoleKind::Worker,
                    net::deadline_in(config.options.handshake_timeout), peers);
    const auto ranges = master_assignment(peers.size(), feature_count);
    for (std::size_t i = 0; i < peers.size(); ++i) {
      peers[i].range = ranges[i];
      peers[i].channel.send(encode(AssignMsg{ranges[i], data.content_hash()}));
    }

    MasterResult result;
    NetworkExecutor executor(peers, config.options, result);
    TrainResult trained = train(data, config.rounds, executor, config.on_round, table);
    result.model = std::move(trained.model);
    result.timings = std::move(trained.timings);

    const std::string model_line = encode(ModelMsg{result.model});
    for (auto& p : peers) p.channel.send(model_line);
    return result;
  } catch (const std::exception& e) {
    broadcast_error(peers, "master", e.what());
    throw ClusterError(std::string("master: ") + e.what());
  }
}

MasterResult run_master(const net::Endpoint& listen, const Dataset& data, const MasterConfig& config) {
  net::Listener listener;
  try {
    listener = net::Listener::bind(listen);
  } catch (const std::exception& e) {
    throw ClusterError(std::string("master: ") + e.what());
  }
  return run_master(listener, data, config);
}

RoleReport run_submaster(net::Listener& listener, const SubmasterConfig& config) {
  RoleReport report{config.node_id, RoleKind::SubMaster, {}};
  LineChannel up;
  std::vector<Peer> workers;
  bool upstream_abort = false;
  try {
    const auto handshake = net::deadline_in(config.options.handshake_timeout);
    up = LineChannel(net::connect_to(config.parent, handshake));
    up.send(encode(HelloMsg{RoleKind::SubMaster, config.node_id}));
    accept_children(listener, config.expected_workers, RoleKind::Worker, RoleKind::Worker, handshake, workers);

    ClusterMessage msg = decode(up.recv(handshake));
    if (const auto* err = std::get_if<ErrorMsg>(&msg)) {
      upstream_abort = true;
      throw ClusterError("aborted by " + err->node + ": " + err->message);
    }
    const auto* assign = std::get_if<AssignMsg>(&msg);
    if (!assign) throw ProtocolError("expected ASSIGN, got " + std::string(message_type(msg)));
    const auto ranges = split_range(assign->range, workers.size());
    for (std::size_t i = 0; i < workers.size(); ++i) {
      workers[i].range = ranges[i];
      workers[i].channel.send(encode(AssignMsg{ranges[i], assign->dataset_hash}));
    }

    for (int round = 1;; ++round) {
      const std::string line = up.recv(net::deadline_in(config.options.round_timeout));
      msg = decode(line);
      if (std::holds_alternative<ModelMsg>(msg)) {
        for (auto& w : workers) w.channel.send(line);
        break;
      }
      if (const auto* err = std::get_if<ErrorMsg>(&msg)) {
        upstream_abort = true;
        throw ClusterError("aborted by " + err->node + ": " + err->message);
      }
      const auto* weights = std::get_if<WeightsMsg>(&msg);
      if (!weights) throw ProtocolError("expected WEIGHTS, got " + std::string(message_type(msg)));
      if (weights->round != round) {
        throw ProtocolError("round mismatch: WEIGHTS for round " + std::to_string(weights->round) + ", expected " +
                            std::to_string(round));
      }
      PhaseTiming timing;
      timing.round = round;
      const auto start = Clock::now();
      std::vector<double> roundtrip;
      const auto results =
          exchange_round(workers, line, round, net::deadline_in(config.options.round_timeout), roundtrip);
      timing.scan_s = seconds_since(start);
      const auto reduce_start = Clock::now();
      const WeakClassifier best = reduce_best(results);
      timing.reduce_s = seconds_since(reduce_start);
      up.send(encode(BestMsg{round, best}));
      report.timings.push_back(timing);
    }
    return report;
  } catch (const std::exception& e) {
    const std::string tag = "submaster " + config.node_id;
    broadcast_error(workers, config.node_id, e.what());
    if (!upstream_abort && up.fd() >= 0) {
      try {
        up.send(encode(ErrorMsg{config.node_id, e.what()}));
      } catch (const std::exception&) {
      }
    }
    throw ClusterError(tag + ": " + e.what());
  }
}

RoleReport run_submaster(const net::Endpoint& listen, const SubmasterConfig& config) {
  net::Listener listener;
  try {
    listener = net::Listener::bind(listen);
  } catch (const std::exception& e) {
    throw ClusterError("submaster " + config.node_id + ": " + e.what());
  }
  return run_submaster(listener, config);
}

RoleReport run_worker(const Dataset& data, const WorkerConfig& config) {
  RoleReport report{config.node_id, RoleKind::Worker, {}};
  LineChannel up;
  bool upstream_abort = false;
  try {
    const auto handshake = net::deadline_in(config.options.handshake_timeout);
    up = LineChannel(net::connect_to(config.parent, handshake));
    up.send(encode(HelloMsg{RoleKind::Worker, config.node_id}));

    ClusterMessage msg = decode(up.recv(handshake));
    if (const auto* err = std::get_if<ErrorMsg>(&msg)) {
      upstream_abort = true;
      throw ClusterError("aborted by " + err->node + ": " + err->message);
    }
    const auto* assign = std::get_if<AssignMsg>(&msg);
    if (!assign) throw ProtocolError("expected ASSIGN, got " + std::string(message_type(msg)));
    if (assign->dataset_hash != data.content_hash()) {
      throw ClusterError("dataset hash mismatch: parent expects " + hash_hex(assign->dataset_hash) +
                         ", local dataset is " + hash_hex(data.content_hash()));
    }
    const FeatureRange range = assign->range;
    if (range.end > standard_features().size()) throw ProtocolError("ASSIGN range exceeds the feature table");
    const std::size_t groups = std::min<std::size_t>(std::max<std::size_t>(config.worker_budget, 1), range.size());
    const FeaturePartition local{PartitionScheme::ByChunk, split_range(range, groups)};

    for (int round = 1;; ++round) {
      msg = decode(up.recv(net::deadline_in(config.options.round_timeout)));
      if (std::holds_alternative<ModelMsg>(msg)) break;
      if (const auto* err = std::get_if<ErrorMsg>(&msg)) {
        upstream_abort = true;
        throw ClusterError("aborted by " + err->node + ": " + err->message);
      }
      const auto* weights = std::get_if<WeightsMsg>(&msg);
      if (!weights) throw ProtocolError("expected WEIGHTS, got " + std::string(message_type(msg)));
      if (weights->round != round) {
        throw ProtocolError("round mismatch: WEIGHTS for round " + std::to_string(weights->round) + ", expected " +
                            std::to_string(round));
      }
      if (weights->weights.size() != data.size()) {
        throw ProtocolError("WEIGHTS carries " + std::to_string(weights->weights.size()) + " weights for " +
                            std::to_string(data.size()) + " examples");
      }
      if (config.crash_at_round == round) ::raise(SIGKILL);

      PhaseTiming timing;
      timing.round = round;
      const auto start = Clock::now();
      const WeakClassifier best =
          parallel_best(local, data, WeightVector{weights->weights, round}, config.worker_budget);
      timing.scan_s = seconds_since(start);
      up.send(encode(BestMsg{round, best}));
      report.timings.push_back(timing);
    }
    return report;
  } catch (const std::exception& e) {
    if (!upstream_abort && up.fd() >= 0) {
      try {
        up.send(encode(ErrorMsg{config.node_id, e.what()}));
      } catch (const std::exception&) {
      }
    }
    throw ClusterError("worker " + config.node_id + ": " + e.what());
  }
}

std::string Topology::label() const {
  if (levels == Levels::OneLevel) return "one-level(" + std::to_string(submasters) + ")";
  return "two-level(" + std::to_string(submasters) + "x" + std::to_string(fanout) + ")";
}

}  // namespace haarboost
