#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "haarboost/boosting.hpp"
#include "haarboost/dataset.hpp"
#include "haarboost/net.hpp"
#include "haarboost/wire.hpp"

namespace haarboost {

struct ClusterOptions {
  /// Connecting, HELLO and ASSIGN exchange.
  std::chrono::milliseconds handshake_timeout{30'000};
  /// Waiting for any per-round message.
  std::chrono::milliseconds round_timeout{600'000};
};

/// Timings one node recorded, one entry per round.
struct RoleReport {
  std::string node;
  RoleKind role = RoleKind::Worker;
  std::vector<PhaseTiming> timings;
};

struct MasterConfig {
  std::size_t expected_children = 5;
  /// Features [0, feature_count) are scanned; defaults to the full table.
  std::size_t feature_count = 0;
  int rounds = 1;
  ClusterOptions options;
  RoundCallback on_round;
};

struct MasterResult {
  StrongClassifier model;
  std::vector<PhaseTiming> timings;
  /// WEIGHTS-sent to BEST-received time per direct child, one entry per round.
  std::map<std::string, std::vector<double>> child_roundtrip_s;
};

/// Master-level ranges for `children` children: the five type ranges when there are five
/// children and all five types are in [0, feature_count), otherwise balanced chunks.
std::vector<FeatureRange> master_assignment(std::size_t children, std::size_t feature_count);

/// Accepts the expected children, assigns ranges (children ordered by node id), then runs the
/// boosting loop with a network executor and broadcasts MODEL. Any failure broadcasts ERROR and
/// throws ClusterError prefixed "master: ".
MasterResult run_master(net::Listener& listener, const Dataset& data, const MasterConfig& config);
MasterResult run_master(const net::Endpoint& listen, const Dataset& data, const MasterConfig& config);

struct SubmasterConfig {
  std::string node_id = "submaster";
  net::Endpoint parent;
  std::size_t expected_workers = 1;
  ClusterOptions options;
};

/// Splits its assigned range over its workers, relays WEIGHTS down and reduces BEST up.
/// Throws ClusterError prefixed "submaster <id>: ".
RoleReport run_submaster(net::Listener& listener, const SubmasterConfig& config);
RoleReport run_submaster(const net::Endpoint& listen, const SubmasterConfig& config);

struct WorkerConfig {
  std::string node_id = "worker";
  net::Endpoint parent;
  /// Threads used by the local parallel scan.
  std::size_t worker_budget = 1;
  ClusterOptions options;
  /// Test hook: SIGKILL this process on receiving WEIGHTS for this round (0 = never).
  int crash_at_round = 0;
};

/// Scans the assigned range every round and replies BEST. Throws ClusterError prefixed "worker <id>: ".
RoleReport run_worker(const Dataset& data, const WorkerConfig& config);

enum class Levels { OneLevel, TwoLevel };

struct Topology {
  Levels levels = Levels::OneLevel;
  /// OneLevel: workers under the master. TwoLevel: sub-masters under the master.
  std::size_t submasters = 5;
  /// TwoLevel only: workers per sub-master.
  std::size_t fanout = 1;

  static Topology one_level(std::size_t workers = 5) { return {Levels::OneLevel, workers, 1}; }
  static Topology two_level(std::size_t submasters = 5, std::size_t fanout = 1) {
    return {Levels::TwoLevel, submasters, fanout};
  }
  std::size_t worker_count() const { return levels == Levels::OneLevel ? submasters : submasters * fanout; }
  std::string label() const;
};

struct SimulateOptions {
  std::size_t feature_count = 0;
  std::size_t worker_budget = 1;
  ClusterOptions cluster;
  /// (node id, round) of a worker to SIGKILL mid-round.
  std::optional<std::pair<std::string, int>> crash;
  RoundCallback on_round;
};

struct SimulationResult {
  StrongClassifier model;
  MasterResult master;
  /// Every non-master node, ordered by node id.
  std::vector<RoleReport> children;
  double wall_s = 0.0;
};

/// Node ids used by simulate_local: OneLevel workers "w01".."wNN"; TwoLevel sub-masters
/// "s01".. with workers "s01.w01"...
std::vector<std::string> simulated_worker_ids(const Topology& topology);

/// Forks every non-master role as a local process over loopback and runs the master in the
/// calling process. Throws the master's ClusterError on failure after reaping all children.
SimulationResult simulate_local(const Topology& topology, const Dataset& data, int rounds,
                                const SimulateOptions& options = {});

}  // namespace haarboost
