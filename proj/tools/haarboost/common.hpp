#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "haarboost/boosting.hpp"
#include "haarboost/cluster.hpp"
#include "haarboost/dataset.hpp"

namespace haarboost::cli {

/// Bad flag combination detected after parsing; exits with status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Action = std::function<int()>;

/// --pos/--neg or --synth SEED,L,M [--contrast MIN,MAX].
struct DataFlags {
  std::string pos;
  std::string neg;
  std::vector<std::uint64_t> synth;
  std::vector<int> contrast;

  void add_to(CLI::App& app);
  Dataset load() const;
  std::vector<LabeledImage> synth_images() const;
};

struct TimeoutFlags {
  double handshake_s = 30;
  double round_s = 600;

  void add_to(CLI::App& app);
  ClusterOptions options() const;
};

/// Validated prefix length; 0 selects the whole table.
std::uint32_t feature_limit(std::size_t requested);

/// "round 3 feature 1234 error 0.1234 alpha 1.23 seconds 0.456" on stderr.
RoundCallback progress_printer();

double seconds_since(std::chrono::steady_clock::time_point start);

void register_train(CLI::App& app, Action& action);
void register_role(CLI::App& app, Action& action);
void register_classify(CLI::App& app, Action& action);
void register_features(CLI::App& app, Action& action);
void register_bench(CLI::App& app, Action& action);
void register_synth(CLI::App& app, Action& action);

}  // namespace haarboost::cli
