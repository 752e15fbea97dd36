#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "haarboost/dataset.hpp"
#include "haarboost/features.hpp"

namespace haarboost {

/// Per-example weights w_{t,i}; index i matches Dataset order.
struct WeightVector {
  std::vector<double> w;
  int round = 1;
};

/// Decision stump h(x) = 1 iff p*f(x) < p*theta.
struct WeakClassifier {
  std::uint32_t feature_index = 0;
  double theta = 0.0;
  int polarity = 1;
  double error = 0.0;  // unclamped weighted error on the weights it was fit with

  int classify(double value) const { return polarity * value < polarity * theta ? 1 : 0; }

  friend bool operator==(const WeakClassifier&, const WeakClassifier&) = default;
};

/// Strict (error, feature_index) lexicographic order. Every reduction uses this.
inline bool better(const WeakClassifier& a, const WeakClassifier& b) {
  if (a.error != b.error) return a.error < b.error;
  return a.feature_index < b.feature_index;
}

struct RoundRecord {
  WeakClassifier weak;
  HaarFeature feature;
  double beta = 0.0;
  double alpha = 0.0;
};

struct StrongClassifier {
  std::vector<RoundRecord> rounds;
  int window = kWindow;

  /// Half the total vote weight.
  double threshold() const;
};

inline constexpr double kErrorClamp = 1e-10;

/// Clamps into [1e-10, 0.5 - 1e-10] so beta stays in (0, 1) and alpha finite.
double clamp_error(double error);
double beta_for(double error);
double alpha_for(double beta);

WeightVector init_weights(const DatasetStats& stats);

/// Divides by the total. Throws TrainingError("weight collapse") if the total is not positive.
WeightVector normalize(WeightVector w);

/// Optimal stump over all thresholds and both polarities by sort-and-scan. Thresholds sit at
/// midpoints between adjacent distinct values, plus one below the minimum and one above the
/// maximum; ties go to the smaller threshold, then to polarity +1. feature_index is left 0.
WeakClassifier train_stump(std::span<const double> values, std::span<const std::uint8_t> labels,
                           std::span<const double> weights);

/// Argmin over a contiguous range of feature indices by (error, feature_index).
WeakClassifier best_over_range(FeatureRange range, const Dataset& data, const WeightVector& w,
                               const FeatureTable& table = standard_features());

/// Feature value of every example, in dataset order.
std::vector<std::int64_t> feature_values(const HaarFeature& f, const Dataset& data);

/// Multiplies the weight of every correctly classified example by beta_t. Not normalized.
/// Throws TrainingError if weak.error >= 0.5.
WeightVector update_weights(const WeightVector& w, const WeakClassifier& weak, const Dataset& data,
                            const FeatureTable& table = standard_features());

/// Sum of w_i over examples the stump gets wrong, accumulated in index order.
double weighted_error(const WeakClassifier& weak, const Dataset& data, const WeightVector& w,
                      const FeatureTable& table = standard_features());

struct PhaseTiming {
  int round = 0;
  double normalize_s = 0.0;
  double scan_s = 0.0;
  double reduce_s = 0.0;
  double update_s = 0.0;

  double total() const { return normalize_s + scan_s + reduce_s + update_s; }
};

/// Strategy that finds the round's best stump for a given weight vector.
class RoundExecutor {
 public:
  virtual ~RoundExecutor() = default;
  /// Implementations fill timing.scan_s and timing.reduce_s.
  virtual WeakClassifier best(const WeightVector& w, PhaseTiming& timing) = 0;
  virtual std::string name() const = 0;
};

class SequentialExecutor final : public RoundExecutor {
 public:
  SequentialExecutor(const Dataset& data, FeatureRange range, const FeatureTable& table = standard_features());

  WeakClassifier best(const WeightVector& w, PhaseTiming& timing) override;
  std::string name() const override { return "seq"; }

 private:
  const Dataset& data_;
  FeatureRange range_;
  const FeatureTable& table_;
};

struct TrainResult {
  StrongClassifier model;
  std::vector<PhaseTiming> timings;
};

using RoundCallback = std::function<void(const RoundRecord&, const PhaseTiming&)>;

/// normalize -> executor.best -> (beta, alpha) -> update, T times.
TrainResult train(const Dataset& data, int rounds, RoundExecutor& executor, const RoundCallback& on_round = {},
                  const FeatureTable& table = standard_features());

int classify(const StrongClassifier& sc, const IntegralImage& ii);

/// Fraction of examples the strong classifier mislabels.
double training_error(const StrongClassifier& sc, const Dataset& data);

}  // namespace haarboost
