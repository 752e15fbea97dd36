#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace haarboost::perf {

/// Round time of the last hierarchy level: comm_s_per_node * n + compute_s_per_feature * (m / n).
struct PredictiveModelInput {
  double n = 1;  // nodes attached to one sub-master
  double m = 1;  // maximum features allocated to one sub-master
  double comm_s_per_node = 0.2;
  double compute_s_per_feature = 0.5 / 1000.0;
};

/// Largest single feature type: the feature load of one sub-master under by-type assignment.
inline constexpr double kLargestTypeCount = 43'200;

double predict_round_time(const PredictiveModelInput& in);

struct Fanout {
  double stationary = 0;  // sqrt(compute * m / comm)
  std::size_t best = 1;   // integer n >= 1 with the lowest predicted time, ties to smaller n
};

/// `in.n` is ignored.
Fanout optimal_fanout(const PredictiveModelInput& in);

struct Measurement {
  double n = 0;
  double m = 0;
  double seconds = 0;
};

/// Least-squares fit of seconds = a*n + b*(m/n). Returns the input with n = m = 1 and the fitted
/// coefficients. Throws std::invalid_argument("insufficiently varied measurements") when fewer
/// than two measurements are given or the two regressors are collinear.
PredictiveModelInput fit_coefficients(const std::vector<Measurement>& measurements);

/// Residual sum of squares of a fitted model over the measurements.
double residual_ss(const PredictiveModelInput& fitted, const std::vector<Measurement>& measurements);

struct SpeedupRecord {
  std::string label;
  double upload_s = 0;
  double round_s = 0;
  double speedup = 0;
};

struct ConfigTiming {
  std::string label;
  double upload_s = 0;
  double round_s = 0;  // average seconds per boosting round
};

/// speedup = baseline round_s / config round_s. Throws std::invalid_argument if `baseline`
/// is not among the labels or any round time is not positive.
std::vector<SpeedupRecord> speedup_report(const std::vector<ConfigTiming>& timings, const std::string& baseline);

/// Aligned text table: configuration, upload time, average round time, speed-up (one decimal).
std::string render_table(const std::vector<SpeedupRecord>& records, const std::string& baseline);

/// CSV with header "label,upload_s,round_s,speedup"; full precision.
std::string render_csv(const std::vector<SpeedupRecord>& records);

}  // namespace haarboost::perf
