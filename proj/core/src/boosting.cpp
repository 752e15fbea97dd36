#include "haarboost/boosting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "haarboost/error.hpp"
#include "stump_scan.hpp"

namespace haarboost {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Packs (value, index) into one sortable key. Feature values on a 24x24 window are far below 2^40.
constexpr int kIndexBits = 20;

}  // namespace

namespace detail {

std::optional<WeakClassifier> fit_sorted(StumpScratch& s, std::span<const std::uint8_t> labels,
                                         std::span<const double> weights, double prune_above) {
  const std::size_t n = s.order.size();
  const auto& v = s.values;

  double total_pos = 0.0;
  double total_neg = 0.0;
  for (std::size_t i = 0; i < n; ++i) (labels[i] ? total_pos : total_neg) += weights[i];
  const double slack = 1e-9 * (total_pos + total_neg);

  auto theta_at = [&](std::size_t k) {
    if (k == 0) {
      const double lo = v[s.order[0]];
      const double t = lo - 1.0;
      return t < lo ? t : std::nextafter(lo, -std::numeric_limits<double>::infinity());
    }
    if (k == n) {
      const double hi = v[s.order[n - 1]];
      const double t = hi + 1.0;
      return t > hi ? t : std::nextafter(hi, std::numeric_limits<double>::infinity());
    }
    return 0.5 * (v[s.order[k - 1]] + v[s.order[k]]);
  };

  // Pass 1: prefix-sum error at every boundary k (first k sorted examples fall below theta).
  // polarity +1 labels the low side positive, polarity -1 the high side.
  double best_prefix = std::numeric_limits<double>::infinity();
  {
    double below_pos = 0.0;
    double below_neg = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      if (k > 0) {
        const std::uint32_t i = s.order[k - 1];
        (labels[i] ? below_pos : below_neg) += weights[i];
      }
      if (k == 0 || k == n || v[s.order[k - 1]] < v[s.order[k]]) {
        best_prefix = std::min(best_prefix, below_neg + (total_pos - below_pos));
        best_prefix = std::min(best_prefix, below_pos + (total_neg - below_neg));
      }
    }
  }
  if (best_prefix > prune_above + slack) return std::nullopt;

  // Pass 2: boundaries within slack of the minimum; candidate code = 2*k + (polarity == -1).
  s.near_best.clear();
  {
    double below_pos = 0.0;
    double below_neg = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      if (k > 0) {
        const std::uint32_t i = s.order[k - 1];
        (labels[i] ? below_pos : below_neg) += weights[i];
      }
      if (k == 0 || k == n || v[s.order[k - 1]] < v[s.order[k]]) {
        if (below_neg + (total_pos - below_pos) <= best_prefix + slack) {
          s.near_best.push_back(static_cast<std::uint32_t>(2 * k));
        }
        if (below_pos + (total_neg - below_neg) <= best_prefix + slack) {
          s.near_best.push_back(static_cast<std::uint32_t>(2 * k + 1));
        }
      }
    }
  }

  // Exact pass: recompute each near-best candidate's error in example order, so the result equals
  // the direct weighted sum regardless of how the prefix sums rounded.
  WeakClassifier best;
  best.error = std::numeric_limits<double>::infinity();
  for (std::uint32_t code : s.near_best) {
    WeakClassifier c;
    c.theta = theta_at(code / 2);
    c.polarity = (code % 2) ? -1 : 1;
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (c.classify(v[i]) != labels[i]) err += weights[i];
    }
    c.error = err;
    if (err < best.error) best = c;
  }
  return best;
}

}  // namespace detail

double StrongClassifier::threshold() const {
  double sum = 0.0;
  for (const auto& r : rounds) sum += r.alpha;
  return 0.5 * sum;
}

double clamp_error(double error) { return std::clamp(error, kErrorClamp, 0.5 - kErrorClamp); }

double beta_for(double error) {
  const double e = clamp_error(error);
  return e / (1.0 - e);
}

double alpha_for(double beta) { return std::log(1.0 / beta); }

WeightVector init_weights(const DatasetStats& stats) {
  if (stats.positives == 0 || stats.negatives == 0) {
    throw TrainingError("weight initialization needs at least one positive and one negative");
  }
  WeightVector out;
  out.w.reserve(stats.total());
  out.w.insert(out.w.end(), stats.positives, 1.0 / (2.0 * static_cast<double>(stats.positives)));
  out.w.insert(out.w.end(), stats.negatives, 1.0 / (2.0 * static_cast<double>(stats.negatives)));
  out.round = 1;
  return out;
}

WeightVector normalize(WeightVector w) {
  double total = 0.0;
  for (double x : w.w) total += x;
  if (!(total > 0.0) || !std::isfinite(total)) throw TrainingError("weight collapse: total weight is not positive");
  for (double& x : w.w) x /= total;
  return w;
}

WeakClassifier train_stump(std::span<const double> values, std::span<const std::uint8_t> labels,
                           std::span<const double> weights) {
  const std::size_t n = values.size();
  if (n < 2 || labels.size() != n || weights.size() != n) {
    throw std::invalid_argument("train_stump: need n >= 2 and equally sized values, labels, weights");
  }
  const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
  if (!has_pos || !has_neg) throw std::invalid_argument("train_stump: both labels must be present");

  detail::StumpScratch s;
  s.values.assign(values.begin(), values.end());
  s.order.resize(n);
  std::iota(s.order.begin(), s.order.end(), 0u);
  std::sort(s.order.begin(), s.order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return values[a] != values[b] ? values[a] < values[b] : a < b;
  });
  return *detail::fit_sorted(s, labels, weights);
}

std::vector<std::int64_t> feature_values(const HaarFeature& f, const Dataset& data) {
  std::vector<std::int64_t> out;
  out.reserve(data.size());
  for (const auto& e : data.examples()) out.push_back(evaluate(f, e.x));
  return out;
}

WeakClassifier best_over_range(FeatureRange range, const Dataset& data, const WeightVector& w,
                               const FeatureTable& table) {
  if (range.empty() || range.end > table.size()) {
    throw std::invalid_argument("best_over_range: empty or out-of-table feature range");
  }
  const std::size_t n = data.size();
  if (w.w.size() != n) throw std::invalid_argument("best_over_range: weight vector size mismatch");
  if (n >= (std::size_t{1} << kIndexBits)) throw std::invalid_argument("best_over_range: too many examples");

  std::vector<const std::uint32_t*> sums(n);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    sums[i] = data[i].x.sums().data();
    labels[i] = data[i].y;
  }

  detail::StumpScratch s;
  s.values.resize(n);
  s.order.resize(n);
  s.keys.resize(n);

  WeakClassifier best;
  best.error = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::uint32_t f = range.begin; f < range.end; ++f) {
    const FeatureKernel& k = table.kernel(f);
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t v = k.apply(sums[i]);
      s.values[i] = static_cast<double>(v);
      s.keys[i] = v * (std::int64_t{1} << kIndexBits) + static_cast<std::int64_t>(i);
    }
    std::sort(s.keys.begin(), s.keys.end());
    for (std::size_t i = 0; i < n; ++i) {
      s.order[i] = static_cast<std::uint32_t>(s.keys[i] & ((std::int64_t{1} << kIndexBits) - 1));
    }
    auto fit = detail::fit_sorted(s, labels, w.w, best.error);
    if (!fit) continue;
    fit->feature_index = f;
    if (!found || better(*fit, best)) {
      best = *fit;
      found = true;
    }
  }
  return best;
}

double weighted_error(const WeakClassifier& weak, const Dataset& data, const WeightVector& w,
                      const FeatureTable& table) {
  const FeatureKernel& k = table.kernel(weak.feature_index);
  double err = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = static_cast<double>(k.apply(data[i].x.sums().data()));
    if (weak.classify(v) != data[i].y) err += w.w[i];
  }
  return err;
}

WeightVector update_weights(const WeightVector& w, const WeakClassifier& weak, const Dataset& data,
                            const FeatureTable& table) {
  if (!(weak.error < 0.5)) {
    std::ostringstream os;
    os << "weak learner no better than chance (error " << weak.error << ")";
    throw TrainingError(os.str());
  }
  if (weak.feature_index >= table.size()) throw std::invalid_argument("update_weights: feature index out of table");
  const double beta = beta_for(weak.error);
  const FeatureKernel& k = table.kernel(weak.feature_index);
  WeightVector out = w;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = static_cast<double>(k.apply(data[i].x.sums().data()));
    if (weak.classify(v) == data[i].y) out.w[i] *= beta;
  }
  return out;
}

SequentialExecutor::SequentialExecutor(const Dataset& data, FeatureRange range, const FeatureTable& table)
    : data_(data), range_(range), table_(table) {}

WeakClassifier SequentialExecutor::best(const WeightVector& w, PhaseTiming& timing) {
  const auto start = Clock::now();
  WeakClassifier out = best_over_range(range_, data_, w, table_);
  timing.scan_s = seconds_since(start);
  return out;
}

namespace {

[[noreturn]] void rethrow_with_round(const Error& e, int round) {
  const std::string msg = "round " + std::to_string(round) + ": " + e.what();
  if (dynamic_cast<const ClusterError*>(&e)) throw ClusterError(msg);
  if (dynamic_cast<const ProtocolError*>(&e)) throw ProtocolError(msg);
  if (dynamic_cast<const LoadError*>(&e)) throw LoadError(msg);
  throw TrainingError(msg);
}

}  // namespace

TrainResult train(const Dataset& data, int rounds, RoundExecutor& executor, const RoundCallback& on_round,
                  const FeatureTable& table) {
  if (rounds < 1) throw std::invalid_argument("train: rounds must be at least 1");
  TrainResult result;
  WeightVector w = init_weights(data.stats());
  for (int t = 1; t <= rounds; ++t) {
    PhaseTiming timing;
    timing.round = t;
    try {
      auto start = Clock::now();
      w = normalize(std::move(w));
      w.round = t;
      timing.normalize_s = seconds_since(start);

      const WeakClassifier weak = executor.best(w, timing);

      start = Clock::now();
      RoundRecord rec;
      rec.weak = weak;
      rec.feature = table[weak.feature_index];
      rec.beta = beta_for(weak.error);
      rec.alpha = alpha_for(rec.beta);
      w = update_weights(w, weak, data, table);
      timing.update_s = seconds_since(start);

      result.model.rounds.push_back(rec);
      result.timings.push_back(timing);
      if (on_round) on_round(rec, timing);
    } catch (const Error& e) {
      rethrow_with_round(e, t);
    }
  }
  result.model.window = table.window();
  return result;
}

int classify(const StrongClassifier& sc, const IntegralImage& ii) {
  if (ii.width() != sc.window || ii.height() != sc.window) {
    throw std::invalid_argument("classify: expected " + std::to_string(sc.window) + "x" +
                                std::to_string(sc.window) + " image");
  }
  double vote = 0.0;
  for (const auto& r : sc.rounds) {
    vote += r.alpha * r.weak.classify(static_cast<double>(evaluate(r.feature, ii)));
  }
  return vote >= sc.threshold() ? 1 : 0;
}

double training_error(const StrongClassifier& sc, const Dataset& data) {
  std::size_t wrong = 0;
  for (const auto& e : data.examples()) wrong += classify(sc, e.x) != e.y;
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

}  // namespace haarboost
