#include "haarboost/perfmodel.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace haarboost::perf {

namespace {

void check(const PredictiveModelInput& in, bool need_n) {
  if ((need_n && !(in.n >= 1)) || !(in.m >= 1) || !(in.comm_s_per_node > 0) || !(in.compute_s_per_feature > 0)) {
    throw std::invalid_argument("predictive model needs n >= 1, m >= 1 and positive coefficients");
  }
}

}  // namespace

double predict_round_time(const PredictiveModelInput& in) {
  check(in, true);
  return in.comm_s_per_node * in.n + in.compute_s_per_feature * (in.m / in.n);
}

Fanout optimal_fanout(const PredictiveModelInput& in) {
  check(in, false);
  Fanout out;
  out.stationary = std::sqrt(in.compute_s_per_feature * in.m / in.comm_s_per_node);
  // Convex in n: the integer optimum is the floor or ceiling of the stationary point.
  const double lo = std::max(1.0, std::floor(out.stationary));
  const double hi = std::max(1.0, std::ceil(out.stationary));
  PredictiveModelInput a = in;
  PredictiveModelInput b = in;
  a.n = lo;
  b.n = hi;
  out.best = static_cast<std::size_t>(predict_round_time(b) < predict_round_time(a) ? hi : lo);
  return out;
}

PredictiveModelInput fit_coefficients(const std::vector<Measurement>& measurements) {
  if (measurements.size() < 2) throw std::invalid_argument("insufficiently varied measurements");
  // Normal equations for the two regressors x1 = n, x2 = m/n.
  double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
  for (const auto& me : measurements) {
    if (!(me.n > 0) || !(me.m > 0)) throw std::invalid_argument("measurements need n > 0 and m > 0");
    const double x1 = me.n;
    const double x2 = me.m / me.n;
    s11 += x1 * x1;
    s12 += x1 * x2;
    s22 += x2 * x2;
    t1 += x1 * me.seconds;
    t2 += x2 * me.seconds;
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 1e-12 * s11 * s22)) throw std::invalid_argument("insufficiently varied measurements");
  PredictiveModelInput out;
  out.n = 1;
  out.m = 1;
  out.comm_s_per_node = (t1 * s22 - t2 * s12) / det;
  out.compute_s_per_feature = (s11 * t2 - s12 * t1) / det;
  return out;
}

double residual_ss(const PredictiveModelInput& fitted, const std::vector<Measurement>& measurements) {
  double rss = 0;
  for (const auto& me : measurements) {
    const double r = me.seconds - (fitted.comm_s_per_node * me.n + fitted.compute_s_per_feature * me.m / me.n);
    rss += r * r;
  }
  return rss;
}

std::vector<SpeedupRecord> speedup_report(const std::vector<ConfigTiming>& timings, const std::string& baseline) {
  const ConfigTiming* base = nullptr;
  for (const auto& t : timings) {
    if (t.label == baseline) base = &t;
    if (!(t.round_s > 0)) throw std::invalid_argument("round time of \"" + t.label + "\" must be positive");
  }
  if (!base) throw std::invalid_argument("missing baseline \"" + baseline + "\"");
  std::vector<SpeedupRecord> out;
  out.reserve(timings.size());
  for (const auto& t : timings) out.push_back({t.label, t.upload_s, t.round_s, base->round_s / t.round_s});
  return out;
}

std::string render_table(const std::vector<SpeedupRecord>& records, const std::string& baseline) {
  std::size_t width = 13;
  for (const auto& r : records) width = std::max(width, r.label.size());
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %14s  %14s  %9s\n", static_cast<int>(width), "configuration", "upload (s)",
                "round avg (s)", "speed-up");
  os << line;
  for (const auto& r : records) {
    if (r.label == baseline) {
      std::snprintf(line, sizeof line, "%-*s  %14.4f  %14.4f  %9s\n", static_cast<int>(width), r.label.c_str(),
                    r.upload_s, r.round_s, "----");
    } else {
      std::snprintf(line, sizeof line, "%-*s  %14.4f  %14.4f  %9.1f\n", static_cast<int>(width), r.label.c_str(),
                    r.upload_s, r.round_s, r.speedup);
    }
    os << line;
  }
  return os.str();
}

std::string render_csv(const std::vector<SpeedupRecord>& records) {
  std::ostringstream os;
  os << "label,upload_s,round_s,speedup\n";
  char line[512];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%.17g\n", r.label.c_str(), r.upload_s, r.round_s, r.speedup);
    os << line;
  }
  return os.str();
}

}  // namespace haarboost::perf
