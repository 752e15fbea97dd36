#include <cmath>

#include "doctest.h"
#include "haarboost/perfmodel.hpp"

using namespace haarboost::perf;

namespace {

double at(double n, double m = kLargestTypeCount) { return predict_round_time({n, m}); }

}  // namespace

TEST_SUITE("perfmodel") {
  TEST_CASE("predicted round times") {
    const double rounded[] = {21.8, 11.2, 7.8, 6.2, 5.3, 4.8, 4.5, 4.3, 4.2};
    for (int n = 1; n <= 9; ++n) CHECK(std::abs(at(n) - rounded[n - 1]) <= 0.05);
    CHECK(at(6) == doctest::Approx(4.8));
    CHECK(at(10) == doctest::Approx(4.16));
    CHECK_THROWS(predict_round_time({0, 10}));
  }

  TEST_CASE("optimal fan-out") {
    const Fanout f = optimal_fanout({1, kLargestTypeCount});
    CHECK(f.stationary == doctest::Approx(std::sqrt(108.0)).epsilon(1e-12));
    CHECK(f.stationary == doctest::Approx(10.392).epsilon(1e-4));
    // Brute-force scan over n = 1..100 agrees with the closed form.
    std::size_t argmin = 1;
    for (std::size_t n = 2; n <= 100; ++n) {
      if (at(static_cast<double>(n)) < at(static_cast<double>(argmin))) argmin = n;
    }
    CHECK(f.best == argmin);
    CHECK(at(static_cast<double>(f.best)) <= at(static_cast<double>(f.best) - 1));
    CHECK(at(static_cast<double>(f.best)) <= at(static_cast<double>(f.best) + 1));
    CHECK(optimal_fanout({1, 400}).stationary == 1.0);
    CHECK(optimal_fanout({1, 400}).best == 1);
    CHECK(at(7) - at(8) < 0.2);
    CHECK(at(7) - at(8) > 0.0);
  }

  TEST_CASE("convexity") {
    for (int n = 2; n < 60; ++n) CHECK(at(n - 1) + at(n + 1) >= 2 * at(n));
  }

  TEST_CASE("fit recovers known coefficients from noiseless data") {
    std::vector<Measurement> ms;
    for (double n : {1, 2, 3, 5, 8}) ms.push_back({n, 1000 * n + 500, 0.37 * n + 0.0021 * (1000 * n + 500) / n});
    const auto fit = fit_coefficients(ms);
    CHECK(std::abs(fit.comm_s_per_node - 0.37) < 1e-9);
    CHECK(std::abs(fit.compute_s_per_feature - 0.0021) < 1e-9);
    CHECK(residual_ss(fit, ms) < 1e-18);
  }

  TEST_CASE("fit round-trips model-generated times at m = 43,200") {
    std::vector<Measurement> ms;
    for (int n = 1; n <= 10; ++n) ms.push_back({double(n), kLargestTypeCount, at(n)});
    const auto fit = fit_coefficients(ms);
    CHECK(std::abs(fit.comm_s_per_node / 0.2 - 1) < 1e-9);
    CHECK(std::abs(fit.compute_s_per_feature / 0.0005 - 1) < 1e-9);
  }

  TEST_CASE("fit rejects degenerate input") {
    CHECK_THROWS_WITH(fit_coefficients({{1, 10, 2}}), doctest::Contains("insufficiently varied"));
    CHECK_THROWS_WITH(fit_coefficients({{2, 40, 2}, {2, 40, 3}}), doctest::Contains("insufficiently varied"));
  }

  TEST_CASE("speedup report") {
    const auto recs = speedup_report({{"seq", 1780.6, 456.5}, {"par", 330.7, 116.1}, {"two-31", 31.7, 4.8}}, "seq");
    CHECK(recs[0].speedup == 1.0);
    CHECK(std::abs(recs[1].speedup - 3.9) <= 0.05);
    CHECK(std::abs(recs[2].speedup - 95.1) <= 0.05);
    const std::string table = render_table(recs, "seq");
    CHECK(table.find("95.1") != std::string::npos);
    CHECK(table.find("----") != std::string::npos);
    CHECK(render_csv(recs).rfind("label,upload_s,round_s,speedup\n", 0) == 0);
    CHECK_THROWS_WITH(speedup_report({{"par", 1, 2}}, "seq"), doctest::Contains("missing baseline"));
  }
}
