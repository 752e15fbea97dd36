#include "common.hpp"

#include <cstdio>

#include "haarboost/features.hpp"

namespace haarboost::cli {

void DataFlags::add_to(CLI::App& app) {
  auto* pos_opt = app.add_option("--pos", pos, "Directory of positive 24x24 PGM images")->check(CLI::ExistingDirectory);
  auto* neg_opt = app.add_option("--neg", neg, "Directory of negative 24x24 PGM images")->check(CLI::ExistingDirectory);
  auto* synth_opt = app.add_option("--synth", synth, "Synthetic dataset SEED,POSITIVES,NEGATIVES")
                        ->delimiter(',')
                        ->expected(3);
  app.add_option("--contrast", contrast, "Synthetic block contrast range MIN,MAX")
      ->delimiter(',')
      ->expected(2)
      ->needs(synth_opt);
  pos_opt->needs(neg_opt);
  neg_opt->needs(pos_opt);
  synth_opt->excludes(pos_opt)->excludes(neg_opt);
}

std::vector<LabeledImage> DataFlags::synth_images() const {
  SynthOptions opts;
  if (!contrast.empty()) opts = {contrast[0], contrast[1]};
  return haarboost::synth_images(synth.at(0), synth.at(1), synth.at(2), opts);
}

Dataset DataFlags::load() const {
  if (!synth.empty()) {
    SynthOptions opts;
    if (!contrast.empty()) opts = {contrast[0], contrast[1]};
    return haarboost::synth(synth[0], synth[1], synth[2], opts);
  }
  if (pos.empty() || neg.empty()) throw UsageError("a dataset is required: --pos DIR --neg DIR, or --synth SEED,L,M");
  return load_dir(pos, neg);
}

void TimeoutFlags::add_to(CLI::App& app) {
  app.add_option("--handshake-timeout", handshake_s, "Seconds allowed for connecting and assignment")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--timeout", round_s, "Seconds allowed for any single round")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

ClusterOptions TimeoutFlags::options() const {
  auto ms = [](double s) { return std::chrono::milliseconds(static_cast<std::int64_t>(s * 1000.0)); };
  return {ms(handshake_s), ms(round_s)};
}

std::uint32_t feature_limit(std::size_t requested) {
  const std::size_t total = standard_features().size();
  if (requested > total) {
    throw UsageError("--features " + std::to_string(requested) + " exceeds the " + std::to_string(total) +
                     " available features");
  }
  return static_cast<std::uint32_t>(requested == 0 ? total : requested);
}

RoundCallback progress_printer() {
  return [](const RoundRecord& r, const PhaseTiming& t) {
    std::fprintf(stderr, "round %d feature %u error %.6f alpha %.6f seconds %.3f\n", t.round, r.weak.feature_index,
                 r.weak.error, r.alpha, t.total());
  };
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace haarboost::cli
