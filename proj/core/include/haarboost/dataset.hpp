#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "haarboost/imaging.hpp"

namespace haarboost {

struct TrainingExample {
  IntegralImage x;
  std::uint8_t y = 0;  // 1 = positive
};

struct DatasetStats {
  std::size_t positives = 0;  // l
  std::size_t negatives = 0;  // m
  std::size_t total() const { return positives + negatives; }

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

/// Immutable labelled training set. Positives come first; index i names the
/// same example on every node, so weight vectors can be shipped by position.
class Dataset {
 public:
  Dataset(std::vector<TrainingExample> examples, std::string source);

  const std::vector<TrainingExample>& examples() const { return examples_; }
  const TrainingExample& operator[](std::size_t i) const { return examples_[i]; }
  std::size_t size() const { return examples_.size(); }
  const DatasetStats& stats() const { return stats_; }
  const std::string& source() const { return source_; }

  /// FNV-1a over labels and integral-image words, in example order.
  std::uint64_t content_hash() const { return hash_; }

  /// Multi-line text summary: source, counts, hash.
  std::string manifest() const;

 private:
  std::vector<TrainingExample> examples_;
  DatasetStats stats_;
  std::string source_;
  std::uint64_t hash_ = 0;
};

/// Loads every file of both directories as 24x24 P5 PGM, ordered by (label desc, filename).
/// Throws LoadError naming the offending file; nothing is returned on partial failure.
Dataset load_dir(const std::filesystem::path& positives_dir, const std::filesystem::path& negatives_dir);

struct SynthOptions {
  // Brightness added to the centered block of a positive, drawn uniformly from [min, max).
  int min_contrast = 0;
  int max_contrast = 96;
};

struct LabeledImage {
  Image image;
  std::uint8_t label = 0;
};

/// Builds integral images eagerly; images must be 24x24 with positives first.
Dataset from_images(const std::vector<LabeledImage>& images, std::string source);

/// Deterministic synthetic faces/non-faces. Both classes are uniform noise in [0, 160);
/// positives add a contrast to the centered 12x12 block. Low-contrast positives overlap the negatives, so no
/// single stump is perfect unless min_contrast is raised.
Dataset synth(std::uint64_t seed, std::size_t positives, std::size_t negatives, SynthOptions options = {});

/// The raw images behind synth(), positives first.
std::vector<LabeledImage> synth_images(std::uint64_t seed, std::size_t positives, std::size_t negatives,
                                       SynthOptions options = {});

/// Writes images as pos/NNNNNN.pgm and neg/NNNNNN.pgm under dir (for load_dir).
void write_dataset_dirs(const std::vector<LabeledImage>& images, const std::filesystem::path& dir);

std::string hash_hex(std::uint64_t h);

}  // namespace haarboost
