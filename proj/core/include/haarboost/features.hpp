#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "haarboost/imaging.hpp"

namespace haarboost {

inline constexpr int kWindow = 24;

/// Declaration order is the canonical enumeration order.
enum class FeatureType : std::uint8_t {
  ThreeRectHorizontal,
  ThreeRectVertical,
  TwoRectHorizontal,
  TwoRectVertical,
  FourRect,
};

inline constexpr std::array<FeatureType, 5> kFeatureTypes = {
    FeatureType::ThreeRectHorizontal, FeatureType::ThreeRectVertical, FeatureType::TwoRectHorizontal,
    FeatureType::TwoRectVertical, FeatureType::FourRect};

std::string_view to_string(FeatureType t);
std::optional<FeatureType> feature_type_from_string(std::string_view s);

/// Number of cells along x and y for a type (e.g. 3x1 for ThreeRectHorizontal).
int cells_x(FeatureType t);
int cells_y(FeatureType t);

struct HaarFeature {
  FeatureType type = FeatureType::ThreeRectHorizontal;
  Rect bounds;
  std::uint32_t global_index = 0;

  friend bool operator==(const HaarFeature&, const HaarFeature&) = default;
};

/// One shaded cell of a feature: +1 for dark, -1 for white.
struct FeatureCell {
  Rect rect;
  int sign;
};

/// Two-rect: second cell dark. Three-rect: middle cell dark. Four-rect: top-right and bottom-left dark.
std::vector<FeatureCell> feature_cells(const HaarFeature& f);

/// Canonical enumeration over a square window: types in declaration order, then ascending (h, w, y, x).
std::vector<HaarFeature> enumerate(int window);

/// Closed-form count of one type at the given window size.
std::size_t count_of_type(FeatureType t, int window);

/// Dark-cell sum minus white-cell sum. Throws std::out_of_range if the feature does not fit ii.
std::int64_t evaluate(const HaarFeature& f, const IntegralImage& ii);

/// A feature flattened into signed integral-image taps. Adjacent cells share corners,
/// so a four-rect feature needs 9 taps instead of 16.
struct FeatureKernel {
  struct Tap {
    std::uint32_t offset;
    std::int32_t coef;
  };
  std::array<Tap, 9> taps{};
  std::uint8_t size = 0;

  std::int64_t apply(const std::uint32_t* sums) const {
    std::int64_t v = 0;
    for (std::uint8_t i = 0; i < size; ++i) v += static_cast<std::int64_t>(taps[i].coef) * sums[taps[i].offset];
    return v;
  }
};

FeatureKernel compile(const HaarFeature& f, int image_width);

struct FeatureRange {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  std::uint32_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  friend bool operator==(const FeatureRange&, const FeatureRange&) = default;
};

/// Immutable enumeration plus compiled kernels for one window size.
class FeatureTable {
 public:
  explicit FeatureTable(int window);

  int window() const { return window_; }
  std::size_t size() const { return features_.size(); }
  std::span<const HaarFeature> features() const { return features_; }
  const HaarFeature& operator[](std::size_t i) const { return features_[i]; }
  const FeatureKernel& kernel(std::size_t i) const { return kernels_[i]; }
  FeatureRange type_range(FeatureType t) const { return type_ranges_[static_cast<std::size_t>(t)]; }

 private:
  int window_;
  std::vector<HaarFeature> features_;
  std::vector<FeatureKernel> kernels_;
  std::array<FeatureRange, 5> type_ranges_{};
};

/// Shared table for the 24x24 training window, built on first use.
const FeatureTable& standard_features();

}  // namespace haarboost
