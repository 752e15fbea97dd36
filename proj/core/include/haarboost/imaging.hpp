#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace haarboost {

/// Axis-aligned rectangle in pixel coordinates; (x, y) is the top-left cell.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// 8-bit grayscale image, row-major.
class Image {
 public:
  Image(int width, int height, std::vector<std::uint8_t> pixels);
  Image(int width, int height, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }

  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, std::uint8_t v) { pixels_[static_cast<std::size_t>(y) * width_ + x] = v; }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// Inclusive summed-area table: sum(x, y) covers every pixel with x' <= x and y' <= y.
/// Layout is exactly width x height; lookups at x-1 or y-1 outside the image read as zero.
class IntegralImage {
 public:
  IntegralImage() = default;
  IntegralImage(int width, int height, std::vector<std::uint32_t> sums);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint32_t> sums() const { return sums_; }

  std::uint32_t sum(int x, int y) const { return sums_[static_cast<std::size_t>(y) * width_ + x]; }

  friend bool operator==(const IntegralImage&, const IntegralImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint32_t> sums_;
};

IntegralImage integral_of(const Image& image);

bool rect_in_bounds(const Rect& r, int width, int height);

/// Pixel sum inside r from four lookups. Throws std::out_of_range if r leaves the image.
std::int64_t rect_sum(const IntegralImage& ii, const Rect& r);

}  // namespace haarboost
