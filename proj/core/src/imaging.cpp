#include "haarboost/imaging.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace haarboost {

namespace {

void check_dims(int width, int height, std::size_t size) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  if (size != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("pixel buffer size does not match width*height");
  }
  // The largest possible window sum must fit the 32-bit table.
  if (255ull * static_cast<unsigned long long>(size) > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("image too large for 32-bit integral image");
  }
}

}  // namespace

Image::Image(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width_, height_, pixels_.size());
}

Image::Image(int width, int height, std::uint8_t fill)
    : width_(width),
      height_(height),
      pixels_(static_cast<std::size_t>(width < 0 ? 0 : width) * static_cast<std::size_t>(height < 0 ? 0 : height),
              fill) {
  check_dims(width_, height_, pixels_.size());
}

IntegralImage::IntegralImage(int width, int height, std::vector<std::uint32_t> sums)
    : width_(width), height_(height), sums_(std::move(sums)) {
  check_dims(width_, height_, sums_.size());
}

IntegralImage integral_of(const Image& image) {
  const int w = image.width();
  const int h = image.height();
  std::vector<std::uint32_t> sums(static_cast<std::size_t>(w) * h);
  auto px = image.pixels();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      std::uint32_t s = px[i];
      if (x > 0) s += sums[i - 1];
      if (y > 0) s += sums[i - w];
      if (x > 0 && y > 0) s -= sums[i - w - 1];
      sums[i] = s;
    }
  }
  return IntegralImage(w, h, std::move(sums));
}

bool rect_in_bounds(const Rect& r, int width, int height) {
  return r.w >= 1 && r.h >= 1 && r.x >= 0 && r.y >= 0 && r.x + r.w <= width && r.y + r.h <= height;
}

std::int64_t rect_sum(const IntegralImage& ii, const Rect& r) {
  if (!rect_in_bounds(r, ii.width(), ii.height())) {
    std::ostringstream os;
    os << "rect (x=" << r.x << ", y=" << r.y << ", w=" << r.w << ", h=" << r.h << ") outside "
       << ii.width() << "x" << ii.height() << " image";
    throw std::out_of_range(os.str());
  }
  // A is the corner outside the top-left, B above the right edge, C left of the bottom edge, D bottom-right.
  const int x0 = r.x - 1;
  const int y0 = r.y - 1;
  const int x1 = r.x + r.w - 1;
  const int y1 = r.y + r.h - 1;
  const std::int64_t d = ii.sum(x1, y1);
  const std::int64_t a = (x0 >= 0 && y0 >= 0) ? ii.sum(x0, y0) : 0;
  const std::int64_t b = (y0 >= 0) ? ii.sum(x1, y0) : 0;
  const std::int64_t c = (x0 >= 0) ? ii.sum(x0, y1) : 0;
  return d + a - b - c;
}

}  // namespace haarboost
