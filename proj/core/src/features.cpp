#include "haarboost/features.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace haarboost {

std::string_view to_string(FeatureType t) {
  switch (t) {
    case FeatureType::ThreeRectHorizontal: return "ThreeRectHorizontal";
    case FeatureType::ThreeRectVertical: return "ThreeRectVertical";
    case FeatureType::TwoRectHorizontal: return "TwoRectHorizontal";
    case FeatureType::TwoRectVertical: return "TwoRectVertical";
    case FeatureType::FourRect: return "FourRect";
  }
  return "?";
}

std::optional<FeatureType> feature_type_from_string(std::string_view s) {
  for (FeatureType t : kFeatureTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

int cells_x(FeatureType t) {
  switch (t) {
    case FeatureType::ThreeRectHorizontal: return 3;
    case FeatureType::TwoRectHorizontal:
    case FeatureType::FourRect: return 2;
    default: return 1;
  }
}

int cells_y(FeatureType t) {
  switch (t) {
    case FeatureType::ThreeRectVertical: return 3;
    case FeatureType::TwoRectVertical:
    case FeatureType::FourRect: return 2;
    default: return 1;
  }
}

std::vector<FeatureCell> feature_cells(const HaarFeature& f) {
  const Rect& b = f.bounds;
  const int cw = b.w / cells_x(f.type);
  const int ch = b.h / cells_y(f.type);
  switch (f.type) {
    case FeatureType::TwoRectHorizontal:
      return {{{b.x, b.y, cw, ch}, -1}, {{b.x + cw, b.y, cw, ch}, +1}};
    case FeatureType::TwoRectVertical:
      return {{{b.x, b.y, cw, ch}, -1}, {{b.x, b.y + ch, cw, ch}, +1}};
    case FeatureType::ThreeRectHorizontal:
      return {{{b.x, b.y, cw, ch}, -1}, {{b.x + cw, b.y, cw, ch}, +1}, {{b.x + 2 * cw, b.y, cw, ch}, -1}};
    case FeatureType::ThreeRectVertical:
      return {{{b.x, b.y, cw, ch}, -1}, {{b.x, b.y + ch, cw, ch}, +1}, {{b.x, b.y + 2 * ch, cw, ch}, -1}};
    case FeatureType::FourRect:
      return {{{b.x, b.y, cw, ch}, -1},
              {{b.x + cw, b.y, cw, ch}, +1},
              {{b.x, b.y + ch, cw, ch}, +1},
              {{b.x + cw, b.y + ch, cw, ch}, -1}};
  }
  return {};
}

std::vector<HaarFeature> enumerate(int window) {
  if (window < 3) throw std::invalid_argument("feature window must be at least 3");
  std::vector<HaarFeature> out;
  std::uint32_t index = 0;
  for (FeatureType t : kFeatureTypes) {
    const int sx = cells_x(t);
    const int sy = cells_y(t);
    for (int h = sy; h <= window; h += sy) {
      for (int w = sx; w <= window; w += sx) {
        for (int y = 0; y + h <= window; ++y) {
          for (int x = 0; x + w <= window; ++x) {
            out.push_back(HaarFeature{t, Rect{x, y, w, h}, index++});
          }
        }
      }
    }
  }
  return out;
}

std::size_t count_of_type(FeatureType t, int window) {
  auto positions = [window](int step) {
    std::size_t n = 0;
    for (int s = step; s <= window; s += step) n += static_cast<std::size_t>(window - s + 1);
    return n;
  };
  return positions(cells_x(t)) * positions(cells_y(t));
}

std::int64_t evaluate(const HaarFeature& f, const IntegralImage& ii) {
  std::int64_t v = 0;
  for (const FeatureCell& c : feature_cells(f)) v += c.sign * rect_sum(ii, c.rect);
  return v;
}

FeatureKernel compile(const HaarFeature& f, int image_width) {
  std::map<std::uint32_t, std::int32_t> coef;
  auto add = [&](int x, int y, int c) {
    if (x < 0 || y < 0) return;
    coef[static_cast<std::uint32_t>(y * image_width + x)] += c;
  };
  for (const FeatureCell& c : feature_cells(f)) {
    const Rect& r = c.rect;
    add(r.x + r.w - 1, r.y + r.h - 1, c.sign);
    add(r.x - 1, r.y - 1, c.sign);
    add(r.x + r.w - 1, r.y - 1, -c.sign);
    add(r.x - 1, r.y + r.h - 1, -c.sign);
  }
  FeatureKernel k;
  for (auto [offset, c] : coef) {
    if (c == 0) continue;
    if (k.size == k.taps.size()) throw std::logic_error("feature kernel exceeds tap capacity");
    k.taps[k.size++] = {offset, c};
  }
  return k;
}

FeatureTable::FeatureTable(int window) : window_(window), features_(enumerate(window)) {
  kernels_.reserve(features_.size());
  for (const HaarFeature& f : features_) kernels_.push_back(compile(f, window_));
  std::uint32_t begin = 0;
  for (FeatureType t : kFeatureTypes) {
    const auto n = static_cast<std::uint32_t>(count_of_type(t, window_));
    type_ranges_[static_cast<std::size_t>(t)] = {begin, begin + n};
    begin += n;
  }
}

const FeatureTable& standard_features() {
  static const FeatureTable table(kWindow);
  return table;
}

}  // namespace haarboost
