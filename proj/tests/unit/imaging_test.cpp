#include <random>
#include <stdexcept>

#include "doctest.h"
#include "haarboost/imaging.hpp"
#include "support/oracles.hpp"

using namespace haarboost;

TEST_SUITE("imaging") {
  TEST_CASE("constant and single-pixel images") {
    const IntegralImage ones = integral_of(Image(3, 3, 1));
    CHECK(ones.sum(2, 2) == 9);
    CHECK(ones.sum(0, 0) == 1);
    CHECK(integral_of(Image(1, 1, 7)).sum(0, 0) == 7);
  }

  TEST_CASE("integral image matches a per-cell double loop on random images") {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 100; ++k) {
      const Image img = oracle::random_image(rng);
      const IntegralImage ii = integral_of(img);
      for (int y = 0; y < 24; ++y) {
        for (int x = 0; x < 24; ++x) {
          REQUIRE(ii.sum(x, y) == oracle::pixel_sum(img, Rect{0, 0, x + 1, y + 1}));
        }
      }
    }
  }

  TEST_CASE("sums are monotone along rows and columns") {
    std::mt19937_64 rng(2);
    const IntegralImage ii = integral_of(oracle::random_image(rng, 17, 9));
    for (int y = 0; y < 9; ++y)
      for (int x = 1; x < 17; ++x) CHECK(ii.sum(x, y) >= ii.sum(x - 1, y));
    for (int y = 1; y < 9; ++y)
      for (int x = 0; x < 17; ++x) CHECK(ii.sum(x, y) >= ii.sum(x, y - 1));
  }

  TEST_CASE("rect_sum on a constant image is the area") {
    const IntegralImage ii = integral_of(Image(24, 24, 1));
    CHECK(rect_sum(ii, {0, 0, 24, 24}) == 576);
    CHECK(rect_sum(ii, {5, 7, 3, 2}) == 6);
  }

  TEST_CASE("rect_sum equals a pixel loop for random rects, including edge rows and columns") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 1000; ++k) {
      const Image img = oracle::random_image(rng);
      const IntegralImage ii = integral_of(img);
      Rect r;
      r.w = 1 + static_cast<int>(rng() % 24);
      r.h = 1 + static_cast<int>(rng() % 24);
      r.x = static_cast<int>(rng() % static_cast<unsigned>(25 - r.w));
      r.y = static_cast<int>(rng() % static_cast<unsigned>(25 - r.h));
      REQUIRE(rect_sum(ii, r) == oracle::pixel_sum(img, r));
    }
  }

  TEST_CASE("additivity of disjoint splits") {
    std::mt19937_64 rng(4);
    const IntegralImage ii = integral_of(oracle::random_image(rng));
    for (int split = 1; split < 10; ++split) {
      CHECK(rect_sum(ii, {2, 3, 10, 7}) == rect_sum(ii, {2, 3, split, 7}) + rect_sum(ii, {2 + split, 3, 10 - split, 7}));
      CHECK(rect_sum(ii, {2, 3, 10, 10}) == rect_sum(ii, {2, 3, 10, split}) + rect_sum(ii, {2, 3 + split, 10, 10 - split}));
    }
  }

  TEST_CASE("maximum window sum fits") {
    CHECK(rect_sum(integral_of(Image(24, 24, 255)), {0, 0, 24, 24}) == 146'880);
  }

  TEST_CASE("out-of-bounds rects are caller errors, never clamped") {
    const IntegralImage ii = integral_of(Image(24, 24, 1));
    CHECK_THROWS_AS(rect_sum(ii, {20, 0, 5, 1}), std::out_of_range);
    CHECK_THROWS_AS(rect_sum(ii, {-1, 0, 2, 2}), std::out_of_range);
    CHECK_THROWS_AS(rect_sum(ii, {0, 0, 0, 3}), std::out_of_range);
  }

  TEST_CASE("image invariants") {
    CHECK_THROWS_AS(Image(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(Image(2, 2, std::vector<std::uint8_t>(3)), std::invalid_argument);
  }
}
