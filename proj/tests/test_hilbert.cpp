#include <gtest/gtest.h>

#include <vector>

#include "siegel3/error.hpp"
#include "siegel3/hilbert.hpp"

using namespace siegel3;

namespace {

const std::vector<int> kGeneratorWeights = {4, 6, 10, 12, 12, 14, 16, 16, 18, 18, 20, 20, 22, 22, 24, 24, 26, 28, 30};

// Independent oracle: expand the series as a power series by long division
// of (1 + T^2) N(T) by prod(1 - T^d) and read off coefficients.
std::vector<std::int64_t> series_by_division(int upto) {
  std::vector<std::int64_t> s(upto + 3, 0);
  const IntPoly& n = printed_numerator();
  for (std::size_t k = 0; k < n.size() && static_cast<int>(k) <= upto; ++k) {
    s[k] += n[k];
    s[k + 2] += n[k];
  }
  s.resize(upto + 1);
  for (int d : hsop_degrees())
    for (int k = d; k <= upto; ++k) s[k] += s[k - d];
  return s;
}

}  // namespace

TEST(Hilbert, SmallDimensions) {
  EXPECT_EQ(hilbert_dim(0), 1);
  EXPECT_EQ(hilbert_dim(2), 0);
  EXPECT_EQ(hilbert_dim(4), 1);
  EXPECT_EQ(hilbert_dim(6), 1);
  EXPECT_EQ(hilbert_dim(7), 0);
  EXPECT_THROW(hilbert_dim(-2), std::out_of_range);
}

TEST(Hilbert, DimensionsMatchDivisionOracle) {
  auto s = series_by_division(400);
  for (int h = 0; h <= 400; ++h) EXPECT_EQ(hilbert_dim(h), s[h]) << h;
  const std::vector<std::int64_t> expected = {1,  0,  1,  1,  1,   2,   4,   3,   7,   8,   11,  15, 22,
                                              24, 37, 45, 58, 75, 99, 115, 156, 187, 232, 288, 356};
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_EQ(hilbert_dim(2 * static_cast<int>(k)), expected[k]);
}

TEST(Hilbert, NineteenGeneratorNumerator) {
  IntPoly p = hilbert_numerator(kGeneratorWeights);
  EXPECT_EQ(nonzero_count(p), 140u);
  ASSERT_EQ(p.size(), 347u);
  EXPECT_EQ(p[0], 1);
  for (int k = 1; k < 32; ++k) EXPECT_EQ(p[k], 0) << k;
  EXPECT_EQ(p[32], -1);
  EXPECT_EQ(p[34], -1);
  EXPECT_EQ(p[36], -2);
  EXPECT_EQ(p[38], -4);
  EXPECT_EQ(p[40], -5);
  EXPECT_EQ(p[312], -1);
  EXPECT_EQ(p[314], -1);
  EXPECT_EQ(p[346], 1);
  for (int k = 315; k < 346; ++k) EXPECT_EQ(p[k], 0) << k;
  // Value at T = 1 vanishes: the ring has Krull dimension 7 < 19.
  std::int64_t sum = 0;
  for (auto c : p) sum += c;
  EXPECT_EQ(sum, 0);
}

TEST(Hilbert, HsopNumerator) {
  std::vector<int> d = {4, 12, 12, 14, 18, 20, 30};
  IntPoly p = hilbert_numerator(d);
  EXPECT_EQ(p, hsop_numerator());
  EXPECT_TRUE(hsop_numerator_check(std::vector<int>{4, 12, 12, 14, 18, 20, 30}));
  EXPECT_FALSE(hsop_numerator_check(std::vector<int>{4, 12, 12, 14, 18, 20, 28}));
  EXPECT_FALSE(hsop_numerator_check(std::vector<int>{2}));
  EXPECT_THROW(hilbert_numerator(std::vector<int>{4}), NonPolynomial);
}
