#include "mbp/error.hpp"
#include "mbp/weyr.hpp"
#include "support/support.hpp"

#include <gtest/gtest.h>

using namespace mbp;
using mbp::testing::jordan_matrix;
using mbp::testing::random_invertible;

TEST(JordanData, Examples) {
  JordanData a = jordan_data(RatMatrix{{0, 1}, {0, 0}});
  ASSERT_EQ(a.eigen.size(), 1u);
  EXPECT_EQ(a.eigen[0].lambda, 0);
  EXPECT_EQ(a.eigen[0].blocks, (std::vector<int>{0, 1}));
  JordanData b = jordan_data(RatMatrix::identity(2) * Rational(2));
  ASSERT_EQ(b.eigen.size(), 1u);
  EXPECT_EQ(b.eigen[0].lambda, 2);
  EXPECT_EQ(b.eigen[0].blocks, (std::vector<int>{2}));
  try {
    jordan_data(RatMatrix{{0, 1}, {-1, 0}});
    FAIL() << "expected NonSplitSpectrum";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NonSplitSpectrum");
  }
}

TEST(WeyrMatrix, Examples) {
  JordanData jd;
  jd.eigen.push_back({Rational(0), {1, 1}});
  WeyrForm w = weyr_matrix(jd);
  ASSERT_EQ(w.blocks.size(), 1u);
  EXPECT_EQ(w.blocks[0].m, (std::vector<int>{2, 1}));
  EXPECT_EQ(w.matrix, (RatMatrix{{0, 0, 1}, {0, 0, 0}, {0, 0, 0}}));

  JordanData single;
  single.eigen.push_back({Rational(5), {0, 0, 1}});
  EXPECT_EQ(weyr_matrix(single).matrix, jordan_matrix({{Rational(5), {3}}}));

  JordanData diag;
  diag.eigen.push_back({Rational(-1), {3}});
  EXPECT_EQ(weyr_matrix(diag).matrix, RatMatrix::identity(3) * Rational(-1));
}

TEST(WeyrCanonical, Examples) {
  RatMatrix a{{1, 1}, {0, 1}};
  auto [w, s] = weyr_canonical(a);
  EXPECT_EQ(w.matrix, a);
  EXPECT_EQ(*inverse(s) * a * s, w.matrix);

  auto [d, sd] = weyr_canonical(RatMatrix{{3, 0}, {0, 2}});
  EXPECT_EQ(d.matrix, (RatMatrix{{2, 0}, {0, 3}}));

  std::mt19937 g(4);
  RatMatrix s0 = random_invertible(g, 3, {-1, 0, 1, 2});
  RatMatrix c = s0 * jordan_matrix({{Rational(0), {2, 1}}}) * *inverse(s0);
  auto [wc, sc] = weyr_canonical(c);
  EXPECT_EQ(wc.matrix, (RatMatrix{{0, 0, 1}, {0, 0, 0}, {0, 0, 0}}));
  EXPECT_EQ(*inverse(sc) * c * sc, wc.matrix);
}

TEST(WeyrCanonical, Properties) {
  std::mt19937 g(21);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + int(g() % 5);
    std::vector<std::pair<Rational, std::vector<int>>> blocks;
    int left = n;
    while (left > 0) {
      int sz = 1 + int(g() % left);
      Rational l(int(g() % 3) - 1);
      auto it = std::find_if(blocks.begin(), blocks.end(), [&](const auto& b) { return b.first == l; });
      if (it == blocks.end())
        blocks.push_back({l, {sz}});
      else
        it->second.push_back(sz);
      left -= sz;
    }
    RatMatrix s0 = random_invertible(g, n, {-1, 0, 1, 2});
    RatMatrix a = s0 * jordan_matrix(blocks) * *inverse(s0);
    auto [w, s] = weyr_canonical(a);
    EXPECT_EQ(*inverse(s) * a * s, w.matrix);
    RatMatrix t = random_invertible(g, n, {-1, 0, 1, 2});
    EXPECT_EQ(weyr_canonical(*inverse(t) * a * t).first.matrix, w.matrix);
    EXPECT_EQ(weyr_canonical(w.matrix).first.matrix, w.matrix);
    int total = 0;
    for (const auto& b : w.blocks)
      for (int m : b.m) total += m;
    EXPECT_EQ(total, n);
    for (std::size_t i = 1; i < w.blocks.size(); ++i) EXPECT_LT(w.blocks[i - 1].lambda, w.blocks[i].lambda);
    for (const auto& b : w.blocks) {
      EXPECT_TRUE(std::is_sorted(b.m.rbegin(), b.m.rend()));
      EXPECT_EQ(b.m, mbp::testing::weyr_sequence_by_ranks(a, b.lambda));
    }
    EXPECT_EQ(jordan_of(w), jordan_data(a));
  }
}

TEST(WeyrCanonical, Regularity) {
  JordanData two;
  two.eigen.push_back({Rational(2), {1}});
  EXPECT_TRUE(is_regular(weyr_matrix(two), {Poly::x()}));
  JordanData zero;
  zero.eigen.push_back({Rational(0), {1}});
  EXPECT_FALSE(is_regular(weyr_matrix(zero), {Poly::x()}));
  JordanData both;
  both.eigen.push_back({Rational(1), {1}});
  both.eigen.push_back({Rational(3), {1}});
  EXPECT_FALSE(is_regular(weyr_matrix(both), {Poly::linear(-1, 1)}));
}
