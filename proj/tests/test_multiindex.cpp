#include <gtest/gtest.h>

#include "oddsphere/multiindex.hpp"

using namespace oddsphere;

TEST(MultiIndex, IndexOfExamples) {
  EXPECT_EQ(index_of(MultiIndex({0})), 1u);
  EXPECT_EQ(index_of(MultiIndex({1, 1})), 5u);
  EXPECT_EQ(index_of(MultiIndex({0, 1})), 2u);
}

TEST(MultiIndex, GradedLexOrderForTwoVariables) {
  Enumeration en(2);
  std::vector<MultiIndex> want{MultiIndex({0, 0}), MultiIndex({0, 1}), MultiIndex({1, 0}),
                               MultiIndex({0, 2}), MultiIndex({1, 1}), MultiIndex({2, 0})};
  EXPECT_EQ(en.up_to_degree(2), want);
}

TEST(MultiIndex, MultiOfExamples) {
  EXPECT_EQ(multi_of(1, 3), MultiIndex({0, 0, 0}));
  EXPECT_EQ(multi_of(4, 2), MultiIndex({0, 2}));
  EXPECT_EQ(multi_of(2, 1), MultiIndex({1}));
}

TEST(MultiIndex, CountUpToDegree) {
  EXPECT_EQ(count_up_to_degree(2, 2), 6u);
  EXPECT_EQ(count_up_to_degree(0, 5), 1u);
  EXPECT_EQ(count_up_to_degree(3, 1), 4u);
}

TEST(MultiIndex, RoundTrip) {
  for (std::size_t d = 1; d <= 4; ++d) {
    Enumeration en(d);
    for (std::uint64_t j = 1; j <= 10000; ++j) ASSERT_EQ(en.index_of(en.multi_of(j)), j) << "d=" << d;
  }
}

TEST(MultiIndex, DegreeBlocksAreContiguous) {
  for (std::size_t d = 1; d <= 4; ++d) {
    Enumeration en(d);
    for (int m = 0; m <= 8; ++m) {
      std::uint64_t lo = m == 0 ? 0 : count_up_to_degree(m - 1, d);
      std::uint64_t hi = count_up_to_degree(m, d);
      auto block = en.of_degree(m);
      ASSERT_EQ(block.size(), hi - lo);
      for (std::size_t t = 0; t < block.size(); ++t) EXPECT_EQ(en.index_of(block[t]), lo + t + 1);
    }
  }
}

TEST(MultiIndex, IndexMonotoneInDegree) {
  Enumeration en(3);
  auto all = en.up_to_degree(5);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LE(all[i - 1].degree(), all[i].degree());
}

TEST(MultiIndex, OneDimensionalIndexIsShift) {
  for (int k = 0; k < 200; ++k) EXPECT_EQ(index_of(MultiIndex({k})), static_cast<std::uint64_t>(k + 1));
}

TEST(MultiIndex, Errors) {
  EXPECT_THROW(multi_of(0, 2), InputError);
  EXPECT_THROW(MultiIndex({1, -1}), InputError);
  EXPECT_THROW(Enumeration(2).index_of(MultiIndex({1})), InputError);
  EXPECT_THROW(Enumeration(0), InputError);
}

TEST(MultiIndex, Arithmetic) {
  MultiIndex a({1, 2}), b({0, 3}), out(2);
  EXPECT_EQ(a + b, MultiIndex({1, 5}));
  EXPECT_FALSE(a.try_subtract(b, out));
  EXPECT_TRUE(b.try_subtract(MultiIndex({0, 1}), out));
  EXPECT_EQ(out, MultiIndex({0, 2}));
  EXPECT_EQ(a.degree(), 3);
}
