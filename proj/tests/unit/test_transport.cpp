#include <gtest/gtest.h>

#include <random>
#include <set>

#include "random_maps.hpp"
#include "thompson/transport.hpp"
#include "thompson/words.hpp"

using namespace thompson;

TEST(Transport, ExistsExamples) {
  EXPECT_TRUE(transport_exists(rat(1, 2), rat(3, 4)));
  EXPECT_TRUE(transport_exists(rat(1, 3), rat(2, 3)));
  EXPECT_FALSE(transport_exists(rat(1, 3), rat(1, 5)));
  EXPECT_FALSE(transport_exists(rat(1, 2), rat(1, 3)));
  // 1/7 and 3/7: 3 is not a power of 2 mod 7.
  EXPECT_FALSE(transport_exists(rat(1, 7), rat(3, 7)));
  EXPECT_TRUE(transport_exists(rat(1, 7), rat(2, 7)));
  EXPECT_FALSE(transport_exists(rat(1, 3), rat(2, 3), Context{Rat(0), rat(1, 2)}));
}

TEST(Transport, BuildExamples) {
  auto id = transport_build({{Rat(0), Rat(0)}, {Rat(1), Rat(1)}});
  ASSERT_TRUE(id);
  EXPECT_EQ((*id)(Rat(0)), Rat(0));
  EXPECT_EQ((*id)(Rat(1)), Rat(1));
  auto g = transport_build({{rat(1, 3), rat(2, 3)}});
  ASSERT_TRUE(g);
  EXPECT_EQ((*g)(rat(1, 3)), rat(2, 3));
  EXPECT_TRUE(classify(*g).in_F);
  EXPECT_FALSE(transport_build({{rat(1, 3), rat(1, 5)}}));
  try {
    transport_build({{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "UnsortedInput");
  }
}

TEST(Transport, BuildMultiPointAndInterval) {
  std::vector<std::pair<Rat, Rat>> pairs{
      {rat(-5, 3), rat(1, 3)}, {rat(1, 7), rat(4, 7)}, {rat(3, 8), rat(5, 8)}, {rat(9, 5), rat(12, 5)}};
  auto g = transport_build(pairs);
  ASSERT_TRUE(g);
  EXPECT_TRUE(classify(*g).in_F);
  for (auto& [a, b] : pairs) EXPECT_EQ((*g)(a), b);
  Context ctx{Rat(0), Rat(1)};
  auto h = transport_build({{rat(1, 3), rat(2, 3)}, {rat(5, 6), rat(11, 12)}}, ctx);
  ASSERT_TRUE(h);
  EXPECT_EQ((*h)(rat(-1, 2)), rat(-1, 2));
  EXPECT_EQ((*h)(rat(3, 2)), rat(3, 2));
  EXPECT_EQ((*h)(rat(5, 6)), rat(11, 12));
}

TEST(Transport, DyadicInterpolation) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> d(1, 200);
  for (int i = 0; i < 200; ++i) {
    Rat x0 = make_rat(d(rng) - 100, 64), y0 = make_rat(d(rng) - 100, 32);
    Rat x1 = x0 + make_rat(d(rng), 128), y1 = y0 + make_rat(d(rng), 16);
    auto pts = dyadic_interpolation(x0, x1, y0, y1);
    ASSERT_EQ(pts.front(), std::make_pair(x0, y0));
    ASSERT_EQ(pts.back(), std::make_pair(x1, y1));
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
      Rat s = (pts[j + 1].second - pts[j].second) / (pts[j + 1].first - pts[j].first);
      ASSERT_TRUE(log2_exact(s));
      ASSERT_TRUE(is_dyadic(pts[j].first));
    }
  }
}

TEST(Transport, UniquePowerExamples) {
  EXPECT_EQ(unique_power(gens::x0(), Rat(0), Rat(3)), 3);
  EXPECT_EQ(unique_power(gens::x0(), Rat(0), rat(1, 2)), std::nullopt);
  EXPECT_EQ(unique_power(gens::x0(), Rat(0), Rat(-4)), -4);
  // Slope 2 through the origin on (0, inf), identity below.
  PLMap g = PLMap::from_points({Rat(0), Rat(64)}, {Rat(0), Rat(128)});
  EXPECT_EQ(unique_power(g, Rat(1), Rat(8)), 3);
  EXPECT_EQ(unique_power(g, Rat(8), Rat(1)), -3);
  EXPECT_EQ(unique_power(g, Rat(1), Rat(3)), std::nullopt);
  EXPECT_EQ(unique_power(g, Rat(1), Rat(-1)), std::nullopt);
  EXPECT_THROW(unique_power(g, Rat(-1), Rat(1)), Error);
}

TEST(Transport, UniquePowerAgreesWithIteration) {
  std::mt19937 rng(23);
  int checked = 0;
  while (checked < 300) {
    PLMap g = testutil::random_F(rng, 6);
    Rat u = testutil::random_rat(rng, 3, 8);
    if (g(u) == u) continue;
    std::uniform_int_distribution<int> pick(-12, 12);
    int m = pick(rng);
    PLMap gm = power(g, m);
    Rat v = gm(u);
    auto got = unique_power(g, u, v);
    ASSERT_TRUE(got);
    EXPECT_EQ(*got, m);
    ++checked;
  }
}

// Word BFS in x0, x1: the set of images of alpha reachable with short words.
TEST(Transport, OracleAgreementSmall) {
  std::vector<PLMap> steps{gens::x0(), invert(gens::x0()), gens::x1(), invert(gens::x1())};
  for (int q : {3, 5, 7}) {
    for (int a = 1; a < q; ++a) {
      Rat alpha = make_rat(a, q);
      std::set<Rat> seen{alpha};
      std::vector<Rat> frontier{alpha};
      for (int depth = 0; depth < 8; ++depth) {
        std::vector<Rat> next;
        for (const auto& t : frontier)
          for (const auto& s : steps) {
            Rat u = s(t);
            if (seen.insert(u).second) next.push_back(u);
          }
        frontier = std::move(next);
      }
      for (const auto& beta : seen) {
        if (beta <= 0 || beta >= 1) continue;
        EXPECT_TRUE(transport_exists(alpha, beta)) << to_string(alpha) << " " << to_string(beta);
        auto g = transport_build({{alpha, beta}});
        ASSERT_TRUE(g);
        EXPECT_EQ((*g)(alpha), beta);
      }
    }
  }
}
