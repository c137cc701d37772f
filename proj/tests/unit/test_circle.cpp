#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "random_maps.hpp"
#include "thompson/circle.hpp"
#include "thompson/conjugacy.hpp"
#include "thompson/words.hpp"

using namespace thompson;

namespace {

CircleMap circ(const PLMap& lift) { return CircleMap::from_lift(lift); }

PLMap rot(const Rat& r) { return PLMap::translation(r); }

// Random lift commuting with t + 1.
PLMap random_lift(std::mt19937& rng, int len) {
  std::uniform_int_distribution<int> pick(0, 4);
  std::uniform_int_distribution<int> sign(0, 1);
  PLMap acc;
  std::uniform_int_distribution<int> n(1, len);
  for (int i = n(rng); i > 0; --i) {
    PLMap g;
    switch (pick(rng)) {
      case 0: g = gens::Theta(); break;
      case 1: g = rot(Rat(1, 2)); break;
      case 2: g = rot(Rat(1, 4)); break;
      case 3: g = compose(rot(Rat(-1, 4)), compose(gens::Theta(), rot(Rat(1, 4)))); break;
      default: g = compose(rot(Rat(-1, 8)), compose(gens::Theta(), rot(Rat(1, 8)))); break;
    }
    acc = compose(sign(rng) ? g : invert(g), acc);
  }
  return acc;
}

// Fixed-point-free y in EP2 with y > t.
PLMap random_up(std::mt19937& rng) {
  for (;;) {
    PLMap tau = testutil::random_EP2(rng, 4);
    PLMap y = compose(invert(tau), testutil::random_F(rng, 8));
    if (!fixed_set(y).empty()) continue;
    return y(Rat(0)) > 0 ? y : invert(y);
  }
}

CircleMap word(const CircleMap& t1, long k, const CircleMap& t0, long l) {
  return compose(power(t1, k), power(t0, l));
}

void expect_window_agrees(const CircleMap& t0, const CircleMap& t1, const CircleMap& t,
                          const SolutionFamily& fam) {
  std::vector<CircleMap> p0, p1;
  for (long e = -8; e <= 8; ++e) {
    p0.push_back(power(t0, e));
    p1.push_back(power(t1, e));
  }
  std::vector<Rat> probes;
  for (int i = 1; i < 16; ++i) probes.push_back(make_rat(i, 16) + Rat(1, 97));
  for (long k = -8; k <= 8; ++k)
    for (long l = -8; l <= 8; ++l) {
      const PLMap& a = p1[k + 8].lift();
      const PLMap& b = p0[l + 8].lift();
      bool equal = std::all_of(probes.begin(), probes.end(), [&](const Rat& x) {
        return is_integer(a(b(x)) - t.lift()(x));
      });
      if (equal) equal = compose(p1[k + 8], p0[l + 8]) == t;
      ASSERT_EQ(equal, fam.contains(k, l)) << "(" << k << "," << l << ") family " << to_string(fam);
    }
}

}  // namespace

TEST(CircleMap, Basics) {
  CircleMap r = CircleMap::rotation(Rat(1, 2));
  EXPECT_EQ(compose(r, r), CircleMap());
  EXPECT_EQ(r(Rat(3, 4)), Rat(1, 4));
  EXPECT_THROW(CircleMap::from_lift(gens::x1()), Error);
  CircleMap th = circ(gens::Theta());
  EXPECT_EQ(compose(th, invert(th)), CircleMap());
  EXPECT_EQ(power(th, 3), compose(th, compose(th, th)));
}

TEST(CircleMap, PeriodicPoints) {
  auto id = periodic_points(CircleMap());
  ASSERT_EQ(id.size(), 1u);
  EXPECT_EQ(id[0], (std::pair<Rat, long>{Rat(0), 1}));
  auto half = periodic_points(CircleMap::rotation(Rat(1, 2)));
  ASSERT_EQ(half.size(), 2u);
  EXPECT_EQ(half[0].second, 2);
  std::mt19937 rng(3);
  for (int i = 0; i < 40; ++i) {
    CircleMap c = circ(random_lift(rng, 6));
    auto orbit = periodic_points(c);
    ASSERT_FALSE(orbit.empty());
    long q = orbit[0].second;
    ASSERT_EQ(static_cast<long>(orbit.size()), q);
    EXPECT_EQ(power(c, q)(orbit[0].first), orbit[0].first);
    for (long j = 1; j < q; ++j) EXPECT_NE(power(c, j)(orbit[0].first), orbit[0].first);
  }
}

TEST(Rescale, TranslationIsAffine) {
  Rescaling r = rescale(gens::x0(), Rat(0), 3, 3);
  EXPECT_EQ(r.H, PLMap::identity());
  EXPECT_EQ(r.ybar, gens::x0());
}

TEST(Rescale, ConjugacyLaw) {
  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    PLMap y = random_up(rng);
    Rat L = y.window_left() - 2;
    Rescaling r = rescale(y, L, 3, 6);
    for (long k = -3; k <= 6; ++k) EXPECT_EQ(r.H(power(y, k)(L)), Rat(k));
    for (int j = 0; j < 100; ++j) {
      Rat t = testutil::random_rat(rng, 4, 32) + L + 2;
      if (t < r.lo || y(t) > r.hi) continue;
      ASSERT_EQ(r.H(y(t)), r.H(t) + 1);
    }
    for (Rat t = r.H(r.lo); t + 1 <= r.H(r.hi); t += Rat(1, 7)) EXPECT_EQ(r.ybar(t), t + 1);
  }
}

TEST(Mather, EqualMapsGiveIdentity) {
  std::mt19937 rng(7);
  PLMap y = random_up(rng);
  MatherData md = mather(y, y);
  EXPECT_TRUE(md.t.is_identity());
  EXPECT_TRUE(satisfies(md.t0, md.t1, md.t, 0, 0));
}

TEST(Mather, RoundTripTailsSolve) {
  std::mt19937 rng(11);
  for (int i = 0; i < 40; ++i) {
    PLMap y = random_up(rng);
    PLMap h = testutil::random_F(rng, 8);
    PLMap z = conjugate(y, h);
    MatherData md = mather(y, z);
    Membership m = classify(h);
    long k = to_long(*m.m_plus), l = to_long(*m.m_minus);
    EXPECT_TRUE(satisfies(md.t0, md.t1, md.t, k, l)) << i;
    EXPECT_TRUE(solve_exponent(md.t0, md.t1, md.t).contains(k, l)) << i;
  }
}

TEST(Mather, IndependentOfN) {
  std::mt19937 rng(13);
  for (int i = 0; i < 20; ++i) {
    PLMap y = random_up(rng);
    PLMap z = conjugate(y, testutil::random_F(rng, 8));
    MatherData a = mather(y, z);
    MatherData b = mather(y, z, a.N + 1);
    EXPECT_EQ(b.N, a.N + 1);
    EXPECT_EQ(a.t0, b.t0);
    EXPECT_EQ(a.t1, b.t1);
    EXPECT_EQ(a.t, b.t);
  }
}

TEST(SolveExponent, Examples) {
  CircleMap id;
  auto all = solve_exponent(id, id, id);
  EXPECT_TRUE(all.contains(5, -7));
  CircleMap th = circ(gens::Theta());
  auto line = solve_exponent(id, th, th);
  EXPECT_EQ(line.kind(), SolutionFamily::Kind::Line);
  for (long l = -20; l <= 20; ++l) EXPECT_TRUE(line.contains(1, l));
  EXPECT_FALSE(line.contains(2, 0));
  // Rotation by 1/3 maps dyadics off the dyadics.
  CircleMap t1 = circ(compose(rot(Rat(-1, 4)), compose(gens::Theta(), rot(Rat(1, 4)))));
  CircleMap t0 = circ(gens::Theta());
  CircleMap t = CircleMap::rotation(Rat(1, 3));
  EXPECT_EQ(solve_exponent(t0, t1, t).kind(), SolutionFamily::Kind::Empty);
}

TEST(SolveExponent, BruteForceWindow) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<long> e(-4, 4);
  for (int i = 0; i < 100; ++i) {
    CircleMap t0 = circ(random_lift(rng, 3));
    CircleMap t1 = circ(random_lift(rng, 3));
    CircleMap t = i % 2 ? word(t1, e(rng), t0, e(rng)) : circ(random_lift(rng, 3));
    SolutionFamily fam = solve_exponent(t0, t1, t);
    for (const auto& c : fam.parts) EXPECT_TRUE(satisfies(t0, t1, t, c.k, c.l));
    expect_window_agrees(t0, t1, t, fam);
    if (::testing::Test::HasFailure()) return;
  }
}

TEST(IntervalExponent, SlopeDeterminesPower) {
  PLMap th = gens::Theta();
  auto fam = interval_exponent(PLMap::identity(), th, power(th, 3), Rat(0));
  ASSERT_NE(fam.kind(), SolutionFamily::Kind::Empty);
  for (long l = -5; l <= 5; ++l) EXPECT_TRUE(fam.contains(3, l));
  EXPECT_FALSE(fam.contains(2, 0));
  EXPECT_FALSE(fam.contains(4, 0));
}

TEST(IntervalExponent, ParityObstruction) {
  PLMap th = gens::Theta();
  PLMap sq = power(th, 2);
  EXPECT_EQ(interval_exponent(sq, sq, th, Rat(0)).kind(), SolutionFamily::Kind::Empty);
}
