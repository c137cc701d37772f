#include <gtest/gtest.h>

#include <random>

#include "random_maps.hpp"
#include "thompson/errors.hpp"
#include "thompson/words.hpp"

using namespace thompson;

namespace {

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

Word commutator(const Word& a, const Word& b) { return a.inverse() * b.inverse() * a * b; }

}  // namespace

TEST(Words, Examples) {
  EXPECT_EQ(eval_word("x0"), PLMap::translation(Rat(1)));
  EXPECT_TRUE(eval_word("x0 x0^-1").is_identity());
  EXPECT_EQ(eval_word("Theta")(Rat(1, 4)), Rat(1, 2));
  EXPECT_EQ(eval_word("Theta")(Rat(5, 4)), Rat(3, 2));
  EXPECT_EQ(eval_word("x1")(Rat(-1)), Rat(-1));
  EXPECT_EQ(eval_word("x1")(Rat(1, 2)), Rat(1));
  EXPECT_EQ(eval_word("x1")(Rat(3, 2)), Rat(5, 2));
}

TEST(Words, OrderConvention) {
  // "g h" applies g first.
  PLMap gh = eval_word("x1 x0");
  EXPECT_EQ(gh, compose(gens::x0(), gens::x1()));
  EXPECT_EQ(gh(Rat(3, 2)), gens::x0()(gens::x1()(Rat(3, 2))));
}

TEST(Words, Relators) {
  Word a = parse_word("x0 x1^-1");
  Word b = parse_word("x0^-1 x1 x0");
  Word c = parse_word("x0^-2 x1 x0^2");
  EXPECT_TRUE(eval_word(commutator(a, b)).is_identity());
  EXPECT_TRUE(eval_word(commutator(a, c)).is_identity());
  // A non-relation stays nontrivial.
  EXPECT_FALSE(eval_word(commutator(parse_word("x0"), parse_word("x1"))).is_identity());
}

TEST(Words, Register) {
  PLMap tau = compose(gens::Theta(), PLMap::translation(Rat(1, 2)));
  register_generator("tau_words_test", tau);
  EXPECT_EQ(eval_word("tau_words_test"), tau);
  EXPECT_EQ(eval_word("x0 tau_words_test"), compose(tau, gens::x0()));
  EXPECT_EQ(error_code([&] { register_generator("tau_words_test", tau); }), "DuplicateName");
  EXPECT_EQ(error_code([] { eval_word("nope"); }), "UnknownGenerator");
}

TEST(Words, Parse) {
  Word w = parse_word("x0^2 x1^-1  R");
  ASSERT_EQ(w.letters.size(), 3u);
  EXPECT_EQ(w.letters[0], (std::pair<std::string, long>{"x0", 2}));
  EXPECT_EQ(w.letters[1], (std::pair<std::string, long>{"x1", -1}));
  EXPECT_EQ(parse_word(w.to_string()), w);
  EXPECT_THROW(parse_word("x0^1/2"), ParseError);
  EXPECT_TRUE(parse_word("").letters.empty());
}

TEST(Words, ConcatenationProperty) {
  std::mt19937 rng(31);
  for (int i = 0; i < 1000; ++i) {
    Word u = testutil::random_word(rng, {"x0", "x1", "Theta", "R"}, 5);
    Word v = testutil::random_word(rng, {"x0", "x1", "Theta", "R"}, 5);
    ASSERT_EQ(eval_word(u * v), compose(eval_word(v), eval_word(u))) << u.to_string() << " | "
                                                                     << v.to_string();
  }
}
