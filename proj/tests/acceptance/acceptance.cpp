// Acceptance suite: one PASS/FAIL line per criterion, each against its time
// budget. Usage: acceptance [N ...] runs only the listed criteria.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "../unit/random_maps.hpp"
#include "thompson/circle.hpp"
#include "thompson/conjugacy.hpp"
#include "thompson/odp_rinf.hpp"
#include "thompson/transport.hpp"
#include "thompson/twisted.hpp"
#include "thompson/words.hpp"

using namespace thompson;
using testutil::random_EP2;
using testutil::random_F;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Records the first failure only; later ones add to a count.
struct Check {
  Outcome out;
  long failures = 0;
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (failures++ == 0) out.detail = what;
    out.ok = false;
  }
  Outcome done(const std::string& summary) {
    if (out.ok) out.detail = summary;
    else {
      if (failures > 1) out.detail += " (+" + std::to_string(failures - 1) + " more)";
      out.detail += "; " + summary;
    }
    return out;
  }
};

PLMap twisted_image(const PLMap& y, const PLMap& g, const PLMap& tau) {
  return compose(tau, compose(g, compose(invert(tau), compose(y, invert(g)))));
}

bool twisted_witness_ok(const PLMap& y, const PLMap& z, const PLMap& tau, const Decision& d) {
  return d.yes() && classify(*d.witness).in_F && twisted_image(y, *d.witness, tau) == z;
}

PLMap random_tau(std::mt19937& rng, bool reversing) {
  PLMap t = random_EP2(rng, 4);
  return reversing ? compose(gens::R(), t) : t;
}

Word commutator(const Word& a, const Word& b) { return a.inverse() * b.inverse() * a * b; }

// 1. Both standard relators of F evaluate to the identity.
Outcome c1() {
  Check c;
  Word a = parse_word("x0 x1^-1");
  for (const char* b : {"x0^-1 x1 x0", "x0^-2 x1 x0^2"}) {
    Word r = commutator(a, parse_word(b));
    c.expect(eval_word(r).is_identity(), r.to_string() + " is not the identity");
  }
  return c.done("2 relators evaluate to the identity");
}

// 2. Twisted round trips.
Outcome c2() {
  Check c;
  std::mt19937 rng(2002);
  int n = 500;
  for (int i = 0; i < n; ++i) {
    PLMap tau = random_tau(rng, i % 2);
    PLMap y = random_F(rng, 12), g = random_F(rng, 10);
    PLMap z = twisted_image(y, g, tau);
    Decision d = tcp(y, z, tau);
    c.expect(twisted_witness_ok(y, z, tau, d), "instance " + std::to_string(i) + " not verified");
  }
  return c.done(std::to_string(n) + "/" + std::to_string(n) + " Yes with verified witnesses");
}

// Point/interval pattern of Fix(u), on u^2 for reversing u. nullopt when the
// set reaches infinity periodically.
std::optional<std::vector<bool>> fix_shape(PLMap u) {
  if (u.orientation() == -1) u = compose(u, u);
  FixSet fs = fixed_set(u);
  if (fs.left != FixTail::Empty || fs.right != FixTail::Empty) return std::nullopt;
  std::vector<bool> shape;
  for (const auto& comp : fs.components) shape.push_back(comp.is_point());
  return shape;
}

// u(t) - t is one integer on a period beyond each end of the window.
bool integral_ends(const PLMap& u) {
  Rat far = std::max<Rat>(abs(u.window_left()), abs(u.window_right())) + 2;
  for (const Rat& base : {far, Rat(-far - 1)}) {
    Rat d = u(base) - base;
    if (!is_integer(d)) return false;
    for (int k = 1; k <= 16; ++k) {
      Rat t = base + rat(k, 16);
      if (u(t) - t != d) return false;
    }
  }
  return true;
}

// 3. Negatives: the barred maps differ in the shape of their fixed sets or in
// their tails. A No must name an obstruction that really differs.
Outcome c3() {
  Check c;
  std::mt19937 rng(3003);
  int fix = 0, tails = 0, tries = 0;
  while (fix + tails < 100 && tries < 200000) {
    ++tries;
    bool rev = tries % 3 == 0;
    PLMap tau = random_tau(rng, rev);
    PLMap y = random_F(rng, 8), w = random_F(rng, 8);
    PLMap tinv = invert(tau);
    PLMap yb = compose(tinv, y), wb = compose(tinv, w);
    auto sy = fix_shape(yb), sw = fix_shape(wb);
    if (!sy || !sw) continue;
    PLMap z = twisted_image(w, random_F(rng, 8), tau);
    PLMap zb = compose(tinv, z);
    bool fix_differs = sy->size() != sw->size() || *sy != *sw;
    bool tail_differs = rev ? !integral_ends(compose(invert(yb), zb)) : !tails_agree(yb, zb);
    if (fix_differs && sy->size() != sw->size()) {
      if (fix >= 50) continue;
      ++fix;
    } else if (tail_differs) {
      if (tails >= 50) continue;
      ++tails;
    } else {
      continue;
    }
    Decision d = tcp(y, z, tau);
    std::string tag = "negative " + std::to_string(fix + tails) + (rev ? " (reversing)" : "");
    bool right = (d.reason == Reason::FixSetMismatch && fix_differs) ||
                 (d.reason == Reason::TailMismatch && tail_differs);
    c.expect(!d.yes(), tag + " answered Yes");
    if (!d.yes()) c.expect(right, tag + " gave " + to_string(d.reason));
  }
  c.expect(fix + tails == 100, "only " + std::to_string(fix + tails) + " negatives generated");
  return c.done(std::to_string(fix) + " with different fixed-set counts and " +
                std::to_string(tails) + " with mismatched tails, all No with a valid reason");
}

// Exact fractions with 64-bit parts for the word-BFS oracle; independent of
// the library's rationals and maps.
struct Frac {
  std::int64_t p, q;  // q > 0, reduced
  bool operator==(const Frac&) const = default;
};

Frac frac(std::int64_t p, std::int64_t q) {
  std::int64_t g = std::gcd(p, q);
  return {p / g, q / g};
}

struct FracHash {
  std::size_t operator()(const Frac& f) const {
    return std::hash<std::int64_t>()(f.p) * 1000003u ^ std::hash<std::int64_t>()(f.q);
  }
};

Frac add(const Frac& a, const Frac& b) { return frac(a.p * b.q + b.p * a.q, a.q * b.q); }
Frac sub(const Frac& a, const Frac& b) { return frac(a.p * b.q - b.p * a.q, a.q * b.q); }
Frac mul(const Frac& a, const Frac& b) { return frac(a.p * b.p, a.q * b.q); }
Frac div(const Frac& a, const Frac& b) {
  return b.p < 0 ? frac(-a.p * b.q, a.q * -b.p) : frac(a.p * b.q, a.q * b.p);
}
bool leq(const Frac& a, const Frac& b) { return a.p * b.q <= b.p * a.q; }

// Piecewise linear map of [0, 1] given by its breakpoints.
struct Pieces {
  std::vector<Frac> xs, ys;
  Pieces inverse() const { return {ys, xs}; }
  Frac operator()(const Frac& t) const {
    std::size_t i = 0;
    while (i + 2 < xs.size() && !leq(t, xs[i + 1])) ++i;
    Frac slope = div(sub(ys[i + 1], ys[i]), sub(xs[i + 1], xs[i]));
    return add(ys[i], mul(sub(t, xs[i]), slope));
  }
};

// The standard generators of F acting on [0, 1].
std::vector<Pieces> unit_generators() {
  Pieces A{{{0, 1}, {1, 2}, {3, 4}, {1, 1}}, {{0, 1}, {1, 4}, {1, 2}, {1, 1}}};
  Pieces B{{{0, 1}, {1, 2}, {3, 4}, {7, 8}, {1, 1}}, {{0, 1}, {1, 2}, {5, 8}, {3, 4}, {1, 1}}};
  return {A, A.inverse(), B, B.inverse()};
}

// x0 = t + 1 and x1 = t (t <= 0), 2t (0 <= t <= 1), t + 1 (t >= 1) on the line.
Frac act_line(const Frac& t, int g) {
  switch (g) {
    case 0: return {t.p + t.q, t.q};
    case 1: return {t.p - t.q, t.q};
    case 2:
      if (t.p <= 0) return t;
      if (t.p <= t.q) return frac(2 * t.p, t.q);
      return {t.p + t.q, t.q};
    default:
      if (t.p <= 0) return t;
      if (t.p <= 2 * t.q) return frac(t.p, 2 * t.q);
      return {t.p - t.q, t.q};
  }
}

template <class Act>
std::unordered_set<Frac, FracHash> bfs(const Frac& start, int depth, Act act) {
  std::unordered_set<Frac, FracHash> seen{start};
  std::vector<Frac> frontier{start};
  for (int d = 0; d < depth; ++d) {
    std::vector<Frac> next;
    for (const auto& t : frontier)
      for (int g = 0; g < 4; ++g) {
        Frac u = act(t, g);
        if (seen.insert(u).second) next.push_back(u);
      }
    frontier = std::move(next);
  }
  return seen;
}

// 4. transport_exists against reachability by words of length <= 12. F-orbits
// of rationals do not depend on the model, so a positive counts as confirmed
// when a word reaches it with F acting on [0, 1] or on the line.
Outcome c4() {
  Check c;
  std::vector<Frac> pts;
  for (std::int64_t q = 2; q <= 64; ++q)
    for (std::int64_t p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) pts.push_back({p, q});
  const auto unit = unit_generators();
  auto on_unit = [&](const Frac& t, int g) { return unit[g](t); };
  long positives = 0, confirmed = 0, line_reached = 0, built = 0;
  for (const auto& a : pts) {
    auto reach = bfs(a, 12, on_unit);
    auto reach_line = bfs(a, 12, act_line);
    Rat alpha = rat(a.p, a.q);
    for (const auto& b : pts) {
      Rat beta = rat(b.p, b.q);
      bool exists = transport_exists(alpha, beta);
      bool reached = reach.count(b) > 0, reached_line = reach_line.count(b) > 0;
      std::string pair = to_string(alpha) + " -> " + to_string(beta);
      c.expect(!reached || exists, "BFS on [0, 1] reaches " + pair + " but transport_exists is false");
      c.expect(!reached_line || exists, "BFS on the line reaches " + pair + " but transport_exists is false");
      if (!exists) continue;
      ++positives;
      c.expect(reached || reached_line, "no word of length <= 12 realizes " + pair);
      confirmed += reached || reached_line;
      line_reached += reached_line;
      auto g = transport_build({{alpha, beta}});
      c.expect(g && classify(*g).in_F && (*g)(alpha) == beta, "transport_build fails for " + pair);
      built += g.has_value();
    }
  }
  return c.done(std::to_string(pts.size()) + " points, " + std::to_string(positives) +
                " positive pairs, " + std::to_string(confirmed) + " confirmed by BFS (" +
                std::to_string(line_reached) + " on the line), " + std::to_string(built) +
                " built and verified");
}

PLMap random_lift(std::mt19937& rng, int len) {
  auto rot = [](const Rat& r) { return PLMap::translation(r); };
  std::uniform_int_distribution<int> pick(0, 4), sign(0, 1), n(1, len);
  PLMap acc;
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

// 5. solve_exponent membership against brute force on |k|, |l| <= 8.
Outcome c5() {
  Check c;
  std::mt19937 rng(5005);
  std::uniform_int_distribution<long> e(-6, 6);
  long solutions = 0;
  for (int i = 0; i < 100; ++i) {
    CircleMap t0 = CircleMap::from_lift(random_lift(rng, 3));
    CircleMap t1 = CircleMap::from_lift(random_lift(rng, 3));
    CircleMap t = i % 2 ? compose(power(t1, e(rng)), power(t0, e(rng)))
                        : CircleMap::from_lift(random_lift(rng, 3));
    SolutionFamily fam = solve_exponent(t0, t1, t);
    std::vector<CircleMap> p0, p1;
    for (long k = -8; k <= 8; ++k) {
      p0.push_back(power(t0, k));
      p1.push_back(power(t1, k));
    }
    std::vector<Rat> probes;
    for (int j = 1; j < 16; ++j) probes.push_back(rat(j, 16) + rat(1, 97));
    for (long k = -8; k <= 8; ++k)
      for (long l = -8; l <= 8; ++l) {
        const PLMap &a = p1[k + 8].lift(), &b = p0[l + 8].lift();
        // Cheap pointwise screen on the lifts, then exact equality.
        bool brute = std::all_of(probes.begin(), probes.end(), [&](const Rat& x) {
          return is_integer(a(b(x)) - t.lift()(x));
        });
        if (brute) brute = compose(p1[k + 8], p0[l + 8]) == t;
        solutions += brute;
        c.expect(brute == fam.contains(k, l), "triple " + std::to_string(i) + " disagrees at (" +
                                                  std::to_string(k) + "," + std::to_string(l) +
                                                  "), family " + to_string(fam));
      }
  }
  return c.done("100 triples agree on 289 pairs each (" + std::to_string(solutions) +
                " solutions in the window)");
}

PLMap random_up(std::mt19937& rng) {
  for (;;) {
    PLMap tau = random_EP2(rng, 4);
    PLMap y = compose(invert(tau), random_F(rng, 8));
    if (!fixed_set(y).empty()) continue;
    return y(Rat(0)) > 0 ? y : invert(y);
  }
}

// 6. Mather data of y and z = h^-1 y h for fixed-point free y > t in EP2.
Outcome c6() {
  Check c;
  std::mt19937 rng(6006);
  for (int i = 0; i < 200; ++i) {
    PLMap y = random_up(rng), h = random_F(rng, 8);
    PLMap z = conjugate(y, h);
    MatherData md = mather(y, z);
    SolutionFamily fam = solve_exponent(md.t0, md.t1, md.t);
    Membership m = classify(h);
    long k = to_long(*m.m_plus), l = to_long(*m.m_minus);
    std::string tag = "pair " + std::to_string(i);
    c.expect(fam.kind() != SolutionFamily::Kind::Empty, tag + ": exponent equation empty");
    c.expect(fam.contains(k, l), tag + ": conjugator tails not among the solutions");
    bool found = false;
    for (long ell : fam.tails()) {
      auto g = conjugate_with_tail(y, z, ell);
      if (g && conjugate(y, *g) == z) {
        found = true;
        break;
      }
    }
    c.expect(found, tag + ": no admissible tail gave a verified conjugator");
  }
  return c.done("200 pairs solvable, each with a verified conjugator from an admissible tail");
}

// 7. Orientation-reversing twisted round trips, and involution pairs whose
// offset is not integral.
Outcome c7() {
  Check c;
  std::mt19937 rng(7007);
  for (int i = 0; i < 200; ++i) {
    PLMap tau = random_tau(rng, true);
    PLMap y = random_F(rng, 10), g = random_F(rng, 8);
    PLMap z = twisted_image(y, g, tau);
    c.expect(twisted_witness_ok(y, z, tau, tcp(y, z, tau)),
             "reversing instance " + std::to_string(i) + " not verified");
  }
  // Right tail t + 1/2, identity on the left.
  PLMap half = PLMap::from_points({Rat(0), Rat(1, 2)}, {Rat(0), Rat(1)});
  int negatives = 0;
  for (int i = 0; i < 50; ++i) {
    PLMap f = random_F(rng, 6);
    PLMap y = conjugate(gens::R(), f);
    Rat p = reversing_fixed_point(y);
    // Conjugating by a map fixing p keeps the fixed point.
    PLMap s = compose(PLMap::translation(p), compose(half, PLMap::translation(-p)));
    PLMap z = conjugate(y, s);
    std::string tag = "special instance " + std::to_string(i);
    c.expect(!reversing_special(y, z).has_value(), tag + " answered Yes");
    c.expect(!conj_tilde(y, z).yes(), tag + ": conj_tilde answered Yes");
    ++negatives;
  }
  return c.done("200 reversing round trips verified, " + std::to_string(negatives) +
                " non-integral special instances answered No");
}

// 8. R-infinity families.
Outcome c8() {
  Check c;
  for (const char* t : {"", "x0", "R", "R x0"}) {
    PLMap tau = eval_word(t);
    auto fam = rinfty_family_F(tau, 5);
    c.expect(fam.size() == 5, std::string("family for '") + t + "' has wrong size");
    for (std::size_t i = 0; i < fam.size(); ++i) {
      c.expect(classify(fam[i]).in_F, std::string("member not in F for '") + t + "'");
      for (std::size_t j = 0; j < fam.size(); ++j)
        if (i != j)
          c.expect(!tcp(fam[i], fam[j], tau).yes(), std::string("tau '") + t + "': " +
                                                        std::to_string(i) + " ~ " +
                                                        std::to_string(j));
    }
  }
  auto T = rinfty_family_T(4);
  c.expect(T.size() == 4, "circle family has wrong size");
  long last = -1;
  std::string counts;
  for (const auto& h : T) {
    long n = circle_boundary_count(power(h, 2));
    counts += (counts.empty() ? "" : ",") + std::to_string(n);
    c.expect(n > last, "boundary counts not strictly increasing");
    c.expect(reverse_conjugate(h.lift()) == h.lift(), "member not symmetric under R");
    last = n;
  }
  return c.done("4 taus x 20 ordered pairs all No; circle counts " + counts + ", all symmetric");
}

// Reduced words of length 1..max_len in f, g equal to the identity. Sample
// points screen candidates before the exact check.
long short_relations(const PLMap& f, const PLMap& g, int max_len, const std::vector<Rat>& pts) {
  const PLMap gen[4] = {f, invert(f), g, invert(g)};
  long found = 0;
  std::vector<int> word;
  std::function<void(const std::vector<Rat>&, int)> dfs = [&](const std::vector<Rat>& v,
                                                              int last) {
    if (!word.empty() && v == pts) {
      PLMap m;
      for (int i : word) m = compose(gen[i], m);
      found += m.is_identity();
    }
    if (static_cast<int>(word.size()) == max_len) return;
    for (int i = 0; i < 4; ++i) {
      if (last >= 0 && (i ^ 1) == last) continue;
      std::vector<Rat> u = v;
      for (Rat& x : u) x = gen[i](x);
      word.push_back(i);
      dfs(u, i);
      word.pop_back();
    }
  };
  dfs(pts, -1);
  return found;
}

Word reduced_word(std::mt19937& rng, const char* a, const char* b) {
  std::uniform_int_distribution<int> len(1, 8), pick(0, 1), sign(0, 1);
  Word w;
  int n = len(rng);
  while (static_cast<int>(w.letters.size()) < n) {
    std::pair<std::string, long> l{pick(rng) ? a : b, sign(rng) ? 1 : -1};
    if (!w.letters.empty() && w.letters.back().first == l.first &&
        w.letters.back().second == -l.second)
      continue;
    w.letters.push_back(l);
  }
  return w;
}

// 9. The direct product of free groups in Aut+(F).
Outcome c9() {
  Check c;
  const F2xF2& g = f2xf2_generators();
  c.expect(project_end(g.ahat, Side::Left) == g.a, "left projection of ahat");
  c.expect(project_end(g.bhat, Side::Left) == g.b, "left projection of bhat");
  c.expect(project_end(g.chat, Side::Right) == g.c, "right projection of chat");
  c.expect(project_end(g.dhat, Side::Right) == g.d, "right projection of dhat");
  for (const PLMap* m : {&g.ahat, &g.bhat})
    c.expect(project_end(*m, Side::Right).is_identity(), "left generator moves the right end");
  for (const PLMap* m : {&g.chat, &g.dhat})
    c.expect(project_end(*m, Side::Left).is_identity(), "right generator moves the left end");
  for (const PLMap* l : {&g.ahat, &g.bhat})
    for (const PLMap* r : {&g.chat, &g.dhat})
      c.expect(compose(*l, *r) == compose(*r, *l), "disjoint supports do not commute");
  std::vector<Rat> left, right;
  for (int k = 0; k < 12; ++k) {
    left.push_back(rat(-2 * k - 1, 7));
    right.push_back(rat(2 * k + 1, 7));
  }
  long ab = short_relations(g.ahat, g.bhat, 8, left);
  long cd = short_relations(g.chat, g.dhat, 8, right);
  c.expect(ab == 0, std::to_string(ab) + " relations of length <= 8 among ahat, bhat");
  c.expect(cd == 0, std::to_string(cd) + " relations of length <= 8 among chat, dhat");
  std::mt19937 rng(9009);
  for (int i = 0; i < 200; ++i) {
    Word w1 = reduced_word(rng, "ahat", "bhat"), w2 = reduced_word(rng, "chat", "dhat");
    c.expect(!stab_witness(w1, w2), "stab_witness true on " + w1.to_string() + " | " +
                                        w2.to_string());
  }
  return c.done("projections and commutation exact; no relations of length <= 8; "
                "stab_witness false on 200 pairs");
}

// Same map with a wider window and redundant points.
PLMap perturbed(const PLMap& f, std::mt19937& rng) {
  std::uniform_int_distribution<int> ext(0, 3);
  Rat L = f.window_left() - ext(rng) - rat(1, 3);
  Rat R = f.window_right() + ext(rng) + rat(1, 5);
  std::vector<Rat> xs{L, R};
  for (const auto& x : f.candidates_in(L, R)) xs.push_back(x);
  xs.push_back((L + R) / 2);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Rat> ys;
  for (const auto& x : xs) ys.push_back(f(x));
  return PLMap::make(f.orientation(), xs, ys, f.left_tail(), f.right_tail());
}

// 10. Group laws and canonical normalization.
Outcome c10() {
  Check c;
  std::mt19937 rng(10010);
  std::uniform_int_distribution<int> num(-40, 40);
  for (int i = 0; i < 1000; ++i) {
    bool ep2 = i % 2;
    PLMap f = ep2 ? random_EP2(rng, 6) : random_F(rng, 8);
    PLMap g = ep2 ? random_EP2(rng, 6) : random_F(rng, 8);
    PLMap h = ep2 ? random_EP2(rng, 6) : random_F(rng, 8);
    if (i % 4 == 1) f = compose(gens::R(), f);
    std::string tag = "instance " + std::to_string(i);
    c.expect(compose(f, compose(g, h)) == compose(compose(f, g), h), tag + ": associativity");
    c.expect(compose(f, invert(f)).is_identity() && compose(invert(f), f).is_identity(),
             tag + ": inverse");
    c.expect(compose(f, PLMap::identity()) == f && compose(PLMap::identity(), f) == f,
             tag + ": identity");
    Rat t = rat(num(rng), 16);
    c.expect(compose(f, g)(t) == f(g(t)), tag + ": pointwise composition");
    c.expect(perturbed(f, rng) == f, tag + ": normalization not canonical");
    c.expect(PLMap::from_text(f.to_text()) == f, tag + ": text round trip");
    if (!ep2) {
      auto mf = classify(f), mg = classify(g), mfg = classify(compose(f, g));
      c.expect(mfg.in_F && *mfg.m_minus == *mf.m_minus + *mg.m_minus &&
                   *mfg.m_plus == *mf.m_plus + *mg.m_plus,
               tag + ": tail translations not additive");
    } else {
      c.expect(classify(compose(g, h)).in_EP2, tag + ": EP2 not closed");
    }
  }
  return c.done("1000 instances satisfy the group laws and normalize canonically");
}

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "relators", 1, c1},
    {2, "tcp round trips", 60, c2},
    {3, "tcp negatives", 30, c3},
    {4, "transport vs word BFS", 300, c4},
    {5, "exponent equation vs brute force", 120, c5},
    {6, "mather consistency", 180, c6},
    {7, "orientation reversing", 120, c7},
    {8, "R-infinity families", 60, c8},
    {9, "F2 x F2 construction", 120, c9},
    {10, "plmap group laws", 30, c10},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& cr : kCriteria) {
    if (!only.empty() && !only.count(cr.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < cr.budget;
    bool pass = o.ok && in_time;
    failed += !pass;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (pass ? "PASS" : "FAIL") << "  criterion " << cr.id << " (" << cr.name << "): "
         << o.detail << " [" << secs << " s, budget " << cr.budget << " s"
         << (in_time ? "" : ", over budget") << "]";
    std::cout << line.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
