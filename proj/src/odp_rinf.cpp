#include "thompson/odp_rinf.hpp"

#include <algorithm>
#include <set>

#include "thompson/errors.hpp"
#include "thompson/transport.hpp"

namespace thompson {

namespace {

Decision no(Decision d, Reason r, const std::string& why) {
  d.reason = r;
  d.trace.push_back("No: " + why);
  return d;
}

PLMap from_pairs(const std::vector<std::pair<Rat, Rat>>& pts) {
  std::vector<Rat> xs, ys;
  for (const auto& [x, y] : pts) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return PLMap::from_points(std::move(xs), std::move(ys));
}

PLMap interpolate(const Rat& x0, const Rat& x1, const Rat& y0, const Rat& y1) {
  return from_pairs(dyadic_interpolation(x0, x1, y0, y1));
}

bool same_fixed_set(const FixSet& a, const FixSet& b) {
  return a.components == b.components && a.left == b.left && a.right == b.right;
}

// sup |g(t) - t| for g in EP2.
Rat max_displacement(const PLMap& g) {
  Rat m(0);
  for (const auto& c : g.candidates_in(g.window_left() - 1, g.window_right() + 1))
    m = std::max<Rat>(m, abs(g(c) - c));
  return m;
}

// Bump on [c, c + 1/2] lying above the diagonal inside.
PLMap bump(const Rat& c) {
  return PLMap::from_points({c, c + Rat(1, 8), c + Rat(1, 4), c + Rat(1, 2)},
                            {c, c + Rat(1, 4), c + Rat(3, 8), c + Rat(1, 2)});
}

// An element of F equal to s on [A, B] and to t + nl, t + nr far out.
PLMap agree_on(const PLMap& s, long A, long B, long nl, long nr) {
  Rat sA = s(Rat(A)), sB = s(Rat(B));
  Rat A0 = Rat(floor_rat(std::min<Rat>(Rat(A), sA - nl))) - 1;
  Rat B0 = Rat(ceil_rat(std::max<Rat>(Rat(B), sB - nr))) + 1;
  return glue({{std::nullopt, A0, PLMap::translation(Rat(nl))},
               {A0, Rat(A), interpolate(A0, Rat(A), A0 + nl, sA)},
               {Rat(A), Rat(B), s},
               {Rat(B), B0, interpolate(Rat(B), B0, sB, B0 + nr)},
               {B0, std::nullopt, PLMap::translation(Rat(nr))}});
}

}  // namespace

Decision odp_fixed(const PLMap& y, const PLMap& z) {
  FixSet fy = fixed_set(y), fz = fixed_set(z);
  if (fy.empty() || !same_fixed_set(fy, fz))
    throw Error("PreconditionViolated", "odp_fixed needs equal nonempty fixed sets");
  Decision d = conj_search(y, z, ConjugatorClass::EP2);
  if (d.yes() && (!classify(*d.witness).in_EP2 || conjugate(y, *d.witness) != z))
    throw Error("InternalError", "EP2 witness fails verification");
  return d;
}

Decision odp_decide(const PLMap& y, const PLMap& z) {
  if (!classify(y).in_F || !classify(z).in_F) throw Error("NotInF", "odp_decide needs elements of F");
  Decision d;
  FixSet fy = fixed_set(y), fz = fixed_set(z);
  if (fy.empty() != fz.empty())
    return no(std::move(d), Reason::FixSetMismatch, "only one map has fixed points");
  if (fy.empty()) {
    // Conjugating by a unit-periodic tail keeps integral end translations.
    if (y.left_constant() != z.left_constant() || y.right_constant() != z.right_constant())
      return no(std::move(d), Reason::TailMismatch, "end translations differ");
    d = conj_in_F(y, z);
    if (d.yes()) return d;
    d.trace.push_back("fixed-point free: left as a simultaneous conjugacy instance on the circle");
    d.reason = Reason::ExhaustedCandidates;
    return d;
  }
  auto al = align_fixed_sets(y, z);
  if (!al) return no(std::move(d), Reason::FixSetMismatch, "fixed sets cannot be aligned in F");
  if (!same_fixed_set(fy, fixed_set(al->z_prime)))
    return no(std::move(d), Reason::FixSetMismatch, "aligned fixed sets differ");
  d.trace.push_back("aligned fixed sets in F");
  Decision r = odp_fixed(y, al->z_prime);
  for (auto& s : r.trace) d.trace.push_back(std::move(s));
  d.reason = r.reason;
  if (r.yes()) {
    PLMap g = compose(*r.witness, al->g);
    if (conjugate(y, g) != z) throw Error("InternalError", "composed witness fails verification");
    d.witness = g;
  }
  return d;
}

T2CPInstance odp_reduce(const PLMap& y, const PLMap& z) {
  if (!classify(y).in_F || !classify(z).in_F)
    throw Error("PreconditionViolated", "odp_reduce needs elements of F");
  if (!tails_agree(y, z)) throw Error("TailMismatch", "tail translations differ");
  MatherData md = mather(y, z);
  T2CPInstance inst;
  inst.s1 = md.v1;
  inst.ystar = compose(md.y_inf, compose(md.v0, invert(md.y_inf)));
  inst.zstar = compose(md.z_inf, compose(md.v0, invert(md.z_inf)));
  inst.y = y;
  inst.L = md.L;
  inst.R = md.R;
  return inst;
}

CircleMap induced_right(const T2CPInstance& inst, const PLMap& h) {
  const PLMap& y = inst.y;
  Rat X = std::max<Rat>(inst.R, h.window_right()) + 1;
  while (h(X) < inst.R + 1) X += 1;
  auto steps_to = [&](const Rat& top) {
    long k = 0;
    for (Rat t = inst.L; t < top; t = y(t)) ++k;
    return k + 1;
  };
  Rat b = y(X) - X;
  Rescaling r1 = rescale(y, inst.L, 1, steps_to(X + 2 * b));
  Rat u = Rat(ceil_rat(r1.H(X)));
  Rat x = invert(r1.H)(u);
  Rat top = std::max<Rat>(x + b, h(x + b)) + b;
  Rescaling r2 = rescale(y, inst.L, 1, steps_to(top));
  PLMap hbar = compose(r2.H, compose(h, invert(r2.H)));
  return CircleMap::from_window(hbar, u);
}

bool solves(const T2CPInstance& inst, const CircleMap& v) {
  CircleMap vi = invert(v);
  return compose(vi, compose(inst.s1, v)) == inst.s1 &&
         compose(vi, compose(inst.ystar, v)) == inst.zstar;
}

CircleMap project_end(const PLMap& f, Side side) {
  Rat x = side == Side::Left ? Rat(f.window_left() - 2) : Rat(f.window_right() + 1);
  return CircleMap::from_window(f, x);
}

PLMap embed_preimage(const CircleMap& a, const Rat& p, Side side) {
  if (!is_dyadic(p)) throw Error("PreconditionViolated", "base point must be dyadic");
  if (a.circumference() != 1) throw Error("PreconditionViolated", "unit circle maps only");
  const PLMap& lift = a.lift();
  if (side == Side::Right) {
    Rat v = lift(p + 1);
    Rat k = v > p ? Rat(0) : Rat(floor_rat(p - v)) + 1;
    PLMap at = compose(PLMap::translation(k), lift);
    Rat q = at(p + 1);
    return glue({{std::nullopt, p, PLMap::identity()},
                 {p, p + 1, interpolate(p, p + 1, p, q)},
                 {p + 1, std::nullopt, at}});
  }
  Rat v = lift(p - 1);
  Rat k = v < p ? Rat(0) : Rat(-floor_rat(v - p)) - 1;
  PLMap at = compose(PLMap::translation(k), lift);
  Rat q = at(p - 1);
  return glue({{std::nullopt, p - 1, at},
               {p - 1, p, interpolate(p - 1, p, q, p)},
               {p, std::nullopt, PLMap::identity()}});
}

const F2xF2& f2xf2_generators() {
  static const F2xF2 gens_ = [] {
    PLMap th2 = power(gens::Theta(), 2);
    CircleMap alpha = CircleMap::from_lift(th2);
    // The half-turn conjugate of alpha, fixing 1/2. Adding 1/2 to alpha instead
    // would make beta alpha^-1 a rotation of order 2.
    CircleMap half = CircleMap::rotation(Rat(1, 2));
    CircleMap beta = compose(half, compose(alpha, invert(half)));
    F2xF2 g;
    // Word order: "alpha beta alpha^-1" applies alpha first.
    g.a = power(alpha, 2);
    g.b = power(beta, 2);
    g.c = compose(invert(alpha), compose(beta, alpha));
    g.d = compose(invert(beta), compose(alpha, beta));
    g.ahat = embed_preimage(g.a, Rat(0), Side::Left);
    g.bhat = embed_preimage(g.b, Rat(0), Side::Left);
    g.chat = embed_preimage(g.c, Rat(0), Side::Right);
    g.dhat = embed_preimage(g.d, Rat(0), Side::Right);
    const std::pair<const char*, const PLMap*> named[] = {
        {"ahat", &g.ahat}, {"bhat", &g.bhat}, {"chat", &g.chat}, {"dhat", &g.dhat}};
    for (const auto& [name, map] : named)
      if (!has_generator(name)) register_generator(name, *map);
    return g;
  }();
  return gens_;
}

bool stab_witness(const Word& w1, const Word& w2) {
  f2xf2_generators();
  for (const auto& [name, e] : w1.letters)
    if (name != "ahat" && name != "bhat") throw Error("InvalidWord", "w1 must use ahat, bhat");
  for (const auto& [name, e] : w2.letters)
    if (name != "chat" && name != "dhat") throw Error("InvalidWord", "w2 must use chat, dhat");
  PLMap tau = eval_word(w1 * w2);
  return project_end(tau, Side::Left) == project_end(tau, Side::Right);
}

long barred_fix_components(const PLMap& z, const PLMap& tau) {
  PLMap u = compose(invert(tau), z);
  if (u.orientation() == -1) u = compose(u, u);
  FixSet fs = fixed_set(u);
  if (fs.left == FixTail::PeriodicInfinite || fs.right == FixTail::PeriodicInfinite)
    throw Error("UnboundedFixedSet", "fixed set is periodic near infinity");
  return static_cast<long>(fs.components.size());
}

std::vector<PLMap> rinfty_family_F(const PLMap& tau, long n) {
  if (n < 1) throw Error("PreconditionViolated", "family size must be positive");
  if (!classify(tau).in_EPtilde2) throw Error("NotInEPtilde2", "tau is not in EP~2");
  const bool rev = tau.orientation() == -1;
  const long B = n + 1, A = rev ? -B : -1;
  PLMap f0;
  if (rev) {
    PLMap rho = invert(tau);
    long N = to_long(ceil_rat(max_displacement(compose(rho, rho)))) + 1;
    f0 = agree_on(compose(tau, gens::R()), A, B, -N, N);
  } else {
    long N = to_long(ceil_rat(max_displacement(tau))) + 1;
    f0 = agree_on(tau, A, B, N, N);
  }
  std::vector<PLMap> out;
  long last = -1;
  for (long i = 1; i <= n; ++i) {
    // i - 1 bumps give i fixed components on [A, B]; i symmetric pairs give
    // 2i + 1 around the fixed point 0.
    PLMap w;
    for (long j = 1; j <= (rev ? i : i - 1); ++j) {
      PLMap b = bump(Rat(j) + Rat(1, 4));
      w = rev ? compose(reverse_conjugate(b), compose(b, w)) : compose(b, w);
    }
    PLMap z = compose(f0, w);
    long count = barred_fix_components(z, tau);
    if (!classify(z).in_F || count <= last)
      throw Error("InternalError", "family member fails its component count");
    last = count;
    out.push_back(z);
  }
  return out;
}

long circle_boundary_count(const CircleMap& c) {
  auto f = c.fixing_lift();
  if (!f) return 0;
  std::set<Rat> pts;
  for (const auto& comp : fixed_components(*f, Rat(-1), Rat(2)))
    for (const auto& e : {comp.lo, comp.hi})
      if (e && *e >= 0 && *e < 1) pts.insert(*e);
  return static_cast<long>(pts.size());
}

std::vector<CircleMap> rinfty_family_T(long n) {
  if (n < 1) throw Error("PreconditionViolated", "family size must be positive");
  std::vector<Rat> xs{Rat(0), Rat(1, 8), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(7, 8), Rat(1)};
  std::vector<Rat> ys{Rat(0), Rat(1, 4), Rat(3, 8), Rat(1, 2), Rat(5, 8), Rat(3, 4), Rat(1)};
  std::vector<CircleMap> out;
  long last = -1;
  for (long i = 1; i <= n; ++i) {
    if (i > 1) {
      std::vector<Rat> nx, ny;
      for (int half = 0; half < 2; ++half)
        for (std::size_t k = 0; k < xs.size(); ++k) {
          if (half == 1 && k == 0) continue;
          nx.push_back(rat(half, 2) + xs[k] / 2);
          ny.push_back(rat(half, 2) + ys[k] / 2);
        }
      xs = std::move(nx);
      ys = std::move(ny);
    }
    PLMap lift = PLMap::make(1, xs, ys, TailKind::Periodic, TailKind::Periodic);
    CircleMap h = CircleMap::from_lift(lift);
    long count = circle_boundary_count(power(h, 2));
    if (reverse_conjugate(h.lift()) != h.lift() || count <= last)
      throw Error("InternalError", "family member is not symmetric or repeats a count");
    last = count;
    out.push_back(h);
  }
  return out;
}

}  // namespace thompson
