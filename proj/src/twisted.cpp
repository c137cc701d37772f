#include "thompson/twisted.hpp"

#include <algorithm>

#include "thompson/errors.hpp"
#include "thompson/transport.hpp"
#include "thompson/words.hpp"

namespace thompson {

namespace {

Decision no(Decision d, Reason r, const std::string& why) {
  d.reason = r;
  d.trace.push_back("No: " + why);
  return d;
}

// Smallest-denominator dyadic strictly inside (a, b).
Rat dyadic_between(const Rat& a, const Rat& b) {
  Rat e(1);
  while (e >= b - a) e /= 2;
  while (e * 2 < b - a) e *= 2;
  return (Rat(floor_rat(a / e)) + 1) * e;
}

// u with f(t) = t + u near +inf (right) or -inf (left), if f ends that way.
std::optional<Rat> end_translation(const PLMap& f, bool right) {
  if (f.orientation() != 1) return std::nullopt;
  Rat a = right ? f.window_right() : f.window_left() - 1;
  Rat u = f(a) - a;
  for (const auto& c : f.candidates_in(a, a + 1)) {
    if (f(c) - c != u) return std::nullopt;
    if (c < a + 1 && f.slope_right(c) != 1) return std::nullopt;
  }
  return u;
}

bool integral_ends(const PLMap& f) {
  auto l = end_translation(f, false), r = end_translation(f, true);
  return l && r && is_integer(*l) && is_integer(*r);
}

PLMap from_pairs(const std::vector<std::pair<Rat, Rat>>& pts) {
  std::vector<Rat> xs, ys;
  for (const auto& [x, y] : pts) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return PLMap::from_points(std::move(xs), std::move(ys));
}

void require_reversing(const PLMap& y, const PLMap& z, const Rat& p) {
  if (y.orientation() != -1 || z.orientation() != -1)
    throw Error("PreconditionViolated", "maps must reverse orientation");
  if (z(p) != p) throw Error("PreconditionViolated", "maps do not share their fixed point");
}

Component component_at(const PLMap& f, const Rat& p) {
  for (const auto& c : fixed_components(f, p, p))
    if (c.contains(p)) return c;
  throw Error("InternalError", "fixed point without component");
}

// Replaces g near p by the identity, keeping it a conjugator of the squares on
// [p, inf). p lies inside a fixed interval of both squares.
std::optional<PLMap> pin_at(const PLMap& g, const Component& cz, const Rat& p) {
  PLMap gi = invert(g);
  Rat lo = std::max<Rat>(p, gi(p));
  Rat hi = cz.hi ? *cz.hi : lo + 2;
  if (lo >= hi) return std::nullopt;
  Rat e = dyadic_between(lo, hi);
  Rat ge = g(e);
  Rat q = dyadic_between(p, std::min<Rat>(e, ge));
  PLMap mid = from_pairs(dyadic_interpolation(q, e, q, ge));
  return glue({{std::nullopt, q, PLMap::identity()}, {q, e, mid}, {e, std::nullopt, g}});
}

}  // namespace

bool check_tau(const PLMap& tau, const PLMap& image_x0, const PLMap& image_x1) {
  if (!classify(tau).in_EPtilde2) throw Error("NotInEPtilde2", "tau is not in EP~2");
  PLMap ti = invert(tau);
  return compose(tau, compose(gens::x0(), ti)) == image_x0 &&
         compose(tau, compose(gens::x1(), ti)) == image_x1;
}

TwistedReduction reduce_tcp(const PLMap& y, const PLMap& z, const PLMap& tau) {
  PLMap ti = invert(tau);
  return {compose(ti, y), compose(ti, z)};
}

Rat reversing_fixed_point(const PLMap& f) {
  if (f.orientation() != -1) throw Error("PreconditionViolated", "map preserves orientation");
  auto h = [&](const Rat& t) -> Rat { return f(t) - t; };
  Rat width = f.window_right() - f.window_left() + 2;
  Rat lo = f.window_left() - 1, hi = f.window_right() + 1;
  while (h(lo) < 0) lo -= width;
  while (h(hi) > 0) hi += width;
  std::vector<Rat> pts = f.candidates_in(lo, hi);
  pts.push_back(lo);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Rat& a = pts[i];
    if (h(a) == 0) return a;
    if (h(pts[i + 1]) > 0) continue;
    Rat s = f.slope_right(a);
    return (f(a) - s * a) / (1 - s);
  }
  return hi;
}

std::optional<PLMap> reversing_special(const PLMap& y, const PLMap& z) {
  Rat p = reversing_fixed_point(y);
  require_reversing(y, z, p);
  if (!compose(y, y).is_identity() || !compose(z, z).is_identity())
    throw Error("PreconditionViolated", "maps are not involutions");
  PLMap w = compose(invert(y), z);
  auto u = end_translation(w, true);
  if (!u || !is_integer(*u)) return std::nullopt;
  PLMap g = glue({{std::nullopt, p, PLMap::identity()}, {p, std::nullopt, w}});
  if (!classify(g).in_F || conjugate(y, g) != z) return std::nullopt;
  return g;
}

Decision reversing_general(const PLMap& y, const PLMap& z) {
  Decision d;
  Rat p = reversing_fixed_point(y);
  require_reversing(y, z, p);
  d.trace.push_back("common fixed point " + to_string(p));
  if (y == z) {
    d.witness = PLMap::identity();
    d.trace.push_back("y = z");
    return d;
  }
  if (!integral_ends(compose(invert(y), z)))
    return no(std::move(d), Reason::TailMismatch, "y^-1 z does not end in integral translations");
  PLMap y2 = compose(y, y), z2 = compose(z, z);
  if (y2.is_identity() != z2.is_identity())
    return no(std::move(d), Reason::FixSetMismatch, "only one map is an involution");
  if (y2.is_identity()) {
    d.trace.push_back("involutions");
    if (auto g = reversing_special(y, z)) {
      d.witness = g;
      return d;
    }
    return no(std::move(d), Reason::TailMismatch, "offset of y^-1 z is not integral");
  }
  FixSet fy2 = fixed_set(y2), fz2 = fixed_set(z2);
  bool bounded = fy2.left == FixTail::Empty && fy2.right == FixTail::Empty;
  if (fy2.left != fz2.left || fy2.right != fz2.right ||
      (bounded && fy2.components.size() != fz2.components.size()))
    return no(std::move(d), Reason::FixSetMismatch, "fixed sets of the squares differ");
  if (!is_dyadic(p) && abs(y.slope_right(p)) != abs(z.slope_right(p)))
    return no(std::move(d), Reason::SlopeObstruction, "slopes differ at a non-dyadic fixed point");

  Decision sq = conj_in_F(y2, z2);
  for (const auto& s : sq.trace) d.trace.push_back("squares: " + s);
  if (!sq.yes()) return no(std::move(d), sq.reason, "squares are not conjugate");
  auto g = conj_matching_at(y2, z2, p);
  if (!g) return no(std::move(d), Reason::ExhaustedCandidates, "no conjugator of the squares fixes p");
  if ((*g)(p) != p) {
    Component cz = component_at(z2, p);
    if (!cz.is_point()) g = pin_at(*g, cz, p);
    if (!g || (*g)(p) != p)
      return no(std::move(d), Reason::ExhaustedCandidates, "could not pin the conjugator at p");
    d.trace.push_back("pinned conjugator at p inside a fixed interval");
  }
  PLMap left = compose(y, compose(*g, invert(z)));
  PLMap G = glue({{std::nullopt, p, left}, {p, std::nullopt, *g}});
  if (!classify(G).in_F) {
    d.trace.push_back("glued conjugator is not in F");
    return no(std::move(d), Reason::ExhaustedCandidates, "glued candidate left F");
  }
  if (conjugate(y, G) != z)
    return no(std::move(d), Reason::ExhaustedCandidates, "glued candidate fails verification");
  d.witness = G;
  d.trace.push_back("glued square conjugator across p");
  return d;
}

Decision conj_tilde(const PLMap& yb, const PLMap& zb) {
  Decision d;
  if (yb.orientation() != zb.orientation())
    return no(std::move(d), Reason::OrientationMismatch, "orientations differ");
  if (yb.orientation() == 1) return conj_in_F(yb, zb);
  Rat py = reversing_fixed_point(yb), pz = reversing_fixed_point(zb);
  d.trace.push_back("fixed points " + to_string(py) + " and " + to_string(pz));
  auto A = transport_build({{pz, py}});
  if (!A) return no(std::move(d), Reason::FixSetMismatch, "fixed points are not in one F-orbit");
  PLMap zp = compose(*A, compose(zb, invert(*A)));
  Decision r = reversing_general(yb, zp);
  for (auto& s : r.trace) d.trace.push_back(std::move(s));
  d.reason = r.reason;
  if (r.yes()) d.witness = compose(*r.witness, *A);
  return d;
}

Decision tcp(const PLMap& y, const PLMap& z, const PLMap& tau) {
  if (!classify(y).in_F || !classify(z).in_F) throw Error("NotInF", "y and z must lie in F");
  if (!classify(tau).in_EPtilde2) throw Error("NotInEPtilde2", "tau is not in EP~2");
  auto [yb, zb] = reduce_tcp(y, z, tau);
  Decision d = conj_tilde(yb, zb);
  if (!d.yes()) return d;
  PLMap G = *d.witness;
  PLMap g = invert(G);
  if (compose(tau, compose(g, compose(invert(tau), compose(y, G)))) != z)
    throw Error("InternalError", "twisted witness fails verification");
  d.witness = g;
  d.trace.push_back("verified z = g^-1 y tau^-1 g tau");
  return d;
}

}  // namespace thompson
