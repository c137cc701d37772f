#include "thompson/circle.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "thompson/conjugacy.hpp"
#include "thompson/transport.hpp"

namespace thompson {

namespace {

const PLMap& unit_shift() {
  static const PLMap t1 = PLMap::translation(Rat(1));
  return t1;
}

Rat frac(const Rat& t) { return t - Rat(floor_rat(t)); }

void sort_unique(std::vector<Rat>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Boundary of Fix on the circle, reduced to [0, 1).
std::vector<Rat> boundary_mod1(const PLMap& fixing) {
  std::vector<Rat> out;
  for (const auto& c : fixed_components(fixing, Rat(0), Rat(1))) {
    if (c.lo) out.push_back(frac(*c.lo));
    if (c.hi) out.push_back(frac(*c.hi));
  }
  sort_unique(out);
  return out;
}

}  // namespace

CircleMap::CircleMap() = default;

CircleMap CircleMap::from_lift(const PLMap& lift, const Rat& circumference) {
  if (lift.orientation() != 1 || compose(lift, unit_shift()) != compose(unit_shift(), lift))
    throw Error("InvalidMap", "not the lift of a circle homeomorphism");
  if (circumference <= 0) throw Error("InvalidMap", "circumference must be positive");
  CircleMap c;
  c.a_ = circumference;
  Int p = floor_rat(lift(Rat(0)));
  c.lift_ = p == 0 ? lift : compose(PLMap::translation(Rat(-p)), lift);
  return c;
}

CircleMap CircleMap::from_window(const PLMap& f, const Rat& x) {
  auto xs = f.candidates_in(x, x + 1);
  std::vector<Rat> ys;
  ys.reserve(xs.size());
  for (const auto& t : xs) ys.push_back(f(t));
  if (ys.back() != ys.front() + 1) throw Error("InvalidMap", "window is not a fundamental domain");
  return from_lift(PLMap::make(1, xs, ys, TailKind::Periodic, TailKind::Periodic));
}

std::string CircleMap::to_text() const {
  return "circumference " + to_string(a_) + "\n" + lift_.to_text();
}

CircleMap CircleMap::from_text(std::string_view text) {
  std::size_t line = 1, pos = 0;
  // Skip blank and comment lines before the header.
  for (;;) {
    std::size_t nl = text.find('\n', pos);
    std::string_view l = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    std::size_t first = l.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && l[first] != '#') {
      constexpr std::string_view key = "circumference";
      if (l.substr(first, key.size()) != key) throw ParseError("expected 'circumference'", line, first + 1);
      std::size_t v = l.find_first_not_of(" \t", first + key.size());
      if (v == std::string_view::npos) throw ParseError("missing circumference", line, l.size() + 1);
      std::size_t e = l.find_first_of(" \t\r#", v);
      Rat a = parse_rat(l.substr(v, e == std::string_view::npos ? l.npos : e - v), line, v + 1);
      if (nl == std::string_view::npos) throw ParseError("missing lift document", line + 1, 1);
      // Keep line numbers of the lift document meaningful.
      std::string rest(line, '\n');
      rest.append(text.substr(nl + 1));
      return from_lift(PLMap::from_text(rest), a);
    }
    if (nl == std::string_view::npos) throw ParseError("expected 'circumference'", line, 1);
    pos = nl + 1;
    ++line;
  }
}

CircleMap CircleMap::rotation(const Rat& r) { return from_lift(PLMap::translation(r)); }

Rat CircleMap::operator()(const Rat& t) const { return frac(lift_(frac(t))); }

bool CircleMap::is_identity() const { return lift_.is_identity(); }

std::optional<PLMap> CircleMap::fixing_lift() const {
  for (long p : {0L, 1L, -1L}) {
    PLMap f = p == 0 ? lift_ : compose(PLMap::translation(Rat(-p)), lift_);
    if (!fixed_components(f, Rat(0), Rat(1)).empty()) return f;
  }
  return std::nullopt;
}

CircleMap compose(const CircleMap& f, const CircleMap& g) {
  if (f.circumference() != g.circumference()) throw Error("InvalidMap", "circumferences differ");
  return CircleMap::from_lift(compose(f.lift(), g.lift()), f.circumference());
}

CircleMap invert(const CircleMap& f) { return CircleMap::from_lift(invert(f.lift()), f.circumference()); }

CircleMap power(const CircleMap& f, long n) {
  return CircleMap::from_lift(power(f.lift(), n), f.circumference());
}

std::vector<Component> circle_fixed(const CircleMap& c) {
  auto f = c.fixing_lift();
  if (!f) return {};
  std::vector<Component> out;
  for (const auto& comp : fixed_components(*f, Rat(0), Rat(1)))
    if (!comp.lo || *comp.lo < 1) out.push_back(comp);
  return out;
}

std::optional<long> circle_unique_power(const CircleMap& c, const Rat& u, const Rat& v) {
  auto f = c.fixing_lift();
  if (!f) throw Error("PreconditionViolated", "circle map without fixed points");
  Rat u0 = frac(u), v0 = frac(v);
  if ((*f)(u0) == u0) throw Error("FixedBasePoint", "base point " + to_string(u0) + " is fixed");
  std::optional<Rat> a, b;
  for (const auto& comp : fixed_components(*f, u0 - 1, u0 + 1)) {
    if (comp.hi && *comp.hi < u0) a = *comp.hi;
    if (comp.lo && *comp.lo > u0 && !b) b = *comp.lo;
  }
  if (!a || !b) throw Error("InternalError", "fixed points of a fixing lift not found");
  Rat w = v0 + Rat(ceil_rat(*a - v0));
  if (w == *a) w += 1;
  if (!(w < *b)) return std::nullopt;
  return unique_power(*f, u0, w);
}

// ---------------------------------------------------------------------------
// Rescaling and the circle reduction

namespace {

using Points = std::vector<std::pair<Rat, Rat>>;

Rat eval_sorted(const Points& P, const Rat& x) {
  auto it = std::lower_bound(P.begin(), P.end(), x,
                             [](const std::pair<Rat, Rat>& p, const Rat& v) { return p.first < v; });
  if (it == P.end()) throw Error("InternalError", "rescaling evaluated out of range");
  if (it->first == x) return it->second;
  if (it == P.begin()) throw Error("InternalError", "rescaling evaluated out of range");
  auto prev = it - 1;
  return prev->second + (it->second - prev->second) * (x - prev->first) / (it->first - prev->first);
}

Points next_piece(const Points& prev, const PLMap& fwd, const PLMap& back, const Rat& lo, const Rat& hi,
                  const Rat& shift) {
  std::vector<Rat> xs;
  for (const auto& [x, h] : prev) xs.push_back(fwd(x));
  for (const auto& c : back.candidates_in(lo, hi)) xs.push_back(c);
  sort_unique(xs);
  Points out;
  for (const auto& x : xs) out.emplace_back(x, eval_sorted(prev, back(x)) + shift);
  return out;
}

}  // namespace

Rescaling rescale(const PLMap& y, const Rat& L, long k_left, long k_right) {
  PLMap yi = invert(y);
  Rat a = yi(L);
  if (!(a < L)) throw Error("PreconditionViolated", "rescaling needs y > t");
  Points base{{a, Rat(-1)}, {L, Rat(0)}};
  for (const auto& c : y.candidates_in(a, L))
    if (c > a && c < L) base.emplace_back(c, (c - a) / (L - a) - 1);
  std::sort(base.begin(), base.end());
  std::vector<Points> right{base}, left;
  Rat lo_k = a, hi_k = L;
  for (long k = 1; k <= k_right; ++k) {
    Rat nlo = hi_k, nhi = y(hi_k);
    right.push_back(next_piece(right.back(), y, yi, nlo, nhi, Rat(1)));
    hi_k = nhi;
  }
  Points cur = base;
  for (long k = 1; k <= k_left; ++k) {
    Rat nhi = lo_k, nlo = yi(lo_k);
    cur = next_piece(cur, yi, y, nlo, nhi, Rat(-1));
    left.push_back(cur);
    lo_k = nlo;
  }
  std::vector<Rat> xs, ys;
  auto add = [&](const Points& P) {
    for (const auto& [x, h] : P) {
      if (!xs.empty() && x <= xs.back()) continue;
      xs.push_back(x);
      ys.push_back(h);
    }
  };
  for (auto it = left.rbegin(); it != left.rend(); ++it) add(*it);
  for (const auto& P : right) add(P);
  Rescaling r;
  r.H = PLMap::from_points(std::move(xs), std::move(ys));
  r.ybar = compose(r.H, compose(y, invert(r.H)));
  r.lo = lo_k;
  r.hi = hi_k;
  return r;
}

MatherData mather(const PLMap& y, const PLMap& z, std::optional<long> N) {
  auto box = tails_agree(y, z);
  if (!box) throw Error("TailMismatch", "tails differ");
  if (!fixed_set(y).empty() || !fixed_set(z).empty() || !(y(Rat(0)) > 0) || !(z(Rat(0)) > 0))
    throw Error("PreconditionViolated", "circle reduction needs fixed-point-free maps above t");
  const Rat L = box->L, R = box->R;
  PLMap yi = invert(y);
  Rat start = yi(L);
  long m = 0;
  for (Rat t = L; t < R; t = y(t)) ++m;
  Rat target = power(y, m)(L);
  long n = 0;
  Rat w = start;
  while (w < target) {
    w = z(w);
    ++n;
  }
  n = std::max(n, 1L);
  if (N) {
    if (*N < n) throw Error("PreconditionViolated", "N too small to cross the box");
    n = *N;
  }
  long K = 2;
  Rat ym = power(yi, K)(L);
  while (ym > L - 2) {
    ym = yi(ym);
    ++K;
  }
  PLMap zN = power(z, n);
  Rat need = std::max(zN(L), Rat(power(y, m + 2)(L))) + 2;
  long kr = 0;
  for (Rat t = L; t < need; t = y(t)) ++kr;
  Rescaling rs = rescale(y, L, K + 1, kr);
  PLMap Hi = invert(rs.H);
  PLMap lam = compose(rs.H, compose(unit_shift(), Hi));
  PLMap zbar = compose(PLMap::translation(Rat(-n)), compose(rs.H, compose(zN, Hi)));

  MatherData md;
  md.N = n;
  md.L = L;
  md.R = R;
  md.z_inf = CircleMap::from_window(zbar, Rat(-1));
  md.v0 = CircleMap::from_window(lam, Rat(-K - 1));
  md.v1 = CircleMap::from_window(lam, Rat(m + 1));
  md.t1 = md.v1;
  CircleMap zi = invert(md.z_inf);
  md.t0 = compose(md.z_inf, compose(invert(md.v0), zi));
  md.t = zi;
  return md;
}

std::vector<std::pair<Rat, long>> periodic_points(const CircleMap& c) {
  const long max_period = 1024;
  PLMap lq = c.lift();
  for (long q = 1; q <= max_period; ++q) {
    if (q > 1) lq = compose(c.lift(), lq);
    auto xs = lq.candidates_in(Rat(0), Rat(1));
    Rat mn = lq(xs[0]) - xs[0], mx = mn;
    for (const auto& x : xs) {
      Rat d = lq(x) - x;
      mn = std::min(mn, d);
      mx = std::max(mx, d);
    }
    Int p = ceil_rat(mn);
    if (Rat(p) > mx) continue;
    PLMap g = compose(PLMap::translation(Rat(-p)), lq);
    auto comps = fixed_components(g, Rat(0), Rat(1));
    Rat x0 = (comps.empty() || !comps[0].lo) ? Rat(0) : frac(*comps[0].lo);
    std::vector<std::pair<Rat, long>> orbit;
    Rat x = x0;
    for (long i = 0; i < q; ++i) {
      orbit.emplace_back(x, q);
      x = c(x);
    }
    return orbit;
  }
  throw Error("NonConvergent", "no periodic orbit of period <= 1024");
}

// ---------------------------------------------------------------------------
// Exponent equations

bool Coset::contains(long kk, long ll) const {
  switch (kind) {
    case Kind::Point:
      return kk == k && ll == l;
    case Kind::Grid:
      return (kk - k) % step_k == 0 && (ll - l) % step_l == 0;
    case Kind::Line: {
      if (dk == 0 && dl == 0) return kk == k && ll == l;
      if (dk != 0) {
        if ((kk - k) % dk != 0) return false;
        long j = (kk - k) / dk;
        return ll == l + j * dl;
      }
      if ((ll - l) % dl != 0) return false;
      return kk == k;
    }
  }
  return false;
}

SolutionFamily::Kind SolutionFamily::kind() const {
  if (parts.empty()) return Kind::Empty;
  for (const auto& c : parts)
    if (c.kind != Coset::Kind::Point) return Kind::Line;
  return Kind::FiniteSet;
}

bool SolutionFamily::contains(long k, long l) const {
  return std::any_of(parts.begin(), parts.end(), [&](const Coset& c) { return c.contains(k, l); });
}

std::vector<long> SolutionFamily::tails() const {
  std::vector<long> out;
  for (const auto& c : parts) {
    out.push_back(c.l);
    if (c.kind == Coset::Kind::Line && c.dl != 0) {
      out.push_back(c.l + c.dl);
      out.push_back(c.l - c.dl);
    }
  }
  std::vector<long> uniq;
  for (long v : out)
    if (std::find(uniq.begin(), uniq.end(), v) == uniq.end()) uniq.push_back(v);
  return uniq;
}

std::string to_string(const SolutionFamily& f) {
  if (f.parts.empty()) return "Empty";
  std::ostringstream os;
  for (std::size_t i = 0; i < f.parts.size(); ++i) {
    const auto& c = f.parts[i];
    if (i) os << " u ";
    os << "(" << c.k << "," << c.l << ")";
    if (c.kind == Coset::Kind::Line) os << "+Z(" << c.dk << "," << c.dl << ")";
    if (c.kind == Coset::Kind::Grid) os << "+(" << c.step_k << "Z," << c.step_l << "Z)";
  }
  return os.str();
}

bool satisfies(const CircleMap& t0, const CircleMap& t1, const CircleMap& t, long k, long l) {
  return compose(power(t1, k), power(t0, l)) == t;
}

namespace {

Coset point(long k, long l) { return Coset{Coset::Kind::Point, k, l, 0, 0, 1, 1}; }
Coset line(long k, long l, long dk, long dl) { return Coset{Coset::Kind::Line, k, l, dk, dl, 1, 1}; }

// A point of (lo, hi) moved by f, or nullopt when f is the identity there.
std::optional<Rat> moved_point(const PLMap& f, const Rat& lo, const Rat& hi) {
  auto xs = f.candidates_in(lo, hi);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    Rat m = (xs[i] + xs[i + 1]) / 2;
    if (f(m) != m) return m;
  }
  return std::nullopt;
}

std::vector<Rat> interior_boundary(const PLMap& f, const Rat& p) {
  std::vector<Rat> out;
  for (const auto& c : fixed_components(f, p, p + 1)) {
    if (c.lo && *c.lo > p && *c.lo < p + 1) out.push_back(*c.lo);
    if (c.hi && *c.hi > p && *c.hi < p + 1) out.push_back(*c.hi);
  }
  sort_unique(out);
  return out;
}

// Maximal open intervals of (p, p + 1) without fixed points of f.
std::vector<std::pair<Rat, Rat>> gaps(const PLMap& f, const Rat& p) {
  std::vector<std::pair<Rat, Rat>> out;
  Rat prev = p;
  for (const auto& c : fixed_components(f, p, p + 1)) {
    Rat lo = c.lo ? std::max(*c.lo, p) : p;
    if (lo > prev) out.emplace_back(prev, lo);
    if (c.hi) prev = std::max(prev, std::min(*c.hi, Rat(p + 1)));
  }
  if (prev < p + 1) out.emplace_back(prev, p + 1);
  return out;
}

bool lift_satisfies(const PLMap& t0, const PLMap& t1, const PLMap& t, long k, long l) {
  return compose(power(t1, k), power(t0, l)) == t;
}

struct Row {
  long a1, a0, c;
};

}  // namespace

SolutionFamily interval_exponent(const PLMap& t0, const PLMap& t1, const PLMap& t, const Rat& p) {
  for (const PLMap* f : {&t0, &t1, &t})
    if ((*f)(p) != p || (*f)(p + 1) != p + 1)
      throw Error("PreconditionViolated", "maps must fix the cut point");
  SolutionFamily fam;
  bool id0 = t0.is_identity(), id1 = t1.is_identity();
  if (id0 && id1) {
    if (t.is_identity()) fam.parts.push_back(Coset{Coset::Kind::Grid, 0, 0, 0, 0, 1, 1});
    return fam;
  }
  if (id1) {
    auto u = moved_point(t0, p, p + 1);
    auto l = unique_power(t0, *u, t(*u));
    if (l && power(t0, *l) == t) fam.parts.push_back(line(0, *l, 1, 0));
    return fam;
  }
  if (id0) {
    auto u = moved_point(t1, p, p + 1);
    auto k = unique_power(t1, *u, t(*u));
    if (k && power(t1, *k) == t) fam.parts.push_back(line(*k, 0, 0, 1));
    return fam;
  }
  PLMap ti = invert(t);
  // A boundary point of one fixed set moved by the other map pins both exponents.
  for (const auto& x : interior_boundary(t1, p)) {
    if (t0(x) == x) continue;
    auto ml = unique_power(t0, x, ti(x));
    if (!ml) return fam;
    long l = -*ml;
    PLMap s = compose(t, power(t0, -l));
    auto u = moved_point(t1, p, p + 1);
    auto k = unique_power(t1, *u, s(*u));
    if (k && lift_satisfies(t0, t1, t, *k, l)) fam.parts.push_back(point(*k, l));
    return fam;
  }
  for (const auto& x : interior_boundary(t0, p)) {
    if (t1(x) == x) continue;
    auto k = unique_power(t1, x, t(x));
    if (!k) return fam;
    PLMap s = compose(power(t1, -*k), t);
    auto u = moved_point(t0, p, p + 1);
    auto l = unique_power(t0, *u, s(*u));
    if (l && lift_satisfies(t0, t1, t, *k, *l)) fam.parts.push_back(point(*k, *l));
    return fam;
  }
  // On a gap of Fix(t1) where t0 is the identity, t agrees with a power of t1.
  for (const auto& [a, b] : gaps(t1, p)) {
    if (moved_point(t0, a, b)) continue;
    Rat x = *moved_point(t1, a, b);
    auto k = unique_power(t1, x, t(x));
    if (!k) return fam;
    PLMap s = compose(power(t1, -*k), t);
    auto u = moved_point(t0, p, p + 1);
    auto l = unique_power(t0, *u, s(*u));
    if (l && lift_satisfies(t0, t1, t, *k, *l)) fam.parts.push_back(point(*k, *l));
    return fam;
  }
  for (const auto& [a, b] : gaps(t0, p)) {
    if (moved_point(t1, a, b)) continue;
    Rat x = *moved_point(t0, a, b);
    auto l = unique_power(t0, x, t(x));
    if (!l) return fam;
    PLMap s = compose(t, power(t0, -*l));
    auto u = moved_point(t1, p, p + 1);
    auto k = unique_power(t1, *u, s(*u));
    if (k && lift_satisfies(t0, t1, t, *k, *l)) fam.parts.push_back(point(*k, *l));
    return fam;
  }
  // Every remaining constraint is a slope condition at a common fixed point.
  std::vector<Rat> common{p};
  for (const auto& x : interior_boundary(t0, p)) common.push_back(x);
  for (const auto& x : interior_boundary(t1, p)) common.push_back(x);
  sort_unique(common);
  std::vector<Row> rows;
  bool logs_ok = true;
  for (const auto& x : common) {
    if (t(x) != x) return fam;
    for (int side = 0; side < 2; ++side) {
      auto s1 = log2_exact(side ? t1.slope_right(x) : t1.slope_left(x));
      auto s0 = log2_exact(side ? t0.slope_right(x) : t0.slope_left(x));
      auto s = log2_exact(side ? t.slope_right(x) : t.slope_left(x));
      if (!s1 || !s0 || !s) {
        logs_ok = false;
        continue;
      }
      if (*s1 == 0 && *s0 == 0) {
        if (*s != 0) return fam;
        continue;
      }
      rows.push_back(Row{*s1, *s0, *s});
    }
  }
  const long B = fallback_bound();
  if (logs_ok && !rows.empty()) {
    const Row& r = rows[0];
    for (const auto& q : rows) {
      long det = r.a1 * q.a0 - r.a0 * q.a1;
      if (det == 0) continue;
      long kn = r.c * q.a0 - r.a0 * q.c, ln = r.a1 * q.c - r.c * q.a1;
      if (kn % det != 0 || ln % det != 0) return fam;
      long k = kn / det, l = ln / det;
      for (const auto& w : rows)
        if (w.a1 * k + w.a0 * l != w.c) return fam;
      if (lift_satisfies(t0, t1, t, k, l)) fam.parts.push_back(point(k, l));
      return fam;
    }
    for (const auto& q : rows)
      if (r.a1 * q.c != q.a1 * r.c || r.a0 * q.c != q.a0 * r.c) return fam;
    DiophSolution sol = lin_dioph(Int(r.a1), Int(r.a0), Int(r.c));
    if (sol.kind == DiophSolution::Kind::Empty) return fam;
    long bk = to_long(sol.base.first), bl = to_long(sol.base.second);
    long dk = to_long(sol.dir.first), dl = to_long(sol.dir.second);
    // Re-center the base so the scanned exponents stay small.
    if (dl != 0 || dk != 0) {
      long c = dl != 0 ? -bl / dl : -bk / dk;
      bk += c * dk;
      bl += c * dl;
    }
    // Moving along the line by a trivial step keeps every solution.
    const bool trivial_step = compose(power(t1, dk), power(t0, dl)).is_identity();
    fam.used_fallback = !trivial_step;
    // Screen each j on a few points before the full check.
    PLMap i0 = invert(t0), i1 = invert(t1);
    auto iterate = [&](const PLMap& f, const PLMap& fi, long n, Rat x) -> Rat {
      for (long i = 0; i < std::abs(n); ++i) x = n > 0 ? f(x) : fi(x);
      return x;
    };
    std::vector<Rat> probes;
    for (const auto* f : {&t0, &t1, &t})
      for (const auto& b : f->breakpoints_in(p, p + 1))
        if (b > p && b < p + 1) probes.push_back(b);
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    for (std::size_t i = 0, n = probes.size(); i + 1 < n; ++i)
      probes.push_back((probes[i] + probes[i + 1]) / 2);
    std::vector<long> hits;
    const long span = trivial_step ? 0 : B;
    for (long j = -span; j <= span; ++j) {
      long k = bk + j * dk, l = bl + j * dl;
      bool ok = true;
      for (const auto& x : probes)
        if (iterate(t1, i1, k, iterate(t0, i0, l, x)) != t(x)) {
          ok = false;
          break;
        }
      if (ok && lift_satisfies(t0, t1, t, k, l)) {
        if (trivial_step) {
          fam.parts.push_back(line(k, l, dk, dl));
          return fam;
        }
        hits.push_back(j);
      }
    }
    std::sort(hits.begin(), hits.end());
    if (hits.size() >= 2) {
      long step = 0;
      for (long h : hits) step = std::gcd(step, h - hits[0]);
      bool progression = true;
      for (long j = -B; j <= B && progression; ++j)
        if ((j - hits[0]) % step == 0 && std::find(hits.begin(), hits.end(), j) == hits.end())
          progression = false;
      if (progression) {
        fam.parts.push_back(line(bk + hits[0] * dk, bl + hits[0] * dl, step * dk, step * dl));
        return fam;
      }
    }
    for (long j : hits) fam.parts.push_back(point(bk + j * dk, bl + j * dl));
    return fam;
  }
  // Degenerate: no usable slope constraint.
  fam.used_fallback = true;
  for (long k = -B; k <= B; ++k)
    for (long l = -B; l <= B; ++l)
      if (lift_satisfies(t0, t1, t, k, l)) fam.parts.push_back(point(k, l));
  return fam;
}

namespace {

// t1^k t0^l = t where t0, t1 both have fixed points.
SolutionFamily solve_reduced(const CircleMap& T0, const CircleMap& T1, const CircleMap& T) {
  SolutionFamily fam;
  bool id0 = T0.is_identity(), id1 = T1.is_identity();
  if (id0 && id1) {
    if (T.is_identity()) fam.parts.push_back(Coset{Coset::Kind::Grid, 0, 0, 0, 0, 1, 1});
    return fam;
  }
  PLMap F0 = *T0.fixing_lift(), F1 = *T1.fixing_lift();
  if (id1) {
    auto u = moved_point(F0, Rat(0), Rat(1));
    auto l = circle_unique_power(T0, *u, T(*u));
    if (l && power(T0, *l) == T) fam.parts.push_back(line(0, *l, 1, 0));
    return fam;
  }
  if (id0) {
    auto u = moved_point(F1, Rat(0), Rat(1));
    auto k = circle_unique_power(T1, *u, T(*u));
    if (k && power(T1, *k) == T) fam.parts.push_back(line(*k, 0, 0, 1));
    return fam;
  }
  CircleMap Ti = invert(T);
  auto b1 = boundary_mod1(F1);
  auto b0 = boundary_mod1(F0);
  for (const auto& x : b1) {
    if (T0(x) == x) continue;
    auto ml = circle_unique_power(T0, x, Ti(x));
    if (!ml) return fam;
    long l = -*ml;
    CircleMap S = compose(T, power(T0, -l));
    auto u = moved_point(F1, Rat(0), Rat(1));
    auto k = circle_unique_power(T1, *u, S(*u));
    if (k && compose(power(T1, *k), power(T0, l)) == T) fam.parts.push_back(point(*k, l));
    return fam;
  }
  for (const auto& x : b0) {
    if (T1(x) == x) continue;
    auto k = circle_unique_power(T1, x, T(x));
    if (!k) return fam;
    CircleMap S = compose(power(T1, -*k), T);
    auto u = moved_point(F0, Rat(0), Rat(1));
    auto l = circle_unique_power(T0, *u, S(*u));
    if (l && compose(power(T1, *k), power(T0, *l)) == T) fam.parts.push_back(point(*k, *l));
    return fam;
  }
  const Rat p = b1.front();
  if (T(p) != p) return fam;
  Int shift = floor_rat(T.lift()(p) - p + rat(1, 2));
  PLMap Tl = compose(PLMap::translation(Rat(-shift)), T.lift());
  return interval_exponent(F0, F1, Tl, p);
}

}  // namespace

SolutionFamily solve_exponent(const CircleMap& t0, const CircleMap& t1, const CircleMap& t) {
  SolutionFamily out;
  if (t0.is_identity() && t1.is_identity()) {
    if (t.is_identity()) out.parts.push_back(Coset{Coset::Kind::Grid, 0, 0, 0, 0, 1, 1});
    return out;
  }
  // k is reduced mod q1 and l mod q0, where t_i^{q_i} has fixed points.
  long q0 = t0.is_identity() ? 1 : periodic_points(t0).front().second;
  long q1 = t1.is_identity() ? 1 : periodic_points(t1).front().second;
  CircleMap T0 = power(t0, q0), T1 = power(t1, q1);
  bool finite_order = T0.is_identity() && T1.is_identity();
  CircleMap t0i = invert(t0), t1i = invert(t1);
  CircleMap left = CircleMap::from_lift(PLMap::identity(), t.circumference());  // t1^-r
  for (long r = 0; r < q1; ++r) {
    CircleMap T = compose(left, t);  // t1^-r t t0^-s
    for (long s = 0; s < q0; ++s) {
      if (finite_order) {
        if (T.is_identity()) out.parts.push_back(Coset{Coset::Kind::Grid, r, s, 0, 0, q1, q0});
      } else {
        SolutionFamily sub = solve_reduced(T0, T1, T);
        out.used_fallback = out.used_fallback || sub.used_fallback;
        for (const auto& c : sub.parts) {
          Coset e = c;
          e.k = q1 * c.k + r;
          e.l = q0 * c.l + s;
          e.dk = q1 * c.dk;
          e.dl = q0 * c.dl;
          e.step_k = q1 * c.step_k;
          e.step_l = q0 * c.step_l;
          out.parts.push_back(e);
        }
      }
      T = compose(T, t0i);
    }
    left = compose(left, t1i);
  }
  return out;
}

}  // namespace thompson
