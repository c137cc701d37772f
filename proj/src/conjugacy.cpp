#include "thompson/conjugacy.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>

#include "thompson/circle.hpp"
#include "thompson/transport.hpp"

namespace thompson {

std::string to_string(Reason r) {
  switch (r) {
    case Reason::TailMismatch:
      return "TailMismatch";
    case Reason::FixSetMismatch:
      return "FixSetMismatch";
    case Reason::SlopeObstruction:
      return "SlopeObstruction";
    case Reason::ExponentEquationUnsolvable:
      return "ExponentEquationUnsolvable";
    case Reason::ExhaustedCandidates:
      return "ExhaustedCandidates";
    case Reason::OrientationMismatch:
      return "OrientationMismatch";
  }
  return "Unknown";
}

long fallback_bound() {
  if (const char* s = std::getenv("THOMPSON_TCP_FALLBACK_BOUND")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*s != '\0' && *end == '\0' && v > 0) return v;
  }
  return 64;
}

PLMap conjugate(const PLMap& y, const PLMap& g) { return compose(invert(g), compose(y, g)); }

namespace {

using Points = std::vector<std::pair<Rat, Rat>>;

void sort_unique(std::vector<Rat>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool agree_on(const PLMap& a, const PLMap& b, const Rat& lo, const Rat& hi) {
  auto c = a.candidates_in(lo, hi);
  auto d = b.candidates_in(lo, hi);
  c.insert(c.end(), d.begin(), d.end());
  for (const auto& x : c)
    if (a(x) != b(x)) return false;
  return true;
}

// Evaluation of the PL function through P[from..], increasing in both coordinates.
Rat eval_points(const Points& P, std::size_t from, const Rat& x) {
  auto first = P.begin() + static_cast<std::ptrdiff_t>(from);
  auto it = std::lower_bound(first, P.end(), x,
                             [](const std::pair<Rat, Rat>& p, const Rat& v) { return p.first < v; });
  if (it == P.end()) throw Error("InternalError", "evaluation beyond propagated range");
  if (it->first == x) return it->second;
  if (it == first) throw Error("InternalError", "evaluation before propagated range");
  auto prev = it - 1;
  return prev->second + (it->second - prev->second) * (x - prev->first) / (it->first - prev->first);
}

Rat inverse_points(const Points& P, std::size_t from, const Rat& y) {
  auto first = P.begin() + static_cast<std::ptrdiff_t>(from);
  auto it = std::lower_bound(first, P.end(), y,
                             [](const std::pair<Rat, Rat>& p, const Rat& v) { return p.second < v; });
  if (it == P.end()) throw Error("InternalError", "inversion beyond propagated range");
  if (it->second == y) return it->first;
  if (it == first) throw Error("InternalError", "inversion before propagated range");
  auto prev = it - 1;
  return prev->first + (it->first - prev->first) * (y - prev->second) / (it->second - prev->second);
}

void drop_collinear(Points& P) {
  if (P.size() < 3) return;
  Points out{P.front()};
  for (std::size_t i = 1; i + 1 < P.size(); ++i) {
    const auto& a = out.back();
    const auto& b = P[i];
    const auto& c = P[i + 1];
    if (b.first == a.first) continue;
    if ((b.second - a.second) * (c.first - b.first) != (c.second - b.second) * (b.first - a.first))
      out.push_back(b);
  }
  if (P.back().first != out.back().first) out.push_back(P.back());
  P = std::move(out);
}

long abs_log2(const Rat& lambda) {
  auto e = log2_exact(lambda);
  if (!e) throw Error("InternalError", "slope " + to_string(lambda) + " is not a power of two");
  return std::labs(*e);
}

long modulo(long a, long m) { return ((a % m) + m) % m; }

// Maps moving points to the right on the current interval.
struct Dir {
  const PLMap* Z;
  const PLMap* Zi;
  const PLMap* Y;
  const std::optional<PeriodicityBox>* box;
};

struct Frame {
  PLMap Z, Zi, Y, Yi;
  std::optional<PeriodicityBox> box_fwd, box_inv;
  ConjugatorClass cls = ConjugatorClass::F;
  long cap = 0;

  Frame(const PLMap& y, const PLMap& z, ConjugatorClass c)
      : Z(z), Zi(invert(z)), Y(y), Yi(invert(y)), cls(c) {
    box_fwd = tails_agree(Y, Z);
    box_inv = tails_agree(Yi, Zi);
    long width = 0;
    if (box_fwd) width = to_long(ceil_rat(box_fwd->R - box_fwd->L));
    long bp = static_cast<long>(Z.xs().size() + Y.xs().size());
    cap = std::max<long>(16 * (bp + width), 1L << 14);
  }
  Dir dir(bool up) const {
    return up ? Dir{&Z, &Zi, &Y, &box_fwd} : Dir{&Zi, &Z, &Yi, &box_inv};
  }
};

enum class Fail { None = 0, Structure = 1, Slope = 2, Exhausted = 3 };

Reason reason_of(Fail f) {
  switch (f) {
    case Fail::Structure:
      return Reason::FixSetMismatch;
    case Fail::Slope:
      return Reason::SlopeObstruction;
    default:
      return Reason::ExhaustedCandidates;
  }
}

struct EndSpec {
  bool finite = true;
  Rat b, b2;
};

struct Piece {
  Fail fail = Fail::Exhausted;
  Points pts;
  Rat end_slope;
  Rat shift;
  bool periodic = false;
  bool ok() const { return fail == Fail::None; }
};

// g commutes with t + 1 on [S, back - 1], read off acc[from..].
bool unit_periodic(const Points& acc, std::size_t from, const Rat& S) {
  const Rat& back = acc.back().first;
  std::vector<Rat> xs;
  for (std::size_t i = from; i < acc.size(); ++i) {
    const Rat& x = acc[i].first;
    if (x >= S && x <= back - 1) xs.push_back(x);
    if (x >= S + 1) xs.push_back(x - 1);
  }
  for (const auto& x : xs)
    if (eval_points(acc, from, x + 1) != eval_points(acc, from, x) + 1) return false;
  return true;
}

// Extends g from its first fundamental domain acc[d0..] by g = Yp^-1 g Zp.
Piece propagate(const Frame& fr, const Dir& d, Points acc, std::size_t d0, const EndSpec& end) {
  const PLMap& Zp = *d.Z;
  const PLMap& Yp = *d.Y;
  Piece out;
  Rat bz, by;
  if (end.finite) {
    auto cz = Zp.candidates_in(acc[d0].first, end.b);
    bz = *(std::lower_bound(cz.begin(), cz.end(), end.b) - 1);
    auto cy = Yp.candidates_in(acc[d0].second, end.b2);
    by = *(std::lower_bound(cy.begin(), cy.end(), end.b2) - 1);
  } else if (!d.box->has_value()) {
    throw Error("InternalError", "propagation to infinity without a periodicity box");
  }
  std::optional<std::size_t> S;
  for (long step = 0;; ++step) {
    if (step > fr.cap) {
      out.fail = Fail::Exhausted;
      return out;
    }
    const Rat w0 = acc[d0].first;
    const Rat g0 = acc[d0].second;
    if (end.finite) {
      if (w0 >= bz && g0 >= by) {
        Rat s = (end.b2 - g0) / (end.b - w0);
        for (std::size_t i = d0 + 1; i < acc.size(); ++i)
          if (acc[i].second - end.b2 != s * (acc[i].first - end.b)) return out;
        acc.resize(d0 + 1);
        acc.emplace_back(end.b, end.b2);
        out.fail = Fail::None;
        out.end_slope = s;
        out.pts = std::move(acc);
        return out;
      }
    } else {
      const Rat& R = (*d.box)->R;
      if (w0 >= R && g0 >= R) {
        if (fr.cls == ConjugatorClass::F) {
          Rat k = g0 - w0;
          if (!is_integer(k)) return out;
          for (std::size_t i = d0 + 1; i < acc.size(); ++i)
            if (acc[i].second - acc[i].first != k) return out;
          acc.resize(d0 + 1);
          out.fail = Fail::None;
          out.shift = k;
          out.pts = std::move(acc);
          return out;
        }
        if (!S) S = d0;
        const Rat start = acc[*S].first;
        if (acc.back().first >= start + 1) {
          if (!unit_periodic(acc, *S, start)) return out;
          Rat top = start + 1;
          Rat gtop = eval_points(acc, *S, top);
          while (acc.back().first >= top) acc.pop_back();
          acc.emplace_back(top, gtop);
          out.fail = Fail::None;
          out.periodic = true;
          out.pts = std::move(acc);
          return out;
        }
      }
    }
    const Rat w1 = acc.back().first;
    const Rat g1 = acc.back().second;
    std::vector<Rat> src;
    for (std::size_t i = d0; i < acc.size(); ++i) src.push_back(acc[i].first);
    for (const auto& c : Zp.candidates_in(w0, w1)) src.push_back(c);
    for (const auto& c : Yp.candidates_in(g0, g1)) src.push_back(inverse_points(acc, d0, c));
    sort_unique(src);
    Points next;
    next.reserve(src.size());
    for (const auto& x : src) next.emplace_back(Zp(x), Yp(eval_points(acc, d0, x)));
    drop_collinear(next);
    if (next.front() != acc.back()) throw Error("InternalError", "propagation lost consistency");
    std::size_t nd0 = acc.size() - 1;
    acc.insert(acc.end(), next.begin() + 1, next.end());
    d0 = nd0;
  }
}

// Germ g(u) = a2 + sigma (u - a) just right of a fixed point a.
Piece propagate_germ(const Frame& fr, const Dir& d, const Rat& a, const Rat& a2, const Rat& sigma,
                     const EndSpec& end) {
  const PLMap& Zp = *d.Z;
  const PLMap& Yp = *d.Y;
  Piece out;
  Rat lz = Zp.slope_right(a);
  if (lz != Yp.slope_right(a2)) {
    out.fail = Fail::Slope;
    return out;
  }
  auto cz = Zp.candidates_in(a, a + 1);
  auto cy = Yp.candidates_in(a2, a2 + 1);
  Rat az = *std::upper_bound(cz.begin(), cz.end(), a);
  Rat ay = *std::upper_bound(cy.begin(), cy.end(), a2);
  Rat delta = std::min(Rat(az - a), Rat((ay - a2) / sigma)) / lz;
  Points acc{{a, a2}, {a + delta, a2 + sigma * delta}, {a + lz * delta, a2 + sigma * lz * delta}};
  return propagate(fr, d, std::move(acc), 1, end);
}

// g = t + ell on (-inf, e] with e left of the periodicity box.
Piece propagate_translation(const Frame& fr, const Dir& d, const Rat& ell, const EndSpec& end) {
  if (!d.box->has_value()) throw Error("InternalError", "translation start without a box");
  const Rat& L = (*d.box)->L;
  Rat e = std::min(L, Rat(L - ell));
  Rat w0 = (*d.Zi)(e);
  Points acc{{w0, w0 + ell}, {e, e + ell}};
  return propagate(fr, d, std::move(acc), 0, end);
}

// A matched non-dyadic fixed point the chain passes through.
struct Link {
  Rat x, x2;
  bool switch_ok = false;  // deep in the right periodic region with integral offset
};

struct ChainStart {
  bool translation = false;
  Rat a, a2, sigma;
  Rat ell;
};

struct ChainEnd {
  enum class Kind { Finite, PlusInf, Switch } kind = Kind::Finite;
  Rat b, b2;
};

struct ChainResult {
  Fail fail = Fail::Exhausted;
  Points pts;
  Rat shift;
  bool periodic = false;
  bool ok() const { return fail == Fail::None; }
};

Rat sample(const std::optional<Rat>& lo, const std::optional<Rat>& hi) {
  if (lo && hi) return (*lo + *hi) / 2;
  if (lo) return *lo + 1;
  if (hi) return *hi - 1;
  return Rat(0);
}

ChainResult run_chain(const Frame& fr, const ChainStart& st, const std::vector<Link>& links,
                      const ChainEnd& end) {
  ChainResult res;
  std::optional<Rat> lo, lo2;
  if (!st.translation) {
    lo = st.a;
    lo2 = st.a2;
  }
  Rat sigma = st.sigma;
  for (std::size_t i = 0; i <= links.size(); ++i) {
    bool last = i == links.size();
    std::optional<Rat> hi, hi2;
    if (!last) {
      hi = links[i].x;
      hi2 = links[i].x2;
    } else if (end.kind == ChainEnd::Kind::Finite) {
      hi = end.b;
      hi2 = end.b2;
    } else if (end.kind == ChainEnd::Kind::Switch) {
      res.fail = Fail::Exhausted;
      return res;
    }
    Rat u = sample(lo, hi), u2 = sample(lo2, hi2);
    bool up = fr.Z(u) > u;
    if (up != (fr.Y(u2) > u2)) {
      res.fail = Fail::Structure;
      return res;
    }
    Dir d = fr.dir(up);
    EndSpec es;
    es.finite = hi.has_value();
    if (hi) {
      es.b = *hi;
      es.b2 = *hi2;
    }
    // Where Z moves points left, the inverses move them right.
    Piece piece = lo ? propagate_germ(fr, d, *lo, *lo2, sigma, es)
                     : propagate_translation(fr, d, st.ell, es);
    if (!piece.ok()) {
      res.fail = piece.fail;
      return res;
    }
    std::size_t skip = res.pts.empty() ? 0 : 1;
    res.pts.insert(res.pts.end(), piece.pts.begin() + static_cast<std::ptrdiff_t>(skip), piece.pts.end());
    if (!hi) {
      res.fail = Fail::None;
      res.shift = piece.shift;
      res.periodic = piece.periodic;
      return res;
    }
    sigma = piece.end_slope;
    if (last) break;
    if (end.kind == ChainEnd::Kind::Switch && links[i].switch_ok && sigma == 1 &&
        is_integer(links[i].x2 - links[i].x)) {
      res.fail = Fail::None;
      res.shift = links[i].x2 - links[i].x;
      return res;
    }
    lo = hi;
    lo2 = hi2;
  }
  res.fail = Fail::None;
  return res;
}

std::vector<long> slope_window(long period, long modulus, long residue) {
  std::vector<long> js;
  long lo, hi;
  if (period > 0) {
    lo = -(period / 2);
    hi = lo + period - 1;
  } else {
    lo = -fallback_bound();
    hi = fallback_bound();
  }
  for (long j = lo; j <= hi; ++j)
    if (modulo(j - residue, modulus) == 0) js.push_back(j);
  std::stable_sort(js.begin(), js.end(), [](long a, long b) { return std::labs(a) < std::labs(b); });
  return js;
}

struct Residue {
  long modulus = 1;
  long value = 0;
};

// Slopes 2^j of F-germs through a (non-dyadic) a sending it to a2.
std::optional<Residue> germ_residue(const Rat& a, const Rat& a2) {
  auto p = decompose_odd(a);
  auto q = decompose_odd(a2);
  Int n = p.zero ? Int(1) : p.n;
  Int n2 = q.zero ? Int(1) : q.n;
  if (n != n2) return std::nullopt;
  if (n == 1) return Residue{};
  auto R = two_power_residue(p.m, q.m, n);
  if (!R) return std::nullopt;
  long mod = order_of_two(n);
  return Residue{mod, modulo(*R + q.t - p.t, mod)};
}

long tail_den(const PLMap& f, bool right) {
  if ((right ? f.right_tail() : f.left_tail()) != TailKind::Translation) return 0;
  Rat c = right ? f.right_constant() : f.left_constant();
  return to_long(c.get_den());
}

// Period of admissible germ slopes on a chain reaching +inf.
long plus_inf_period(const Frame& fr, const Rat& lambda) {
  long p = abs_log2(lambda);
  if (fr.cls == ConjugatorClass::EP2) return p;
  long den = tail_den(fr.Y, true);
  return den == 0 ? 0 : p * den;
}

// Component streaming from left to right.
class CompStream {
 public:
  CompStream(const PLMap& f, const std::optional<Rat>& start, bool periodic_right)
      : f_(f), start_(start), periodic_(periodic_right) {
    cursor_ = start ? *start - 1 : f.window_left() - 3;
    end_ = f.window_right() + 3;
  }

  std::optional<Component> next() {
    while (buf_.empty()) {
      if (done_ || (!periodic_ && cursor_ > end_)) return std::nullopt;
      Rat hi = cursor_ + 2;
      for (const auto& c : fixed_components(f_, cursor_, hi)) {
        if (last_ && !(c.lo && last_->hi && *c.lo > *last_->hi)) continue;
        if (start_ && (!c.lo || (c.hi && *c.hi < *start_))) continue;
        buf_.push_back(c);
        last_ = c;
      }
      cursor_ = hi;
    }
    Component c = buf_.front();
    buf_.pop_front();
    if (!c.hi) done_ = true;
    return c;
  }

 private:
  const PLMap& f_;
  std::optional<Rat> start_;
  bool periodic_;
  Rat cursor_, end_;
  std::deque<Component> buf_;
  std::optional<Component> last_;
  bool done_ = false;
};

bool is_free(const Component& c) { return !c.is_point() || is_dyadic(*c.lo); }

struct Match {
  Component z, y;
  bool switch_ok = false;
};

Fail check_pair(const Frame& fr, const Match& m) {
  const auto& a = m.z;
  const auto& b = m.y;
  if (a.lo.has_value() != b.lo.has_value() || a.hi.has_value() != b.hi.has_value())
    return Fail::Structure;
  if (a.is_point() != b.is_point()) return Fail::Structure;
  if (a.is_point()) {
    if (is_dyadic(*a.lo) != is_dyadic(*b.lo)) return Fail::Structure;
    if (!is_dyadic(*a.lo) && !transport_exists(*a.lo, *b.lo)) return Fail::Structure;
  }
  if (a.lo && fr.Z.slope_left(*a.lo) != fr.Y.slope_left(*b.lo)) return Fail::Slope;
  if (a.hi && fr.Z.slope_right(*a.hi) != fr.Y.slope_right(*b.hi)) return Fail::Slope;
  return Fail::None;
}

struct Tail {
  bool periodic = false;
  Rat shift;
};

class Walker {
 public:
  Walker(const Frame& fr, const Frame& mir, std::vector<std::string>& trace)
      : fr_(fr), mir_(mir), trace_(trace) {
    fz_ = fixed_set(fr.Z);
  }

  Fail worst = Fail::None;

  // Left end: nullopt for a finite left fixed set, otherwise g = t + ell up to c0.
  std::optional<PLMap> walk(std::optional<long> ell) {
    std::vector<Match> M;
    bool switch_anchor = false;
    if (!generate(ell, M, switch_anchor)) return std::nullopt;
    if (M.empty()) return std::nullopt;
    Points acc;
    Tail left, right;
    std::size_t i = 0;
    bool filled = false;  // M[i] already covered by acc
    std::optional<Rat> line_sigma;

    if (ell) {
      const auto& c = M[0].z;
      Rat sh(*ell);
      acc.emplace_back(*c.lo - 1, *c.lo - 1 + sh);
      acc.emplace_back(*c.lo, *c.lo + sh);
      if (!c.is_point()) acc.emplace_back(*c.hi, *c.hi + sh);
      left.shift = sh;
      filled = true;
      if (!is_free(c)) line_sigma = Rat(1);
    } else if (!M[0].z.lo) {
      if (!M[0].z.hi) return PLMap::identity();
      const Rat& c = *M[0].z.hi;
      const Rat& c2 = *M[0].y.hi;
      Rat X = Rat(floor_rat(std::min(c, c2))) - 1;
      acc = dyadic_interpolation(X, c, X, c2);
      left.shift = 0;
      filled = true;
    } else {
      std::size_t f = 0;
      while (f < M.size() && !is_free(M[f].z)) ++f;
      if (f == M.size()) return whole_line(M, switch_anchor);
      if (!left_ray(M, f, acc, left)) return std::nullopt;
      i = f;
    }

    // Walk free anchors left to right.
    while (true) {
      const Match& m = M[i];
      bool terminal = switch_anchor && i + 1 == M.size();
      if (!filled && !line_sigma) {
        if (terminal) {
          right.shift = *m.y.lo - *m.z.lo;
          return finish(acc, left, right);
        }
        if (!m.z.is_point()) {
          if (!m.z.hi) {
            Rat X = Rat(ceil_rat(std::max(*m.z.lo, *m.y.lo))) + 1;
            append(acc, dyadic_interpolation(*m.z.lo, X, *m.y.lo, X));
            right.shift = 0;
            return finish(acc, left, right);
          }
          append(acc, dyadic_interpolation(*m.z.lo, *m.z.hi, *m.y.lo, *m.y.hi));
        }
      } else if (terminal && !line_sigma) {
        right.shift = *m.y.lo - *m.z.lo;
        return finish(acc, left, right);
      }
      filled = false;
      std::size_t j = i + 1;
      while (j < M.size() && !is_free(M[j].z)) ++j;
      std::vector<Link> links;
      for (std::size_t q = i + 1; q < j; ++q) links.push_back(Link{*M[q].z.lo, *M[q].y.lo, M[q].switch_ok});
      const Rat& a = *M[i].z.hi;
      const Rat& a2 = *M[i].y.hi;
      ChainEnd end;
      std::vector<long> js;
      if (j < M.size()) {
        end.kind = ChainEnd::Kind::Finite;
        end.b = *M[j].z.lo;
        end.b2 = *M[j].y.lo;
        js = slope_window(abs_log2(fr_.Y.slope_right(a2)), 1, 0);
      } else if (switch_anchor || fz_.right != FixTail::PeriodicInfinite) {
        end.kind = ChainEnd::Kind::PlusInf;
        js = slope_window(plus_inf_period(fr_, fr_.Y.slope_right(a2)), 1, 0);
      } else {
        end.kind = ChainEnd::Kind::Switch;
        js = slope_window(0, 1, 0);
      }
      if (line_sigma) js = {*log2_exact(*line_sigma)};
      line_sigma.reset();
      auto r = first_success(fr_, a, a2, links, end, js);
      if (!r) return std::nullopt;
      append(acc, r->pts);
      if (j >= M.size()) {
        right.periodic = r->periodic;
        right.shift = r->shift;
        return finish(acc, left, right);
      }
      i = j;
    }
  }

 private:
  const Frame& fr_;
  const Frame& mir_;
  std::vector<std::string>& trace_;
  FixSet fz_;

  void note(Fail f) {
    if (static_cast<int>(f) > static_cast<int>(worst)) worst = f;
  }

  static void append(Points& acc, const Points& pts) {
    std::size_t skip = (!acc.empty() && !pts.empty() && pts.front() == acc.back()) ? 1 : 0;
    acc.insert(acc.end(), pts.begin() + static_cast<std::ptrdiff_t>(skip), pts.end());
  }

  std::optional<ChainResult> first_success(const Frame& fr, const Rat& a, const Rat& a2,
                                           const std::vector<Link>& links, const ChainEnd& end,
                                           const std::vector<long>& js) {
    for (long j : js) {
      ChainStart st;
      st.a = a;
      st.a2 = a2;
      st.sigma = pow2(j);
      auto r = run_chain(fr, st, links, end);
      if (r.ok()) return r;
      note(r.fail);
      if (r.fail == Fail::Slope || r.fail == Fail::Structure) return std::nullopt;
    }
    note(Fail::Exhausted);
    return std::nullopt;
  }

  bool generate(std::optional<long> ell, std::vector<Match>& M, bool& switch_anchor) {
    FixSet fy = fixed_set(fr_.Y);
    bool per_right = fz_.right == FixTail::PeriodicInfinite;
    std::optional<Rat> sz, sy;
    if (ell) {
      auto c0 = pick_c0(*ell);
      if (!c0) {
        note(Fail::Structure);
        return false;
      }
      sz = *c0->lo;
      sy = *c0->lo + *ell;
    }
    CompStream zs(fr_.Z, sz, per_right), ys(fr_.Y, sy, fy.right == FixTail::PeriodicInfinite);
    long per_unit = 0;
    if (per_right) {
      const Rat& R = fr_.box_fwd->R;
      for (const auto& c : fixed_components(fr_.Z, R, R + 1))
        if (c.lo && *c.lo >= R && *c.lo < R + 1) ++per_unit;
    }
    long deep = 0;
    for (std::size_t guard = 0;; ++guard) {
      if (guard > 200000) {
        note(Fail::Exhausted);
        return false;
      }
      auto a = zs.next();
      auto b = ys.next();
      if (!a && !b) return true;
      if (!a || !b) {
        note(Fail::Structure);
        return false;
      }
      Match m{*a, *b};
      if (Fail f = check_pair(fr_, m); f != Fail::None) {
        note(f);
        return false;
      }
      if (per_right && a->lo && b->lo && *a->lo >= fr_.box_fwd->R && *b->lo >= fr_.box_fwd->R &&
          is_integer(*b->lo - *a->lo)) {
        m.switch_ok = true;
        M.push_back(m);
        if (is_free(*a)) {
          switch_anchor = true;
          return true;
        }
        if (++deep > 4 * per_unit + 8) return true;
        continue;
      }
      M.push_back(m);
    }
  }

  std::optional<Component> pick_c0(long ell) {
    const Rat& L = fr_.box_fwd->L;
    Rat top = std::min(L, Rat(L - ell));
    std::optional<Component> best, best_free;
    for (const auto& c : fixed_components(fr_.Z, top - 2, top)) {
      if (!c.lo || !c.hi || *c.hi > top || *c.lo < top - 2) continue;
      best = c;
      if (is_free(c)) best_free = c;
    }
    if (best_free && *best_free->hi >= top - 1) return best_free;
    return best;
  }

  // Mirrors the fixed-point-free rays left of the first free anchor M[f].
  bool left_ray(const std::vector<Match>& M, std::size_t f, Points& acc, Tail& left) {
    const Rat a = -*M[f].z.lo;
    const Rat a2 = -*M[f].y.lo;
    std::vector<Link> links;
    for (std::size_t q = f; q-- > 0;) links.push_back(Link{-*M[q].z.lo, -*M[q].y.lo, false});
    ChainEnd end;
    end.kind = ChainEnd::Kind::PlusInf;
    auto js = slope_window(plus_inf_period(mir_, mir_.Y.slope_right(a2)), 1, 0);
    auto r = first_success(mir_, a, a2, links, end, js);
    if (!r) return false;
    for (auto it = r->pts.rbegin(); it != r->pts.rend(); ++it) acc.emplace_back(-it->first, -it->second);
    left.periodic = r->periodic;
    left.shift = -r->shift;
    return true;
  }

  // All fixed points are non-dyadic: one chain across the whole line.
  std::optional<PLMap> whole_line(const std::vector<Match>& M, bool switch_anchor) {
    const Rat& p = *M[0].z.lo;
    const Rat& p2 = *M[0].y.lo;
    auto res = germ_residue(p, p2);
    if (!res) {
      note(Fail::Structure);
      return std::nullopt;
    }
    long lam = abs_log2(fr_.Y.slope_right(p2));
    long period = 0;
    if (fr_.cls == ConjugatorClass::EP2) {
      period = lam;
    } else {
      long dl = tail_den(fr_.Y, false), dr = tail_den(fr_.Y, true);
      if (dl && dr && fz_.right != FixTail::PeriodicInfinite) period = lam * std::lcm(dl, dr);
    }
    std::vector<Link> links;
    for (std::size_t q = 1; q < M.size(); ++q) links.push_back(Link{*M[q].z.lo, *M[q].y.lo, M[q].switch_ok});
    ChainEnd rend;
    rend.kind = (fz_.right == FixTail::PeriodicInfinite && !switch_anchor) ? ChainEnd::Kind::Switch
                                                                           : ChainEnd::Kind::PlusInf;
    ChainEnd lend;
    lend.kind = ChainEnd::Kind::PlusInf;
    for (long j : slope_window(period, res->modulus, res->value)) {
      ChainStart st;
      st.a = p;
      st.a2 = p2;
      st.sigma = pow2(j);
      auto r = run_chain(fr_, st, links, rend);
      if (!r.ok()) {
        note(r.fail);
        if (r.fail == Fail::Slope || r.fail == Fail::Structure) return std::nullopt;
        continue;
      }
      ChainStart ms;
      ms.a = -p;
      ms.a2 = -p2;
      ms.sigma = st.sigma;
      auto l = run_chain(mir_, ms, {}, lend);
      if (!l.ok()) {
        note(l.fail);
        if (l.fail == Fail::Slope || l.fail == Fail::Structure) return std::nullopt;
        continue;
      }
      Points acc;
      for (auto it = l.pts.rbegin(); it != l.pts.rend(); ++it) acc.emplace_back(-it->first, -it->second);
      append(acc, r.pts);
      Tail left{l.periodic, Rat(-l.shift)}, right{r.periodic, r.shift};
      if (auto g = finish(acc, left, right)) return g;
    }
    note(Fail::Exhausted);
    return std::nullopt;
  }

  std::optional<PLMap> finish(Points acc, const Tail& left, const Tail& right) {
    drop_collinear(acc);
    std::vector<Rat> xs, ys;
    for (auto& [x, y] : acc) {
      if (!xs.empty() && x == xs.back()) continue;
      xs.push_back(x);
      ys.push_back(y);
    }
    if (xs.size() == 1) {
      xs.push_back(xs[0] + 1);
      ys.push_back(ys[0] + 1);
    }
    PLMap g;
    try {
      g = PLMap::make(1, xs, ys, left.periodic ? TailKind::Periodic : TailKind::Translation,
                      right.periodic ? TailKind::Periodic : TailKind::Translation);
    } catch (const Error& e) {
      trace_.push_back(std::string("assembly rejected: ") + e.what());
      note(Fail::Exhausted);
      return std::nullopt;
    }
    Membership mem = classify(g);
    bool in_class = fr_.cls == ConjugatorClass::F ? mem.in_F : mem.in_EP2;
    if (!in_class || conjugate(fr_.Y, g) != fr_.Z) {
      trace_.push_back("candidate failed verification");
      note(Fail::Exhausted);
      return std::nullopt;
    }
    return g;
  }
};

Decision no(Decision d, Reason r, const std::string& why) {
  d.reason = r;
  d.trace.push_back("No: " + why);
  return d;
}

// Shift candidates for g = t + ell near -inf when Fix is periodic on the left.
std::vector<long> shift_candidates(const PLMap& y, const PLMap& z, const PeriodicityBox& box) {
  FixSet fz = fixed_set(z);
  auto count = [](const PLMap& f, const Rat& lo, const std::optional<Rat>& hi) {
    long n = 0;
    Rat top = hi ? *hi : f.window_right() + 3;
    for (const auto& c : fixed_components(f, lo, top))
      if (c.lo && *c.lo >= lo && (!hi || *c.lo < *hi)) ++n;
    return n;
  };
  const Rat& L = box.L;
  const Rat& R = box.R;
  long m = count(z, L - 1, L);
  if (m == 0) return {};
  std::vector<long> out;
  if (fz.right != FixTail::PeriodicInfinite) {
    long nz = count(z, L, std::nullopt), ny = count(y, L, std::nullopt);
    long e = (ny - nz) / m;
    for (long d = -2; d <= 2; ++d) out.push_back(e + d);
  } else {
    long n = count(z, R, R + 1);
    long nz = count(z, L, R + 1), ny = count(y, L, R + 1);
    long margin = m + n + 2;
    long lo = to_long(floor_rat(make_rat(Int(-nz - margin), Int(m)))) - 1;
    long hi = to_long(ceil_rat(make_rat(Int(ny + margin), Int(m)))) + 1;
    for (long e = lo; e <= hi; ++e) out.push_back(e);
  }
  std::stable_sort(out.begin(), out.end(), [](long a, long b) { return std::labs(a) < std::labs(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool fixsets_compatible(const FixSet& a, const FixSet& b) {
  if (a.empty() != b.empty() || a.left != b.left || a.right != b.right) return false;
  if (a.left == FixTail::Empty && a.right == FixTail::Empty &&
      a.components.size() != b.components.size())
    return false;
  return true;
}

std::optional<PLMap> with_tail(const Frame& fr, long ell) {
  bool up = fr.Z(Rat(0)) > 0;
  if (up != (fr.Y(Rat(0)) > 0)) return std::nullopt;
  ChainStart st;
  st.translation = true;
  st.ell = Rat(ell);
  ChainEnd end;
  end.kind = ChainEnd::Kind::PlusInf;
  auto r = run_chain(fr, st, {}, end);
  if (!r.ok() || r.periodic) return std::nullopt;
  std::vector<Rat> xs, ys;
  drop_collinear(r.pts);
  for (auto& [x, y] : r.pts) {
    xs.push_back(x);
    ys.push_back(y);
  }
  PLMap g = PLMap::make(1, xs, ys, TailKind::Translation, TailKind::Translation);
  if (!classify(g).in_F || conjugate(fr.Y, g) != fr.Z) return std::nullopt;
  return g;
}

}  // namespace

std::optional<PeriodicityBox> tails_agree(const PLMap& y, const PLMap& z) {
  if (y.orientation() != z.orientation()) return std::nullopt;
  Rat L = Rat(floor_rat(std::min(y.window_left(), z.window_left()))) - 2;
  Rat R = Rat(ceil_rat(std::max(y.window_right(), z.window_right()))) + 2;
  if (!agree_on(y, z, L - 1, L) || !agree_on(y, z, R, R + 1)) return std::nullopt;
  return PeriodicityBox{L, R};
}

std::optional<PLMap> conjugate_with_tail(const PLMap& y, const PLMap& z, long ell) {
  if (!fixed_set(y).empty() || !fixed_set(z).empty())
    throw Error("PreconditionViolated", "conjugate_with_tail needs fixed-point-free maps");
  Frame fr(y, z, ConjugatorClass::F);
  if (!fr.box_fwd) return std::nullopt;
  return with_tail(fr, ell);
}

PLMap stair_conjugator(const PLMap& y, const PLMap& z, const PLMap& g0, const PeriodicityBox& box) {
  if (!fixed_set(y).empty() || !fixed_set(z).empty())
    throw Error("PreconditionViolated", "stair_conjugator needs fixed-point-free maps");
  Frame fr(y, z, ConjugatorClass::F);
  if (!fr.box_fwd || !fr.box_inv) throw Error("TailMismatch", "tails do not agree");
  if (g0.left_tail() != TailKind::Translation || !is_integer(g0.left_constant()))
    throw Error("PreconditionViolated", "g0 must be an integral translation on the left");
  (void)box;
  auto g = with_tail(fr, to_long(g0.left_constant().get_num()));
  if (!g) throw Error("NonConvergent", "limit is not eventually an integral translation");
  return *g;
}

Decision conj_search(const PLMap& y, const PLMap& z, ConjugatorClass cls) {
  Decision d;
  if (y.orientation() != z.orientation())
    return no(std::move(d), Reason::OrientationMismatch, "orientations differ");
  if (y.orientation() != 1)
    throw Error("PreconditionViolated", "conjugacy search needs orientation-preserving maps");
  if (y == z) {
    d.witness = PLMap::identity();
    d.trace.push_back("y = z");
    return d;
  }
  FixSet fy = fixed_set(y), fz = fixed_set(z);
  if (!fixsets_compatible(fy, fz))
    return no(std::move(d), Reason::FixSetMismatch, "fixed sets have different shapes");
  auto box = tails_agree(y, z);
  if (!box) return no(std::move(d), Reason::TailMismatch, "tails differ");
  d.trace.push_back("tails agree outside [" + to_string(box->L) + ", " + to_string(box->R) + "]");

  Frame fr(y, z, cls);
  Frame mir(reverse_conjugate(y), reverse_conjugate(z), cls);

  if (fz.empty()) {
    if (cls != ConjugatorClass::F)
      return no(std::move(d), Reason::ExhaustedCandidates, "fixed-point-free case needs class F");
    bool up = z(Rat(0)) > 0;
    if (up != (y(Rat(0)) > 0))
      return no(std::move(d), Reason::FixSetMismatch, "opposite directions of motion");
    PLMap yp = up ? y : fr.Yi, zp = up ? z : fr.Zi;
    std::vector<long> tails;
    try {
      MatherData md = mather(yp, zp);
      SolutionFamily fam = solve_exponent(md.t0, md.t1, md.t);
      d.trace.push_back("exponent equation: " + to_string(fam));
      if (fam.kind() == SolutionFamily::Kind::Empty)
        return no(std::move(d), Reason::ExponentEquationUnsolvable, "no admissible tails");
      tails = fam.tails();
    } catch (const Error& e) {
      d.trace.push_back(std::string("circle reduction failed, bounded tail search: ") + e.what());
      long B = fallback_bound();
      for (long l = 0; l <= B; ++l) {
        tails.push_back(l);
        if (l) tails.push_back(-l);
      }
    }
    for (long ell : tails) {
      if (auto g = with_tail(fr, ell)) {
        d.witness = g;
        d.trace.push_back("conjugator with left tail t + " + std::to_string(ell));
        return d;
      }
    }
    return no(std::move(d), Reason::ExhaustedCandidates, "no admissible tail gave a conjugator");
  }

  Walker w(fr, mir, d.trace);
  if (fz.left == FixTail::PeriodicInfinite) {
    if (cls != ConjugatorClass::F)
      return no(std::move(d), Reason::ExhaustedCandidates, "periodic fixed set needs class F");
    for (long ell : shift_candidates(y, z, *box)) {
      if (auto g = w.walk(ell)) {
        d.witness = g;
        d.trace.push_back("left shift t + " + std::to_string(ell));
        return d;
      }
    }
    if (w.worst == Fail::None) w.worst = Fail::Exhausted;
  } else if (auto g = w.walk(std::nullopt)) {
    d.witness = g;
    d.trace.push_back("matched fixed components");
    return d;
  }
  return no(std::move(d), reason_of(w.worst), "component walk failed");
}

Decision conj_in_F(const PLMap& y, const PLMap& z) { return conj_search(y, z, ConjugatorClass::F); }

std::optional<PLMap> conj_matching_at(const PLMap& y, const PLMap& z, const Rat& p) {
  if (y(p) != p || z(p) != p) return std::nullopt;
  if (y == z) return PLMap::identity();
  auto component = [&](const PLMap& f) {
    for (const auto& c : fixed_components(f, p, p))
      if (c.contains(p)) return c;
    throw Error("InternalError", "fixed point without component");
  };
  const Component cz = component(z), cy = component(y);
  if ((cz.lo && *cz.lo == p) != (cy.lo && *cy.lo == p) ||
      (cz.hi && *cz.hi == p) != (cy.hi && *cy.hi == p))
    return std::nullopt;
  auto end_ok = [](const PLMap& g, const std::optional<Rat>& a, const std::optional<Rat>& b) {
    return a.has_value() == b.has_value() && (!a || g(*a) == *b);
  };
  auto matches = [&](const PLMap& g) { return end_ok(g, cz.lo, cy.lo) && end_ok(g, cz.hi, cy.hi); };
  FixSet fy = fixed_set(y), fz = fixed_set(z);
  if (!fixsets_compatible(fy, fz)) return std::nullopt;
  auto box = tails_agree(y, z);
  if (!box) return std::nullopt;
  Frame fr(y, z, ConjugatorClass::F);
  Frame mir(reverse_conjugate(y), reverse_conjugate(z), ConjugatorClass::F);
  std::vector<std::string> trace;
  Walker w(fr, mir, trace);
  if (fz.left != FixTail::PeriodicInfinite) {
    auto g = w.walk(std::nullopt);
    if (g && matches(*g)) return g;
    return std::nullopt;
  }
  for (long ell : shift_candidates(y, z, *box))
    if (auto g = w.walk(ell); g && matches(*g)) return g;
  return std::nullopt;
}

std::vector<PLMap> fpf_candidates(const PLMap& y, const PLMap& z) {
  std::vector<PLMap> out;
  FixSet fy = fixed_set(y), fz = fixed_set(z);
  if (fz.left != FixTail::PeriodicInfinite || !fixsets_compatible(fy, fz)) return out;
  auto box = tails_agree(y, z);
  if (!box) return out;
  Frame fr(y, z, ConjugatorClass::F);
  Frame mir(reverse_conjugate(y), reverse_conjugate(z), ConjugatorClass::F);
  std::vector<std::string> trace;
  Walker w(fr, mir, trace);
  for (long ell : shift_candidates(y, z, *box)) {
    if (ell == 0) continue;
    auto g = w.walk(ell);
    if (g && fixed_set(*g).empty()) out.push_back(*g);
  }
  return out;
}

namespace {

// Boundary points of Fix(f) in [lo, hi).
std::vector<Rat> boundary_in(const PLMap& f, const Rat& lo, const Rat& hi) {
  std::vector<Rat> out;
  auto keep = [&](const std::optional<Rat>& x) {
    if (x && *x >= lo && *x < hi && (out.empty() || out.back() != *x)) out.push_back(*x);
  };
  for (const auto& c : fixed_components(f, lo, hi)) {
    keep(c.lo);
    keep(c.hi);
  }
  return out;
}

// g with g(t) = t + ell left of L and t + k right of R, in F.
PLMap end_shift(const Rat& L, const Rat& R, long ell, long k) {
  std::vector<Rat> xs, ys;
  for (const auto& [x, y] : dyadic_interpolation(L, R, L + ell, R + k)) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return PLMap::from_points(std::move(xs), std::move(ys));
}

}  // namespace

std::optional<Alignment> align_fixed_sets(const PLMap& y, const PLMap& z) {
  if (y == z) return Alignment{PLMap::identity(), z};
  auto box = tails_agree(y, z);
  if (!box) return std::nullopt;
  const Rat L = box->L, R = box->R;
  const bool per_left = !boundary_in(y, L - 1, L).empty();
  const bool per_right = !boundary_in(y, R, R + 1).empty();
  if (!per_left && !per_right) {
    // Finitely many boundary points: match them in order.
    auto a = boundary_in(z, L - 1, R + 1), b = boundary_in(y, L - 1, R + 1);
    if (a.size() != b.size()) return std::nullopt;
    std::vector<std::pair<Rat, Rat>> pairs;
    for (std::size_t i = 0; i < a.size(); ++i) pairs.emplace_back(a[i], b[i]);
    auto g = transport_build(pairs);
    if (!g) return std::nullopt;
    return Alignment{*g, conjugate(z, invert(*g))};
  }
  // Integral shifts on the periodic ends, transport in between.
  const auto a = boundary_in(z, L, R);
  const long B = fallback_bound();
  std::vector<long> ells{0};
  if (per_left)
    for (long i = 1; i <= B; ++i) {
      ells.push_back(i);
      ells.push_back(-i);
    }
  for (long ell : ells) {
    for (long k = per_right ? -B : 0; k <= (per_right ? B : 0); ++k) {
      if (!(L + ell < R + k)) continue;
      auto b = boundary_in(y, L + ell, R + k);
      if (b.size() != a.size()) continue;
      PLMap s = end_shift(L, R, ell, k);
      std::vector<std::pair<Rat, Rat>> pairs;
      bool ok = true;
      for (std::size_t i = 0; i < a.size() && ok; ++i) {
        Rat u = s(a[i]);
        if (u == b[i]) continue;
        ok = u > L + ell && b[i] > L + ell;
        pairs.emplace_back(u, b[i]);
      }
      if (!ok) continue;
      auto h = transport_build(pairs, Context{L + ell, R + k});
      if (!h) continue;
      PLMap g = compose(*h, s);
      PLMap zp = conjugate(z, invert(g));
      Rat lo = std::min<Rat>(L, L + ell) - 2, hi = std::max<Rat>(R, R + k) + 2;
      if (boundary_in(zp, lo, hi) == boundary_in(y, lo, hi)) return Alignment{g, zp};
    }
  }
  return std::nullopt;
}

PLMap reduction_map(const PLMap& g, const Rat& s0, const Rat& stepL, const Rat& stepR,
                    const std::optional<Rat>& gap) {
  if (stepL == 0 && stepR == 0) return g;
  PLMap left = compose(g, PLMap::translation(-stepL));
  PLMap right = compose(PLMap::translation(-stepR), g);
  PLMap u = glue({{std::nullopt, s0, left}, {s0, std::nullopt, right}});
  if (is_dyadic(s0)) return u;
  // Replace u near s0 by a map in F through the same three points.
  Rat r = gap ? *gap / 2 : Rat(1, 2);
  auto near = u.candidates_in(s0 - r, s0 + r);
  for (const auto& c : near)
    if (c != s0) r = std::min<Rat>(r, abs(c - s0));
  Rat e = Rat(1);
  while (e >= r) e /= 2;
  Rat a1 = Rat(floor_rat(s0 / e)) * e, a3 = a1 + e;
  if (a1 == s0) return u;
  std::vector<Rat> xs, ys;
  for (const auto& [x, yv] : dyadic_interpolation(a1, a3, u(a1), u(a3))) {
    xs.push_back(x);
    ys.push_back(yv);
  }
  PLMap m = PLMap::from_points(std::move(xs), std::move(ys));
  auto k = transport_build({{m(s0), u(s0)}}, Context{u(a1), u(a3)});
  if (!k) throw Error("NonDyadicBreakpoint", "no patch in F near " + to_string(s0));
  PLMap h = compose(*k, m);
  return glue({{std::nullopt, a1, u}, {a1, a3, h}, {a3, std::nullopt, u}});
}

}  // namespace thompson
