#include "thompson/plmap.hpp"

#include <algorithm>
#include <sstream>

namespace thompson {

namespace {

void sort_unique(std::vector<Rat>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

Rat eval_window(const std::vector<Rat>& xs, const std::vector<Rat>& ys, const Rat& t) {
  auto it = std::upper_bound(xs.begin(), xs.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - xs.begin());
  if (idx >= xs.size()) return ys.back();
  if (idx == 0) return ys.front();
  std::size_t i = idx - 1;
  if (t == xs[i]) return ys[i];
  return ys[i] + (ys[i + 1] - ys[i]) * (t - xs[i]) / (xs[i + 1] - xs[i]);
}

[[noreturn]] void invalid(const std::string& why) { throw Error("InvalidMap", why); }

}  // namespace

PLMap::PLMap() = default;

PLMap raw_map(int eps, std::vector<Rat> xs, std::vector<Rat> ys, TailKind left, TailKind right) {
  PLMap m;
  m.eps_ = eps;
  m.xs_ = std::move(xs);
  m.ys_ = std::move(ys);
  m.left_ = left;
  m.right_ = right;
  return m;
}

PLMap mirror_raw(const PLMap& f) {
  std::vector<Rat> xs(f.xs_.rbegin(), f.xs_.rend());
  std::vector<Rat> ys(f.ys_.rbegin(), f.ys_.rend());
  for (auto& x : xs) x = -x;
  for (auto& y : ys) y = -y;
  return raw_map(f.eps_, std::move(xs), std::move(ys), f.right_, f.left_);
}

PLMap invert_raw(const PLMap& f) {
  if (f.eps_ == 1) return raw_map(1, f.ys_, f.xs_, f.left_, f.right_);
  std::vector<Rat> xs(f.ys_.rbegin(), f.ys_.rend());
  std::vector<Rat> ys(f.xs_.rbegin(), f.xs_.rend());
  return raw_map(-1, std::move(xs), std::move(ys), f.right_, f.left_);
}

Rat PLMap::operator()(const Rat& t) const {
  const Rat& L = xs_.front();
  const Rat& R = xs_.back();
  if (t < L) {
    if (left_ == TailKind::Translation) return ys_.front() + eps_ * (t - L);
    Int j = ceil_rat(L - t);
    return eval_window(xs_, ys_, t + j) - eps_ * Rat(j);
  }
  if (t > R) {
    if (right_ == TailKind::Translation) return ys_.back() + eps_ * (t - R);
    Int j = ceil_rat(t - R);
    return eval_window(xs_, ys_, t - j) + eps_ * Rat(j);
  }
  return eval_window(xs_, ys_, t);
}

Rat eval(const PLMap& f, const Rat& t) { return f(t); }

std::vector<Rat> PLMap::candidates_in(const Rat& lo, const Rat& hi) const {
  std::vector<Rat> out{lo, hi};
  const Rat& L = xs_.front();
  const Rat& R = xs_.back();
  for (const auto& x : xs_)
    if (lo <= x && x <= hi) out.push_back(x);
  if (left_ == TailKind::Periodic && lo < L) {
    for (const auto& x : xs_) {
      if (x > L + 1) break;
      Int jmin = std::max(Int(1), ceil_rat(x - hi));
      Int jmax = floor_rat(x - lo);
      for (Int j = jmin; j <= jmax; ++j) out.push_back(x - j);
    }
  }
  if (right_ == TailKind::Periodic && hi > R) {
    for (const auto& x : xs_) {
      if (x < R - 1) continue;
      Int jmin = std::max(Int(1), ceil_rat(lo - x));
      Int jmax = floor_rat(hi - x);
      for (Int j = jmin; j <= jmax; ++j) out.push_back(x + j);
    }
  }
  sort_unique(out);
  return out;
}

std::vector<Rat> PLMap::breakpoints_in(const Rat& lo, const Rat& hi) const {
  auto c = candidates_in(lo - 1, hi + 1);
  std::vector<Rat> v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) v[i] = (*this)(c[i]);
  std::vector<Rat> out;
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    if (c[i] < lo || c[i] > hi) continue;
    Rat s0 = (v[i] - v[i - 1]) / (c[i] - c[i - 1]);
    Rat s1 = (v[i + 1] - v[i]) / (c[i + 1] - c[i]);
    if (s0 != s1) out.push_back(c[i]);
  }
  return out;
}

Rat PLMap::slope_right(const Rat& t) const {
  auto c = candidates_in(t, t + 2);
  const Rat& s = *std::upper_bound(c.begin(), c.end(), t);
  return ((*this)(s) - (*this)(t)) / (s - t);
}

Rat PLMap::slope_left(const Rat& t) const {
  auto c = candidates_in(t - 2, t);
  const Rat& s = *(std::lower_bound(c.begin(), c.end(), t) - 1);
  return ((*this)(t) - (*this)(s)) / (t - s);
}

Rat PLMap::left_constant() const { return ys_.front() - eps_ * xs_.front(); }
Rat PLMap::right_constant() const { return ys_.back() - eps_ * xs_.back(); }

bool PLMap::is_identity() const { return *this == PLMap(); }

namespace {

struct EndInfo {
  bool affine = false;
  bool fully_periodic = false;
  std::optional<Rat> point;
};

// Left-end analysis of a raw map. For an affine end, `point` is the first
// breakpoint; for a periodic end it is the largest M such that the unit law
// holds on (-inf, M].
EndInfo analyze_left(const PLMap& r) {
  const Rat& L = r.window_left();
  const Rat& R = r.window_right();
  EndInfo info;
  auto T = r.breakpoints_in(L - 2, R + 2);
  bool affine = r.left_tail() == TailKind::Translation;
  if (!affine) {
    affine = std::none_of(T.begin(), T.end(), [&](const Rat& t) { return L - 2 <= t && t <= L - 1; });
  }
  if (affine) {
    info.affine = true;
    if (!T.empty()) info.point = T.front();
    return info;
  }
  const int eps = r.orientation();
  std::vector<Rat> D{L, R + 1};
  for (const auto& t : T) {
    if (L <= t && t <= R + 1) D.push_back(t);
    if (L <= t - 1 && t - 1 <= R + 1) D.push_back(t - 1);
  }
  sort_unique(D);
  for (std::size_t i = 0; i + 1 < D.size(); ++i) {
    const Rat& b = D[i + 1];
    if (r(b + 1) - r(b) - eps != 0) {
      info.point = D[i];
      return info;
    }
  }
  info.fully_periodic = true;
  return info;
}

}  // namespace

PLMap normalize_raw(PLMap raw) {
  const int eps = raw.eps_;
  EndInfo lf = analyze_left(raw);
  EndInfo rt = analyze_left(mirror_raw(raw));
  std::optional<Rat> Rp;
  if (rt.point) Rp = -*rt.point;

  if (lf.fully_periodic || rt.fully_periodic) {
    std::vector<Rat> xs{Rat(0)};
    for (const auto& b : raw.breakpoints_in(0, 1)) xs.push_back(b);
    xs.push_back(Rat(1));
    sort_unique(xs);
    std::vector<Rat> ys;
    for (const auto& x : xs) ys.push_back(raw(x));
    return raw_map(eps, std::move(xs), std::move(ys), TailKind::Periodic, TailKind::Periodic);
  }

  if (lf.affine && rt.affine && !lf.point) {
    return raw_map(eps, {Rat(0)}, {raw(Rat(0))}, TailKind::Translation, TailKind::Translation);
  }

  Rat Lw = *lf.point;
  Rat Rw = *Rp;
  if (!lf.affine && rt.affine) {
    if (Rw < Lw + 1) Rw = Lw + 1;
  } else if (lf.affine && !rt.affine) {
    if (Lw > Rw - 1) Lw = Rw - 1;
  } else if (!lf.affine && !rt.affine) {
    if (Rw < Lw + 1) Rw = Lw + 1;
  }

  std::vector<Rat> xs = raw.breakpoints_in(Lw, Rw);
  xs.push_back(Lw);
  xs.push_back(Rw);
  sort_unique(xs);
  std::vector<Rat> ys;
  ys.reserve(xs.size());
  for (const auto& x : xs) ys.push_back(raw(x));
  return raw_map(eps, std::move(xs), std::move(ys),
                 lf.affine ? TailKind::Translation : TailKind::Periodic,
                 rt.affine ? TailKind::Translation : TailKind::Periodic);
}

PLMap PLMap::make(int orientation, std::vector<Rat> xs, std::vector<Rat> ys, TailKind left,
                  TailKind right) {
  if (orientation != 1 && orientation != -1) invalid("orientation must be +1 or -1");
  if (xs.empty() || xs.size() != ys.size()) invalid("breakpoint lists must be nonempty and paired");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i] < xs[i + 1])) invalid("breakpoint abscissae must increase");
    if (orientation == 1 ? !(ys[i] < ys[i + 1]) : !(ys[i] > ys[i + 1]))
      invalid("map is not strictly monotone in the stated orientation");
  }
  PLMap raw = raw_map(orientation, std::move(xs), std::move(ys), left, right);
  const Rat& L = raw.xs_.front();
  const Rat& R = raw.xs_.back();
  if ((left == TailKind::Periodic || right == TailKind::Periodic) && R - L < 1)
    invalid("a periodic tail needs a window of length at least 1");
  if (left == TailKind::Periodic &&
      eval_window(raw.xs_, raw.ys_, L + 1) != raw.ys_.front() + orientation)
    invalid("left periodic tail is inconsistent with the window");
  if (right == TailKind::Periodic &&
      eval_window(raw.xs_, raw.ys_, R - 1) + orientation != raw.ys_.back())
    invalid("right periodic tail is inconsistent with the window");
  return normalize_raw(std::move(raw));
}

PLMap PLMap::from_points(std::vector<Rat> xs, std::vector<Rat> ys) {
  int eps = (ys.size() >= 2 && ys[1] < ys[0]) ? -1 : 1;
  return make(eps, std::move(xs), std::move(ys), TailKind::Translation, TailKind::Translation);
}

PLMap PLMap::translation(const Rat& c) {
  return raw_map(1, {Rat(0)}, {c}, TailKind::Translation, TailKind::Translation);
}

PLMap PLMap::reversal() {
  return raw_map(-1, {Rat(0)}, {Rat(0)}, TailKind::Translation, TailKind::Translation);
}

PLMap compose(const PLMap& f, const PLMap& g) {
  const PLMap gi = invert_raw(g);
  const bool keep = g.orientation() == 1;
  const Rat& fl = keep ? f.window_left() : f.window_right();
  const Rat& fr = keep ? f.window_right() : f.window_left();
  Rat a = std::min(g.window_left(), gi(fl)) - 1;
  Rat b = std::max(g.window_right(), gi(fr)) + 1;

  std::vector<Rat> xs = g.candidates_in(a, b);
  Rat ga = g(a), gb = g(b);
  if (gb < ga) std::swap(ga, gb);
  for (const auto& c : f.candidates_in(ga, gb)) xs.push_back(gi(c));
  sort_unique(xs);
  std::vector<Rat> ys;
  ys.reserve(xs.size());
  for (const auto& x : xs) ys.push_back(f(g(x)));

  TailKind fl_kind = keep ? f.left_tail() : f.right_tail();
  TailKind fr_kind = keep ? f.right_tail() : f.left_tail();
  auto join = [](TailKind u, TailKind v) {
    return (u == TailKind::Periodic || v == TailKind::Periodic) ? TailKind::Periodic
                                                                : TailKind::Translation;
  };
  return normalize_raw(raw_map(f.orientation() * g.orientation(), std::move(xs), std::move(ys),
                               join(g.left_tail(), fl_kind), join(g.right_tail(), fr_kind)));
}

PLMap invert(const PLMap& f) { return normalize_raw(invert_raw(f)); }

PLMap power(const PLMap& f, long n) {
  PLMap base = n < 0 ? invert(f) : f;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  PLMap acc;
  while (e) {
    if (e & 1UL) acc = compose(acc, base);
    e >>= 1;
    if (e) base = compose(base, base);
  }
  return acc;
}

PLMap reverse_conjugate(const PLMap& f) { return normalize_raw(mirror_raw(f)); }

// ---------------------------------------------------------------------------
// Fixed points

namespace {

Rat decreasing_fixed_point(const PLMap& f) {
  // f(t) - t is strictly decreasing; bracket the root, then solve on a piece.
  auto g = [&](const Rat& t) -> Rat { return f(t) - t; };
  Rat lo = f.window_left() - 1;
  Rat hi = f.window_right() + 1;
  // Outside the window g moves by at least 2 per unit step.
  if (g(lo) < 0) lo -= ceil_rat(-g(lo) / 2) + 1;
  if (g(hi) > 0) hi += ceil_rat(g(hi) / 2) + 1;
  auto c = f.candidates_in(lo, hi);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    Rat ga = g(c[i]), gb = g(c[i + 1]);
    if (ga == 0) return c[i];
    if (gb == 0) return c[i + 1];
    if (ga > 0 && gb < 0) return c[i] - ga * (c[i + 1] - c[i]) / (gb - ga);
  }
  throw Error("InvalidMap", "fixed point of an orientation-reversing map not found");
}

}  // namespace

std::vector<Component> fixed_components(const PLMap& f, const Rat& lo, const Rat& hi) {
  if (f.orientation() == -1) {
    Rat p = decreasing_fixed_point(f);
    if (lo <= p && p <= hi) return {Component{p, p}};
    return {};
  }
  const Rat& L = f.window_left();
  const Rat& R = f.window_right();
  Rat a = std::min(lo, L) - 2;
  Rat b = std::max(hi, R) + 2;
  auto c = f.candidates_in(a, b);
  std::vector<Component> raw;
  auto add = [&](const Rat& u, const Rat& v) {
    if (!raw.empty() && *raw.back().hi >= u) {
      if (*raw.back().hi < v) raw.back().hi = v;
      return;
    }
    raw.push_back(Component{u, v});
  };
  std::vector<Rat> g(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) g[i] = f(c[i]) - c[i];
  if (c.size() == 1 && g[0] == 0) add(c[0], c[0]);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const Rat &ga = g[i], &gb = g[i + 1];
    if (ga == 0 && gb == 0) {
      add(c[i], c[i + 1]);
    } else if (ga == 0) {
      add(c[i], c[i]);
    } else if (gb == 0) {
      add(c[i + 1], c[i + 1]);
    } else if ((ga < 0) != (gb < 0)) {
      Rat r = c[i] - ga * (c[i + 1] - c[i]) / (gb - ga);
      add(r, r);
    }
  }
  bool id_left = f.left_tail() == TailKind::Translation && f.left_constant() == 0;
  bool id_right = f.right_tail() == TailKind::Translation && f.right_constant() == 0;
  std::vector<Component> out;
  for (auto comp : raw) {
    if (id_left && *comp.lo == a) comp.lo.reset();
    if (id_right && *comp.hi == b) comp.hi.reset();
    bool meets = (!comp.hi || *comp.hi >= lo) && (!comp.lo || *comp.lo <= hi);
    if (meets) out.push_back(comp);
  }
  return out;
}

FixSet fixed_set(const PLMap& f) {
  FixSet s;
  s.window_lo = f.window_left();
  s.window_hi = f.window_right();
  if (f.orientation() == -1) {
    Rat p = decreasing_fixed_point(f);
    s.components.push_back(Component{p, p});
    return s;
  }
  s.components = fixed_components(f, s.window_lo, s.window_hi);
  if (f.left_tail() == TailKind::Periodic &&
      !fixed_components(f, s.window_lo - 1, s.window_lo).empty())
    s.left = FixTail::PeriodicInfinite;
  if (f.right_tail() == TailKind::Periodic &&
      !fixed_components(f, s.window_hi, s.window_hi + 1).empty())
    s.right = FixTail::PeriodicInfinite;
  return s;
}

std::vector<Rat> FixSet::boundary() const {
  std::vector<Rat> out;
  for (const auto& c : components) {
    if (c.lo) out.push_back(*c.lo);
    if (c.hi && !(c.lo && *c.lo == *c.hi)) out.push_back(*c.hi);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Membership

namespace {

// +1 if f(t) > t on all of (p, q) and f = id outside, -1 for f(t) < t, 0 otherwise.
int strict_sign(const PLMap& f, const std::optional<Rat>& p, const std::optional<Rat>& q) {
  if (f.orientation() != 1) return 0;
  if (p && q && !(*p < *q)) return 0;
  Rat lo = std::min(p.value_or(f.window_left()), f.window_left()) - 1;
  Rat hi = std::max(q.value_or(f.window_right()), f.window_right()) + 1;
  auto comps = fixed_components(f, lo, hi);
  FixSet fs = fixed_set(f);
  if (!p && fs.left == FixTail::PeriodicInfinite) return 0;
  if (!q && fs.right == FixTail::PeriodicInfinite) return 0;
  if (p && !std::any_of(comps.begin(), comps.end(),
                        [&](const Component& c) { return !c.lo && c.hi && *c.hi >= *p; }))
    return 0;
  if (q && !std::any_of(comps.begin(), comps.end(),
                        [&](const Component& c) { return !c.hi && c.lo && *c.lo <= *q; }))
    return 0;
  for (const auto& c : comps) {
    bool above_p = !p || !c.hi || *c.hi > *p;
    bool below_q = !q || !c.lo || *c.lo < *q;
    if (above_p && below_q) return 0;
  }
  Rat t = p && q ? (*p + *q) / 2 : p ? *p + 1 : q ? *q - 1 : Rat(0);
  return f(t) > t ? 1 : -1;
}

}  // namespace

Membership classify(const PLMap& f) {
  Membership m;
  const auto& xs = f.xs();
  const auto& ys = f.ys();
  bool ok = true;
  for (std::size_t i = 0; i < xs.size() && ok; ++i) ok = is_dyadic(xs[i]) && is_dyadic(ys[i]);
  for (std::size_t i = 0; i + 1 < xs.size() && ok; ++i)
    ok = log2_exact(abs((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]))).has_value();
  m.in_EPtilde2 = ok;
  m.in_PL2R = ok && f.orientation() == 1;
  m.in_EP2 = m.in_PL2R;
  if (m.in_EP2 && f.left_tail() == TailKind::Translation &&
      f.right_tail() == TailKind::Translation && is_integer(f.left_constant()) &&
      is_integer(f.right_constant())) {
    m.in_F = true;
    m.m_minus = f.left_constant().get_num();
    m.m_plus = f.right_constant().get_num();
  }
  return m;
}

Membership classify(const PLMap& f, const Component& support) {
  Membership m = classify(f);
  int s = strict_sign(f, support.lo, support.hi);
  m.strict_above = s == 1;
  m.strict_below = s == -1;
  return m;
}

// ---------------------------------------------------------------------------
// Gluing

PLMap glue(const std::vector<GluePiece>& pieces) {
  if (pieces.empty()) throw Error("DiscontinuousGlue", "no pieces");
  if (pieces.front().lo || pieces.back().hi)
    throw Error("DiscontinuousGlue", "pieces must cover the whole line");
  if (pieces.size() == 1) return pieces.front().map;
  const int eps = pieces.front().map.orientation();
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const auto& u = pieces[i];
    const auto& v = pieces[i + 1];
    if (!u.hi || !v.lo || *u.hi != *v.lo)
      throw Error("DiscontinuousGlue", "pieces are not consecutive");
    if (u.lo && !(*u.lo < *u.hi)) throw Error("DiscontinuousGlue", "empty piece");
    if (v.map.orientation() != eps) throw Error("DiscontinuousGlue", "orientation mismatch");
    if (u.map(*u.hi) != v.map(*u.hi))
      throw Error("DiscontinuousGlue", "values disagree at " + to_string(*u.hi));
  }
  const auto& first = pieces.front();
  const auto& last = pieces.back();
  Rat a = std::min(*first.hi, first.map.window_left()) - 1;
  Rat b = std::max(*last.lo, last.map.window_right()) + 1;
  std::vector<Rat> xs, ys;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& pc = pieces[i];
    Rat lo = pc.lo ? *pc.lo : a;
    Rat hi = pc.hi ? *pc.hi : b;
    for (const auto& c : pc.map.candidates_in(lo, hi)) {
      if (!xs.empty() && xs.back() == c) continue;
      xs.push_back(c);
      ys.push_back(pc.map(c));
    }
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    bool mono = eps == 1 ? ys[i] < ys[i + 1] : ys[i] > ys[i + 1];
    if (!mono) throw Error("DiscontinuousGlue", "glued map is not monotone");
  }
  return normalize_raw(
      raw_map(eps, std::move(xs), std::move(ys), first.map.left_tail(), last.map.right_tail()));
}

// ---------------------------------------------------------------------------
// Text format

std::string PLMap::to_text() const {
  std::ostringstream os;
  auto tail = [](TailKind k) { return k == TailKind::Periodic ? "periodic" : "translation"; };
  os << "orientation " << (eps_ == 1 ? "+1" : "-1") << "\n";
  os << "window " << to_string(xs_.front()) << " " << to_string(xs_.back()) << "\n";
  os << "left " << tail(left_) << "\n";
  os << "right " << tail(right_) << "\n";
  os << "points\n";
  for (std::size_t i = 0; i < xs_.size(); ++i)
    os << to_string(xs_[i]) << " " << to_string(ys_[i]) << "\n";
  os << "end\n";
  return os.str();
}

namespace {

struct Token {
  std::string_view text;
  std::size_t col;
};

std::vector<Token> split_tokens(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

}  // namespace

PLMap PLMap::from_text(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<Token>>> lines;
  std::size_t lineno = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = split_tokens(line);
    if (!toks.empty()) lines.emplace_back(lineno, std::move(toks));
    pos = nl + 1;
  }
  std::size_t k = 0;
  auto fail = [](std::size_t ln, std::size_t col, const std::string& msg) -> ParseError {
    return ParseError(msg + " at " + std::to_string(ln) + ":" + std::to_string(col), ln, col);
  };
  auto expect = [&](std::string_view key, std::size_t nargs) -> const std::vector<Token>& {
    if (k >= lines.size()) throw fail(lineno, 1, "expected '" + std::string(key) + "'");
    const auto& [ln, toks] = lines[k];
    if (toks[0].text != key)
      throw fail(ln, toks[0].col, "expected '" + std::string(key) + "'");
    if (toks.size() != nargs + 1) throw fail(ln, toks[0].col, "wrong number of fields");
    ++k;
    return toks;
  };
  auto ln_of = [&]() { return lines[k - 1].first; };

  const auto& o = expect("orientation", 1);
  int eps;
  if (o[1].text == "+1" || o[1].text == "1") eps = 1;
  else if (o[1].text == "-1") eps = -1;
  else throw fail(ln_of(), o[1].col, "orientation must be +1 or -1");

  const auto& w = expect("window", 2);
  std::size_t wl = ln_of();
  Rat L = parse_rat(w[1].text, wl, w[1].col);
  Rat R = parse_rat(w[2].text, wl, w[2].col);

  auto tail_of = [&](std::string_view key) {
    const auto& t = expect(key, 1);
    if (t[1].text == "translation") return TailKind::Translation;
    if (t[1].text == "periodic") return TailKind::Periodic;
    throw fail(ln_of(), t[1].col, "tail must be 'translation' or 'periodic'");
  };
  TailKind left = tail_of("left");
  TailKind right = tail_of("right");
  expect("points", 0);
  std::vector<Rat> xs, ys;
  while (true) {
    if (k >= lines.size()) throw fail(lineno, 1, "missing 'end'");
    const auto& [ln, toks] = lines[k];
    if (toks[0].text == "end") {
      if (toks.size() != 1) throw fail(ln, toks[1].col, "unexpected field after 'end'");
      ++k;
      break;
    }
    if (toks.size() != 2) throw fail(ln, toks[0].col, "expected a point 'x y'");
    xs.push_back(parse_rat(toks[0].text, ln, toks[0].col));
    ys.push_back(parse_rat(toks[1].text, ln, toks[1].col));
    ++k;
  }
  if (k < lines.size()) throw fail(lines[k].first, 1, "trailing content after 'end'");
  if (xs.empty()) throw fail(wl, 1, "no points");
  if (xs.front() != L || xs.back() != R)
    throw fail(wl, w[1].col, "window must match the first and last point");
  try {
    return make(eps, std::move(xs), std::move(ys), left, right);
  } catch (const Error& e) {
    throw fail(wl, 1, e.what());
  }
}

}  // namespace thompson
