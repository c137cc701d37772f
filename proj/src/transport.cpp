#include "thompson/transport.hpp"

#include <algorithm>

namespace thompson {

namespace {

// Splits n * 2^s into exactly k powers of two (popcount(n) <= k <= n * 2^s).
std::vector<Int> split_powers(const Int& n, long k) {
  std::vector<Int> terms;
  for (long b = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)); b >= 0; --b)
    if (mpz_tstbit(n.get_mpz_t(), static_cast<mp_bitcnt_t>(b))) terms.push_back(Int(1) << b);
  while (static_cast<long>(terms.size()) < k) {
    auto it = std::max_element(terms.begin(), terms.end());
    Int half = *it / 2;
    *it = half;
    terms.insert(it + 1, half);
  }
  return terms;
}

struct Germ {
  long k;  // slope 2^k
  Rat d;   // t -> 2^k t + d
  Rat operator()(const Rat& t) const { return pow2(k) * t + d; }
};

std::optional<Germ> affine_germ(const Rat& alpha, const Rat& beta) {
  auto a = decompose_odd(alpha);
  auto b = decompose_odd(beta);
  Int n = a.zero ? Int(1) : a.n;
  Int q = b.zero ? Int(1) : b.n;
  if (n != q) return std::nullopt;
  if (n == 1) return Germ{0, beta - alpha};
  auto R = two_power_residue(a.m, b.m, n);
  if (!R) return std::nullopt;
  long k = *R + b.t - a.t;
  Germ g{k, beta - pow2(k) * alpha};
  return g;
}

Rat dyadic_floor(const Rat& x, long j) { return Rat(floor_rat(x * pow2(j))) * pow2(-j); }

}  // namespace

std::vector<std::pair<Rat, Rat>> dyadic_interpolation(const Rat& x0, const Rat& x1, const Rat& y0,
                                                      const Rat& y1) {
  if (!(x0 < x1) || !(y0 < y1)) throw Error("InvalidMap", "interpolation needs proper intervals");
  auto lx = Dyadic::from_rat(x1 - x0);
  auto ly = Dyadic::from_rat(y1 - y0);
  if (!lx || !ly || !is_dyadic(x0) || !is_dyadic(y0))
    throw Error("InvalidMap", "interpolation needs dyadic ends");
  long e = std::min(lx->exponent, ly->exponent);
  Int n1 = lx->mantissa << (lx->exponent - e);
  Int n2 = ly->mantissa << (ly->exponent - e);
  long k = std::max<long>(mpz_popcount(n1.get_mpz_t()), mpz_popcount(n2.get_mpz_t()));
  long s = 0;
  while ((n1 << s) < k || (n2 << s) < k) ++s;
  auto a = split_powers(n1 << s, k);
  auto b = split_powers(n2 << s, k);
  Rat unit = pow2(e - s);
  std::vector<std::pair<Rat, Rat>> pts{{x0, y0}};
  Rat x = x0, y = y0;
  for (long i = 0; i < k; ++i) {
    x += Rat(a[i]) * unit;
    y += Rat(b[i]) * unit;
    pts.emplace_back(x, y);
  }
  return pts;
}

bool transport_exists(const Rat& alpha, const Rat& beta, const Context& ctx) {
  if (ctx.lo && (alpha <= *ctx.lo || beta <= *ctx.lo)) return false;
  if (ctx.hi && (alpha >= *ctx.hi || beta >= *ctx.hi)) return false;
  return affine_germ(alpha, beta).has_value();
}

std::optional<PLMap> transport_build(const std::vector<std::pair<Rat, Rat>>& pairs,
                                     const Context& ctx) {
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i)
    if (!(pairs[i].first < pairs[i + 1].first) || !(pairs[i].second < pairs[i + 1].second))
      throw Error("UnsortedInput", "pairs must increase in both coordinates");
  std::vector<Germ> germs;
  for (const auto& [a, b] : pairs) {
    if (!transport_exists(a, b, ctx)) return std::nullopt;
    germs.push_back(*affine_germ(a, b));
  }
  if (pairs.empty()) return PLMap::identity();

  Rat lo_all = std::min(pairs.front().first, pairs.front().second);
  Rat hi_all = std::max(pairs.back().first, pairs.back().second);
  Rat outer_lo = ctx.lo ? *ctx.lo : Rat(floor_rat(lo_all) - 1);
  Rat outer_hi = ctx.hi ? *ctx.hi : Rat(ceil_rat(hi_all) + 1);

  // Shrink dyadic neighbourhoods until domains and images are separated.
  std::vector<Rat> us(pairs.size()), vs(pairs.size());
  for (long j = 1;; ++j) {
    bool ok = true;
    for (std::size_t i = 0; i < pairs.size() && ok; ++i) {
      const Rat& a = pairs[i].first;
      us[i] = dyadic_floor(a, j);
      if (us[i] == a) us[i] -= pow2(-j);
      vs[i] = us[i] + pow2(1 - j);
      Rat gu = germs[i](us[i]), gv = germs[i](vs[i]);
      ok = outer_lo < us[i] && vs[i] < outer_hi && outer_lo < gu && gv < outer_hi;
      if (ok && i > 0) ok = vs[i - 1] < us[i] && germs[i - 1](vs[i - 1]) < gu;
    }
    if (ok) break;
  }

  std::vector<Rat> xs{outer_lo}, ys{outer_lo};
  auto append = [&](const std::vector<std::pair<Rat, Rat>>& pts) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
      xs.push_back(pts[i].first);
      ys.push_back(pts[i].second);
    }
  };
  Rat px = outer_lo, py = outer_lo;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    append(dyadic_interpolation(px, us[i], py, germs[i](us[i])));
    xs.push_back(vs[i]);
    ys.push_back(germs[i](vs[i]));
    px = vs[i];
    py = germs[i](vs[i]);
  }
  append(dyadic_interpolation(px, outer_hi, py, outer_hi));
  PLMap g = PLMap::from_points(std::move(xs), std::move(ys));
  for (const auto& [a, b] : pairs)
    if (g(a) != b) throw Error("InternalError", "transport verification failed");
  return g;
}

std::optional<long> unique_power(const PLMap& g, const Rat& u, const Rat& v) {
  Rat gu = g(u);
  if (gu == u) throw Error("FixedBasePoint", "base point " + to_string(u) + " is fixed");
  if (u == v) return 0;
  bool up = gu > u;
  bool forward = up == (v > u);  // iterate g (true) or its inverse
  PLMap h = forward ? g : invert(g);
  // The orbit of u under h is monotone towards the nearest fixed point beyond u.
  bool increasing = v > u;
  if (!fixed_components(g, increasing ? u : v, increasing ? v : u).empty()) return std::nullopt;
  Rat cur = u;
  long m = 0;
  while (increasing ? cur < v : cur > v) {
    cur = h(cur);
    ++m;
  }
  if (cur != v) return std::nullopt;
  return forward ? m : -m;
}

}  // namespace thompson
