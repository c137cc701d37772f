#include "thompson/exact.hpp"

#include <cctype>

namespace thompson {

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat rat(long num, long den) { return make_rat(Int(num), Int(den)); }

Rat pow2(long e) {
  Int one = 1;
  Int p;
  mpz_mul_2exp(p.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(e < 0 ? -e : e));
  return e >= 0 ? Rat(p) : make_rat(Int(1), p);
}

Int floor_rat(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Int ceil_rat(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

bool is_integer(const Rat& x) { return x.get_den() == 1; }

long to_long(const Int& x) {
  if (!x.fits_slong_p()) throw std::overflow_error("integer does not fit in long");
  return x.get_si();
}

std::string to_string(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

namespace {

struct Cursor {
  std::string_view s;
  std::size_t i = 0;
  std::size_t line, col0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at " + std::to_string(line) + ":" + std::to_string(col0 + i), line,
                     col0 + i);
  }
  bool eof() const { return i >= s.size(); }
  char peek() const { return eof() ? '\0' : s[i]; }

  Int integer() {
    std::size_t start = i;
    if (peek() == '-' || peek() == '+') ++i;
    std::size_t digits = i;
    while (!eof() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == digits) {
      i = start;
      fail("expected integer");
    }
    std::string tok(s.substr(start, i - start));
    if (tok[0] == '+') tok.erase(0, 1);
    return Int(tok, 10);
  }
};

}  // namespace

Rat parse_rat(std::string_view text, std::size_t line, std::size_t column) {
  Cursor c{text, 0, line, column};
  if (c.eof()) c.fail("empty rational");
  Int a = c.integer();
  if (c.eof()) return Rat(a);
  if (c.peek() == '/') {
    ++c.i;
    std::size_t at = c.i;
    Int d = c.integer();
    if (d <= 0) {
      c.i = at;
      c.fail(d == 0 ? "zero denominator" : "negative denominator");
    }
    if (!c.eof()) c.fail("trailing characters");
    return make_rat(a, d);
  }
  if (c.peek() == '*') {
    ++c.i;
    if (c.s.substr(c.i, 2) != "2^") c.fail("expected 2^ after *");
    c.i += 2;
    Int e = c.integer();
    if (!c.eof()) c.fail("trailing characters");
    return Rat(a) * pow2(to_long(e));
  }
  c.fail("unexpected character");
}

std::optional<Dyadic> Dyadic::from_rat(const Rat& x) {
  if (x == 0) return Dyadic{Int(0), 0};
  const Int& den = x.get_den();
  long dz = static_cast<long>(mpz_scan1(den.get_mpz_t(), 0));
  Int odd_den = den >> dz;
  if (odd_den != 1) return std::nullopt;
  Int num = x.get_num();
  long nz = static_cast<long>(mpz_scan1(num.get_mpz_t(), 0));
  return Dyadic{num >> nz, nz - dz};
}

Rat Dyadic::to_rat() const { return Rat(mantissa) * pow2(exponent); }

std::string Dyadic::to_string() const {
  return mantissa.get_str() + "*2^" + std::to_string(exponent);
}

bool is_dyadic(const Rat& x) {
  const Int& den = x.get_den();
  return mpz_popcount(den.get_mpz_t()) == 1;
}

std::optional<Pow2> Pow2::from_rat(const Rat& x) {
  auto e = log2_exact(x);
  if (!e) return std::nullopt;
  return Pow2{*e};
}

std::optional<long> log2_exact(const Rat& x) {
  if (x <= 0) return std::nullopt;
  const Int& n = x.get_num();
  const Int& d = x.get_den();
  if (n == 1 && mpz_popcount(d.get_mpz_t()) == 1)
    return -static_cast<long>(mpz_scan1(d.get_mpz_t(), 0));
  if (d == 1 && mpz_popcount(n.get_mpz_t()) == 1)
    return static_cast<long>(mpz_scan1(n.get_mpz_t(), 0));
  return std::nullopt;
}

OddDecomposition decompose_odd(const Rat& alpha) {
  OddDecomposition out;
  if (alpha == 0) {
    out.zero = true;
    out.m = 0;
    out.n = 1;
    return out;
  }
  Int num = alpha.get_num();
  Int den = alpha.get_den();
  long nz = static_cast<long>(mpz_scan1(num.get_mpz_t(), 0));
  long dz = static_cast<long>(mpz_scan1(den.get_mpz_t(), 0));
  out.t = nz - dz;
  out.m = num >> nz;
  out.n = den >> dz;
  return out;
}

long order_of_two(const Int& n) {
  if (n <= 0 || mpz_even_p(n.get_mpz_t())) throw std::domain_error("order_of_two needs odd n > 0");
  if (n == 1) return 1;
  Int x = 2 % n;
  long k = 1;
  while (x != 1) {
    x = (x * 2) % n;
    ++k;
  }
  return k;
}

std::optional<long> two_power_residue(const Int& m, const Int& p, const Int& n) {
  if (n <= 0 || mpz_even_p(n.get_mpz_t()))
    throw std::domain_error("two_power_residue needs odd n > 0");
  auto mod = [&](const Int& v) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    return r;
  };
  const Int target = mod(p);
  Int cur = mod(m);
  long ord = order_of_two(n);
  for (long r = 0; r < ord; ++r) {
    if (cur == target) return r;
    cur = mod(cur * 2);
  }
  return std::nullopt;
}

Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

DiophSolution lin_dioph(const Int& a, const Int& b, const Int& c) {
  DiophSolution s;
  if (a == 0 && b == 0) {
    s.kind = c == 0 ? DiophSolution::Kind::All : DiophSolution::Kind::Empty;
    s.base = {0, 0};
    s.dir = {0, 0};
    return s;
  }
  Int x, y;
  Int g = ext_gcd(a, b, x, y);
  if (c % g != 0) return s;
  Int scale = c / g;
  Int k0 = x * scale;
  Int l0 = y * scale;
  Int dk = b / g;
  Int dl = -a / g;
  if (dk < 0 || (dk == 0 && dl < 0)) {
    dk = -dk;
    dl = -dl;
  }
  // Reduce the base so that its first free coordinate lies in [0, |step|).
  Int j;
  if (dk != 0) {
    mpz_fdiv_q(j.get_mpz_t(), k0.get_mpz_t(), dk.get_mpz_t());
  } else {
    Int adl = abs(dl);
    mpz_fdiv_q(j.get_mpz_t(), l0.get_mpz_t(), adl.get_mpz_t());
    if (dl < 0) j = -j;
  }
  s.kind = DiophSolution::Kind::Line;
  s.base = {k0 - j * dk, l0 - j * dl};
  s.dir = {dk, dl};
  return s;
}

}  // namespace thompson
