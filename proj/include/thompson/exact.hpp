#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace thompson {

using Int = mpz_class;
using Rat = mpq_class;

//! Error raised when a textual scalar cannot be parsed.
struct ParseError : std::runtime_error {
  std::size_t line = 0;
  std::size_t column = 0;
  ParseError(const std::string& what, std::size_t l, std::size_t c)
      : std::runtime_error(what), line(l), column(c) {}
};

Rat make_rat(const Int& num, const Int& den);
Rat rat(long num, long den = 1);

//! 2^e as an exact rational; e may be negative.
Rat pow2(long e);

Int floor_rat(const Rat& x);
Int ceil_rat(const Rat& x);
bool is_integer(const Rat& x);
long to_long(const Int& x);

std::string to_string(const Rat& x);

//! Accepts "n", "n/d" and "m*2^e". Column offsets in errors are 1-based
//! and relative to `text`.
Rat parse_rat(std::string_view text, std::size_t line = 1, std::size_t column = 1);

//! Value mantissa * 2^exponent with an odd (or zero) mantissa.
struct Dyadic {
  Int mantissa;
  long exponent = 0;

  static std::optional<Dyadic> from_rat(const Rat& x);
  Rat to_rat() const;
  std::string to_string() const;
  bool operator==(const Dyadic&) const = default;
};

bool is_dyadic(const Rat& x);

//! Strictly positive power of two.
struct Pow2 {
  long exponent = 0;

  static std::optional<Pow2> from_rat(const Rat& x);
  Rat value() const { return pow2(exponent); }
  Pow2 operator*(Pow2 o) const { return {exponent + o.exponent}; }
  Pow2 inverse() const { return {-exponent}; }
  bool operator==(const Pow2&) const = default;
};

std::optional<long> log2_exact(const Rat& x);

//! alpha = 2^t * m / n with m, n odd and coprime, n > 0.
struct OddDecomposition {
  bool zero = false;
  long t = 0;
  Int m;
  Int n;
};

OddDecomposition decompose_odd(const Rat& alpha);

//! Multiplicative order of 2 modulo an odd n >= 1 (1 for n == 1).
long order_of_two(const Int& n);

//! Least R >= 0 with p == 2^R * m (mod n), searched below ord(2 mod n).
std::optional<long> two_power_residue(const Int& m, const Int& p, const Int& n);

struct DiophSolution {
  enum class Kind { Empty, Line, All };
  Kind kind = Kind::Empty;
  std::pair<Int, Int> base;
  std::pair<Int, Int> dir;

  std::pair<Int, Int> at(const Int& j) const {
    return {base.first + j * dir.first, base.second + j * dir.second};
  }
};

//! Integer solutions of k*a + l*b = c.
DiophSolution lin_dioph(const Int& a, const Int& b, const Int& c);

Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y);

}  // namespace thompson
