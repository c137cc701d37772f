#pragma once

#include <optional>
#include <string_view>
#include <string>
#include <utility>
#include <vector>

#include "thompson/plmap.hpp"

namespace thompson {

// Orientation-preserving PL homeomorphism of the circle R / aZ. The lift is
// stored in unit coordinates (t -> t / a), satisfies lift(t+1) = lift(t) + 1
// and is normalized so that lift(0) lies in [0, 1).
class CircleMap {
 public:
  CircleMap();  // identity on the unit circle

  static CircleMap from_lift(const PLMap& lift, const Rat& circumference = Rat(1));
  // Restriction of f to [x, x + 1], where f commutes with t + 1.
  static CircleMap from_window(const PLMap& f, const Rat& x);
  static CircleMap rotation(const Rat& r);

  const Rat& circumference() const { return a_; }
  const PLMap& lift() const { return lift_; }
  Rat operator()(const Rat& t) const;  // in unit coordinates, reduced to [0, 1)
  bool is_identity() const;
  // Lift minus its integer rotation part when rotation number is an integer.
  std::optional<PLMap> fixing_lift() const;

  // "circumference a" followed by the lift document.
  std::string to_text() const;
  static CircleMap from_text(std::string_view text);

  bool operator==(const CircleMap& o) const = default;

 private:
  Rat a_{1};
  PLMap lift_;
};

CircleMap compose(const CircleMap& f, const CircleMap& g);  // f o g
CircleMap invert(const CircleMap& f);
CircleMap power(const CircleMap& f, long n);

// Fixed points of c in [0, 1), as components of the fixing lift.
std::vector<Component> circle_fixed(const CircleMap& c);

// The unique m with c^m(u) = v on the circle; c must have fixed points and u
// must not be one of them.
std::optional<long> circle_unique_power(const CircleMap& c, const Rat& u, const Rat& v);

struct Rescaling {
  PLMap H;     // valid on [lo, hi]
  PLMap ybar;  // H y H^-1, equal to t + 1 on [H(lo), H(hi) - 1]
  Rat lo, hi;
};

// H(y^k(L)) = k and H(y(t)) = H(t) + 1 for k in [-k_left, k_right]; y > t.
Rescaling rescale(const PLMap& y, const Rat& L, long k_left, long k_right);

struct MatherData {
  CircleMap y_inf, z_inf;  // transition maps between the two end circles
  CircleMap v0, v1;        // unit translation seen at -inf and +inf
  CircleMap t0, t1, t;     // t1^k t0^l = t  <=>  v1^k z_inf = y_inf v0^l
  long N = 0;
  Rat L, R;
};

// y, z fixed-point free with y, z > t, agreeing and unit-periodic outside a box.
MatherData mather(const PLMap& y, const PLMap& z, std::optional<long> N = std::nullopt);

// One periodic orbit: (point, period) for each point of the orbit.
std::vector<std::pair<Rat, long>> periodic_points(const CircleMap& c);

// Solutions (k, l) of t1^k o t0^l = t, as a union of cosets.
struct Coset {
  enum class Kind { Point, Line, Grid };
  Kind kind = Kind::Point;
  long k = 0, l = 0;    // base pair
  long dk = 0, dl = 0;  // Line direction
  long step_k = 1, step_l = 1;  // Grid spacing
  bool contains(long kk, long ll) const;
};

struct SolutionFamily {
  enum class Kind { Empty, FiniteSet, Line };
  std::vector<Coset> parts;
  // Set when a bounded search window was needed to resolve a degenerate case.
  bool used_fallback = false;

  Kind kind() const;
  bool contains(long k, long l) const;
  // Some tails l of solutions: every point, and the base of each line or grid.
  std::vector<long> tails() const;
};

std::string to_string(const SolutionFamily& f);

bool satisfies(const CircleMap& t0, const CircleMap& t1, const CircleMap& t, long k, long l);

SolutionFamily solve_exponent(const CircleMap& t0, const CircleMap& t1, const CircleMap& t);

// t0, t1, t are lifts fixing p (hence p + 1); equation read on [p, p + 1].
SolutionFamily interval_exponent(const PLMap& t0, const PLMap& t1, const PLMap& t, const Rat& p);

}  // namespace thompson
