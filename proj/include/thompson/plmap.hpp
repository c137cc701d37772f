#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thompson/errors.hpp"
#include "thompson/exact.hpp"

namespace thompson {

enum class TailKind { Translation, Periodic };

// A homeomorphism of the line that is piecewise linear on a window [L, R]
// and follows a tail law on each side of it.
//
// Translation: f(t) = eps*t + c beyond the window.
// Periodic:    f(t + 1) = f(t) + eps beyond the window.
//
// Values are always normalized, so operator== decides equality of maps.
class PLMap {
 public:
  PLMap();  // identity

  // Validates and normalizes. Throws Error("InvalidMap") on bad data.
  static PLMap make(int orientation, std::vector<Rat> xs, std::vector<Rat> ys, TailKind left,
                    TailKind right);
  // Breakpoints with translation tails of slope eps on both sides.
  static PLMap from_points(std::vector<Rat> xs, std::vector<Rat> ys);
  static PLMap identity() { return PLMap(); }
  static PLMap translation(const Rat& c);
  static PLMap reversal();

  int orientation() const { return eps_; }
  const std::vector<Rat>& xs() const { return xs_; }
  const std::vector<Rat>& ys() const { return ys_; }
  TailKind left_tail() const { return left_; }
  TailKind right_tail() const { return right_; }
  const Rat& window_left() const { return xs_.front(); }
  const Rat& window_right() const { return xs_.back(); }
  // Constant c with f(t) = eps*t + c on a Translation tail.
  Rat left_constant() const;
  Rat right_constant() const;

  Rat operator()(const Rat& t) const;
  Rat slope_right(const Rat& t) const;
  Rat slope_left(const Rat& t) const;

  // All points in [lo, hi] where the slope changes.
  std::vector<Rat> breakpoints_in(const Rat& lo, const Rat& hi) const;
  // Superset of breakpoints_in, cheap: window points and periodic copies.
  std::vector<Rat> candidates_in(const Rat& lo, const Rat& hi) const;

  bool is_identity() const;

  bool operator==(const PLMap& o) const = default;

  std::string to_text() const;
  static PLMap from_text(std::string_view text);

 private:
  int eps_ = 1;
  std::vector<Rat> xs_{Rat(0)};
  std::vector<Rat> ys_{Rat(0)};
  TailKind left_ = TailKind::Translation;
  TailKind right_ = TailKind::Translation;

  friend PLMap normalize_raw(PLMap raw);
  friend PLMap raw_map(int, std::vector<Rat>, std::vector<Rat>, TailKind, TailKind);
  friend PLMap mirror_raw(const PLMap&);
  friend PLMap invert_raw(const PLMap&);
};

Rat eval(const PLMap& f, const Rat& t);
// t -> f(g(t))
PLMap compose(const PLMap& f, const PLMap& g);
PLMap invert(const PLMap& f);
PLMap power(const PLMap& f, long n);
// t -> -f(-t)
PLMap reverse_conjugate(const PLMap& f);

// Unnormalized construction; the caller guarantees the invariants.
PLMap raw_map(int eps, std::vector<Rat> xs, std::vector<Rat> ys, TailKind left, TailKind right);
PLMap normalize_raw(PLMap raw);

struct Component {
  std::optional<Rat> lo;  // nullopt = -inf
  std::optional<Rat> hi;  // nullopt = +inf
  bool is_point() const { return lo && hi && *lo == *hi; }
  bool contains(const Rat& t) const { return (!lo || *lo <= t) && (!hi || t <= *hi); }
  bool operator==(const Component&) const = default;
};

enum class FixTail { Empty, PeriodicInfinite };

struct FixSet {
  std::vector<Component> components;  // disjoint, ordered, maximal
  FixTail left = FixTail::Empty;
  FixTail right = FixTail::Empty;
  Rat window_lo, window_hi;

  bool empty() const {
    return components.empty() && left == FixTail::Empty && right == FixTail::Empty;
  }
  std::vector<Rat> boundary() const;
};

FixSet fixed_set(const PLMap& f);
// Maximal components of Fix(f) meeting [lo, hi]; a component reaching an
// affine identity tail is reported as unbounded.
std::vector<Component> fixed_components(const PLMap& f, const Rat& lo, const Rat& hi);

struct Membership {
  bool in_PL2R = false;
  bool in_EP2 = false;
  bool in_EPtilde2 = false;
  bool in_F = false;
  std::optional<Int> m_minus, m_plus;
  std::optional<bool> strict_above, strict_below;
};

Membership classify(const PLMap& f);
// Also fills strict_above / strict_below for the open interval (lo, hi).
Membership classify(const PLMap& f, const Component& support);

struct GluePiece {
  std::optional<Rat> lo;  // nullopt = -inf
  std::optional<Rat> hi;  // nullopt = +inf
  PLMap map;
};

// Pieces must be consecutive and cover the line. Throws DiscontinuousGlue.
PLMap glue(const std::vector<GluePiece>& pieces);

}  // namespace thompson
