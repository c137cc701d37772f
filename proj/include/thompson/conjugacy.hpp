#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thompson/plmap.hpp"

namespace thompson {

// y = z and both are unit-periodic on (-inf, L] and on [R, +inf).
struct PeriodicityBox {
  Rat L, R;
};

enum class Reason {
  TailMismatch,
  FixSetMismatch,
  SlopeObstruction,
  ExponentEquationUnsolvable,
  ExhaustedCandidates,
  OrientationMismatch
};

std::string to_string(Reason r);

struct Decision {
  std::optional<PLMap> witness;  // present exactly for a Yes verdict
  Reason reason = Reason::ExhaustedCandidates;
  std::vector<std::string> trace;

  bool yes() const { return witness.has_value(); }
};

// Which group the conjugator is searched in.
enum class ConjugatorClass { F, EP2 };

// Search window used where no finite candidate set is known. Defaults to 64,
// overridable through THOMPSON_TCP_FALLBACK_BOUND.
long fallback_bound();

std::optional<PeriodicityBox> tails_agree(const PLMap& y, const PLMap& z);

struct Alignment {
  PLMap g;        // in F with g(bd Fix z) = bd Fix y
  PLMap z_prime;  // g z g^-1
};

std::optional<Alignment> align_fixed_sets(const PLMap& y, const PLMap& z);

// g_-(t) = g(t - stepL) for t < s0 and g(t) - stepR for t >= s0, patched on a
// small dyadic neighbourhood of s0 so the result stays in F. `gap` bounds the
// patch radius (distance from s0 to the nearest other point that must keep
// its image).
PLMap reduction_map(const PLMap& g, const Rat& s0, const Rat& stepL, const Rat& stepR,
                    const std::optional<Rat>& gap = std::nullopt);

// The limit of y^r g0 z^-r for fixed-point-free y, z sharing the box, where g0
// is the translation t + l on the left of the box. Throws NonConvergent when
// the limit is not eventually an integer translation within the step cap.
PLMap stair_conjugator(const PLMap& y, const PLMap& z, const PLMap& g0, const PeriodicityBox& box);

// The conjugator in F with left tail t + ell, if any. y and z fixed-point free.
std::optional<PLMap> conjugate_with_tail(const PLMap& y, const PLMap& z, long ell);

// Candidate conjugators without fixed points for y, z with equal, infinite
// fixed sets. Each entry is a verified conjugator.
std::vector<PLMap> fpf_candidates(const PLMap& y, const PLMap& z);

// g in F (or EP2) with g^-1 y g = z, i.e. g(z(t)) = y(g(t)).
Decision conj_in_F(const PLMap& y, const PLMap& z);
Decision conj_search(const PLMap& y, const PLMap& z, ConjugatorClass cls);

// A conjugator as in conj_in_F whose matching of fixed components sends the
// component of Fix(z) containing p to the one of Fix(y) containing p.
// Requires y(p) = z(p) = p.
std::optional<PLMap> conj_matching_at(const PLMap& y, const PLMap& z, const Rat& p);

// g^-1 y g
PLMap conjugate(const PLMap& y, const PLMap& g);

}  // namespace thompson
