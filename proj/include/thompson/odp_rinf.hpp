#pragma once

#include <vector>

#include "thompson/circle.hpp"
#include "thompson/conjugacy.hpp"
#include "thompson/plmap.hpp"
#include "thompson/words.hpp"

namespace thompson {

// g in EP2 with g^-1 y g = z, for y, z in F with Fix(y) = Fix(z) nonempty.
// Throws PreconditionViolated.
Decision odp_fixed(const PLMap& y, const PLMap& z);

// Orbit question for Aut+(F): fixed sets are aligned in F first. Fixed-point
// free pairs are only settled when an F-conjugator exists; otherwise the
// answer is ExhaustedCandidates and the circle instance is what remains.
Decision odp_decide(const PLMap& y, const PLMap& z);

// Find v on the circle with v^-1 s1 v = s1 and v^-1 ystar v = zstar.
struct T2CPInstance {
  CircleMap s1, ystar, zstar;
  // Rescaling data used to read conjugators on the right end circle.
  PLMap y;
  Rat L, R;
};

// y, z in F with y, z > t. Throws TailMismatch, PreconditionViolated.
T2CPInstance odp_reduce(const PLMap& y, const PLMap& z);

// The circle map induced near +inf by h in EP2 with h^-1 y h = z.
CircleMap induced_right(const T2CPInstance& inst, const PLMap& h);

bool solves(const T2CPInstance& inst, const CircleMap& v);

enum class Side { Left, Right };

// f restricted to a period near -inf (Left) or +inf (Right), mod Z.
CircleMap project_end(const PLMap& f, Side side);

// An element of EP2 supported on (p, inf) (Right) or (-inf, p) (Left) whose
// projection on that side is a. p must be dyadic.
PLMap embed_preimage(const CircleMap& a, const Rat& p, Side side);

struct F2xF2 {
  CircleMap a, b, c, d;             // on the circle
  PLMap ahat, bhat, chat, dhat;     // ahat, bhat left of 0; chat, dhat right of 0
};

// Also registers the generators "ahat", "bhat", "chat", "dhat" for words.
const F2xF2& f2xf2_generators();

// w1 a word in ahat, bhat and w2 in chat, dhat. True iff both end
// projections of w1 w2 agree.
bool stab_witness(const Word& w1, const Word& w2);

// z_1..z_n in F whose barred maps tau^-1 z_i have fixed sets with strictly
// increasing component counts (counted on the square when tau reverses).
std::vector<PLMap> rinfty_family_F(const PLMap& tau, long n);

// Number of components of Fix(tau^-1 z), or of Fix((tau^-1 z)^2) if tau
// reverses orientation. Throws when the set is unbounded and periodic.
long barred_fix_components(const PLMap& z, const PLMap& tau);

// Circle maps symmetric under t -> -t whose squares have 2^i fixed points.
std::vector<CircleMap> rinfty_family_T(long n);

// Number of boundary points of Fix(c) on the circle.
long circle_boundary_count(const CircleMap& c);

}  // namespace thompson
