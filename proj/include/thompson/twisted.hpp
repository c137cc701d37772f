#pragma once

#include "thompson/conjugacy.hpp"
#include "thompson/plmap.hpp"

namespace thompson {

// Twisted conjugacy in F for the automorphism g -> tau^-1 g tau (word order).
// A Yes witness g satisfies z = g^-1 y tau^-1 g tau, functionally
// z = tau o g o tau^-1 o y o g^-1.

// True iff tau^-1 x0 tau = image_x0 and tau^-1 x1 tau = image_x1 in word
// order. Throws NotInEPtilde2.
bool check_tau(const PLMap& tau, const PLMap& image_x0, const PLMap& image_x1);

struct TwistedReduction {
  PLMap ybar, zbar;  // y tau^-1 and z tau^-1
};

TwistedReduction reduce_tcp(const PLMap& y, const PLMap& z, const PLMap& tau);

// The unique fixed point of an orientation-reversing map.
Rat reversing_fixed_point(const PLMap& f);

// For reversing y, z with y^2 = z^2 = id sharing their fixed point: the map
// that is the identity left of it and y^-1 z right of it, when y^-1 z ends in
// an integral translation. Throws PreconditionViolated.
std::optional<PLMap> reversing_special(const PLMap& y, const PLMap& z);

// g in F with g^-1 y g = z (functional), for reversing y, z with a common
// fixed point. Throws PreconditionViolated.
Decision reversing_general(const PLMap& y, const PLMap& z);

// G in F with G^-1 ybar G = zbar (functional) for ybar, zbar in EP~2. A
// reversing pair is first moved to a common fixed point.
Decision conj_tilde(const PLMap& ybar, const PLMap& zbar);

// Throws NotInF / NotInEPtilde2 on bad input classes.
Decision tcp(const PLMap& y, const PLMap& z, const PLMap& tau);

}  // namespace thompson
