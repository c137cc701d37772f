#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "thompson/plmap.hpp"

namespace thompson {

// Open interval (lo, hi) with dyadic ends; nullopt ends mean the whole line.
struct Context {
  std::optional<Rat> lo, hi;
};

bool transport_exists(const Rat& alpha, const Rat& beta, const Context& ctx = {});

// Some g in F (supported in ctx when bounded) with g(alpha_i) = beta_i, or
// nullopt when a pair is not transportable. Throws UnsortedInput.
std::optional<PLMap> transport_build(const std::vector<std::pair<Rat, Rat>>& pairs,
                                     const Context& ctx = {});

// The unique m with g^m(u) = v. Throws FixedBasePoint if g(u) = u.
std::optional<long> unique_power(const PLMap& g, const Rat& u, const Rat& v);

// Breakpoints of a map in PL2 sending [x0, x1] onto [y0, y1] increasingly.
// All four ends must be dyadic.
std::vector<std::pair<Rat, Rat>> dyadic_interpolation(const Rat& x0, const Rat& x1, const Rat& y0,
                                                      const Rat& y1);

}  // namespace thompson
