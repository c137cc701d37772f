#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thompson/plmap.hpp"

namespace thompson {

// A word is read left to right: "g h" sends t to h(g(t)).
struct Word {
  std::vector<std::pair<std::string, long>> letters;

  Word inverse() const;
  Word operator*(const Word& o) const;
  std::string to_string() const;
  bool operator==(const Word&) const = default;
};

Word parse_word(std::string_view text);

// Built-ins: x0, x1, theta, Theta, R. Throws DuplicateName.
void register_generator(const std::string& name, const PLMap& map);
// Throws UnknownGenerator.
PLMap generator(const std::string& name);
bool has_generator(const std::string& name);

PLMap eval_word(const Word& w);
PLMap eval_word(std::string_view text);

namespace gens {
PLMap x0();
PLMap x1();
PLMap theta();
PLMap Theta();
PLMap R();
}  // namespace gens

}  // namespace thompson
