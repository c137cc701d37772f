#include "thompson/words.hpp"

#include <cctype>
#include <map>
#include <mutex>
#include <shared_mutex>

namespace thompson {

namespace gens {

PLMap x0() { return PLMap::translation(Rat(1)); }

PLMap x1() { return PLMap::from_points({rat(0), rat(1)}, {rat(0), rat(2)}); }

PLMap theta() {
  return PLMap::from_points({rat(0), rat(1, 4), rat(1, 2), rat(1)},
                            {rat(0), rat(1, 2), rat(3, 4), rat(1)});
}

PLMap Theta() {
  return PLMap::make(1, {rat(0), rat(1, 4), rat(1, 2), rat(1)},
                     {rat(0), rat(1, 2), rat(3, 4), rat(1)}, TailKind::Periodic,
                     TailKind::Periodic);
}

PLMap R() { return PLMap::reversal(); }

}  // namespace gens

namespace {

struct Registry {
  std::shared_mutex mu;
  std::map<std::string, PLMap, std::less<>> table;

  Registry() {
    table.emplace("x0", gens::x0());
    table.emplace("x1", gens::x1());
    table.emplace("theta", gens::theta());
    table.emplace("Theta", gens::Theta());
    table.emplace("R", gens::R());
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_generator(const std::string& name, const PLMap& map) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
    throw Error("InvalidName", "generator names start with a letter: '" + name + "'");
  auto& r = registry();
  std::unique_lock lock(r.mu);
  if (!r.table.emplace(name, map).second) throw Error("DuplicateName", name);
}

PLMap generator(const std::string& name) {
  auto& r = registry();
  std::shared_lock lock(r.mu);
  auto it = r.table.find(name);
  if (it == r.table.end()) throw Error("UnknownGenerator", name);
  return it->second;
}

bool has_generator(const std::string& name) {
  auto& r = registry();
  std::shared_lock lock(r.mu);
  return r.table.count(name) > 0;
}

Word Word::inverse() const {
  Word w;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.emplace_back(it->first, -it->second);
  return w;
}

Word Word::operator*(const Word& o) const {
  Word w = *this;
  w.letters.insert(w.letters.end(), o.letters.begin(), o.letters.end());
  return w;
}

std::string Word::to_string() const {
  std::string out;
  for (const auto& [name, e] : letters) {
    if (!out.empty()) out += ' ';
    out += name;
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

Word parse_word(std::string_view text) {
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view tok = text.substr(start, i - start);
    auto caret = tok.find('^');
    std::string name(tok.substr(0, caret));
    long e = 1;
    if (name.empty()) throw ParseError("empty generator name", 1, start + 1);
    if (caret != std::string_view::npos) {
      std::string_view ex = tok.substr(caret + 1);
      std::size_t col = start + caret + 2;
      Rat r = parse_rat(ex, 1, col);
      if (!is_integer(r)) throw ParseError("exponent must be an integer", 1, col);
      e = to_long(r.get_num());
    }
    if (e != 0) w.letters.emplace_back(std::move(name), e);
  }
  return w;
}

PLMap eval_word(const Word& w) {
  PLMap acc;
  for (const auto& [name, e] : w.letters) acc = compose(power(generator(name), e), acc);
  return acc;
}

PLMap eval_word(std::string_view text) { return eval_word(parse_word(text)); }

}  // namespace thompson
