#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "thompson/circle.hpp"
#include "thompson/conjugacy.hpp"
#include "thompson/odp_rinf.hpp"
#include "thompson/transport.hpp"
#include "thompson/twisted.hpp"
#include "thompson/words.hpp"

namespace thompson::cli {
namespace {

using Json = nlohmann::ordered_json;

// Malformed input; reported with exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Ctx {
  bool trace = false;
  std::ostream& out;
  std::ostream& err;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// First token of the first line that is neither blank nor a comment.
std::string first_token(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line.substr(0, line.find('#')));
    std::string tok;
    if (ls >> tok) return tok;
  }
  return "";
}

std::string where(const std::string& source, const ParseError& e) {
  std::string pos = std::to_string(e.line) + ":" + std::to_string(e.column);
  std::string msg = e.what();
  if (msg.ends_with(" at " + pos)) msg.resize(msg.size() - pos.size() - 4);
  return source + ":" + pos + ": " + msg;
}

// An argument naming a file that holds a map document or a word, or a word
// given inline.
PLMap load_element(const std::string& arg, const std::string& what) {
  std::string text = arg, source = "--" + what;
  if (std::filesystem::is_regular_file(arg)) {
    text = read_file(arg);
    source = arg;
  }
  try {
    if (first_token(text) == "orientation") return PLMap::from_text(text);
    return eval_word(text);
  } catch (const ParseError& e) {
    throw InputError(where(source, e));
  }
}

Word load_word(const std::string& text, const std::string& what) {
  try {
    return parse_word(text);
  } catch (const ParseError& e) {
    throw InputError(where("--" + what, e));
  }
}

Rat load_rat(const std::string& text, const std::string& what) {
  try {
    return parse_rat(text);
  } catch (const ParseError& e) {
    throw InputError(where("--" + what, e));
  }
}

std::string end_text(const std::optional<Rat>& x, bool upper) {
  return x ? to_string(*x) : upper ? "+inf" : "-inf";
}

Json check(const std::string& name, bool ok) { return Json{{"check", name}, {"ok", ok}}; }

bool all_ok(const Json& checks) {
  for (const auto& c : checks)
    if (!c["ok"].get<bool>()) return false;
  return true;
}

Json verify_conj(const PLMap& y, const PLMap& z, const PLMap& w, ConjugatorClass cls) {
  Json checks = Json::array();
  Membership m = classify(w);
  if (cls == ConjugatorClass::F) checks.push_back(check("witness in F", m.in_F));
  else checks.push_back(check("witness in EP2", m.in_EP2));
  checks.push_back(check("w^-1 y w = z", conjugate(y, w) == z));
  return checks;
}

Json verify_tcp(const PLMap& y, const PLMap& z, const PLMap& tau, const PLMap& w) {
  Json checks = Json::array();
  checks.push_back(check("witness in F", classify(w).in_F));
  PLMap image = compose(tau, compose(w, compose(invert(tau), compose(y, invert(w)))));
  checks.push_back(check("tau w tau^-1 y w^-1 = z", image == z));
  return checks;
}

Json decision_json(const Ctx& ctx, const Decision& d) {
  if (ctx.trace)
    for (const auto& s : d.trace) ctx.err << "trace: " << s << "\n";
  Json j;
  j["verdict"] = d.yes() ? "Yes" : "No";
  if (d.yes()) j["witness"] = d.witness->to_text();
  else j["reason"] = to_string(d.reason);
  j["trace"] = d.trace;
  return j;
}

Json membership_json(const Membership& m) {
  Json j;
  j["PL2R"] = m.in_PL2R;
  j["EP2"] = m.in_EP2;
  j["EPtilde2"] = m.in_EPtilde2;
  j["F"] = m.in_F;
  if (m.m_minus) j["m_minus"] = m.m_minus->get_str();
  if (m.m_plus) j["m_plus"] = m.m_plus->get_str();
  return j;
}

Json fixed_set_json(const FixSet& fs) {
  Json comps = Json::array();
  for (const auto& c : fs.components) comps.push_back({end_text(c.lo, false), end_text(c.hi, true)});
  auto tail = [](FixTail t) { return t == FixTail::Empty ? "Empty" : "PeriodicInfinite"; };
  return Json{{"components", comps}, {"left", tail(fs.left)}, {"right", tail(fs.right)}};
}

int emit(const Ctx& ctx, const Json& j, int code) {
  ctx.out << j.dump(2) << "\n";
  return code;
}

struct Args {
  std::string word, map, y, z, tau = "", witness, result, problem = "conj", cls = "F", w1, w2;
  std::vector<std::string> at, pairs;
  std::optional<std::string> lo, hi;
  long n = 0;
  std::optional<long> N;
  bool circle = false, json = false;
};

int cmd_eval(const Ctx& ctx, const Args& a) {
  if (a.word.empty() == a.map.empty()) throw InputError("eval: give exactly one of --word, --map");
  PLMap f = load_element(a.word.empty() ? a.map : a.word, a.word.empty() ? "map" : "word");
  Json j;
  j["map"] = f.to_text();
  Membership m = classify(f);
  j["membership"] = membership_json(m);
  if (f.orientation() == 1) j["fixed_set"] = fixed_set_json(fixed_set(f));
  Json values = Json::array();
  for (const auto& s : a.at) {
    Rat t = load_rat(s, "at");
    values.push_back({{"t", to_string(t)}, {"value", to_string(f(t))}});
  }
  j["values"] = values;
  return emit(ctx, j, 0);
}

int cmd_conj(const Ctx& ctx, const Args& a) {
  PLMap y = load_element(a.y, "y"), z = load_element(a.z, "z");
  ConjugatorClass cls = a.cls == "EP2" ? ConjugatorClass::EP2 : ConjugatorClass::F;
  Decision d = conj_search(y, z, cls);
  Json j = decision_json(ctx, d);
  if (d.yes()) j["verification"] = verify_conj(y, z, *d.witness, cls);
  return emit(ctx, j, d.yes() ? 0 : 1);
}

int cmd_tcp(const Ctx& ctx, const Args& a) {
  PLMap tau = a.tau.empty() ? PLMap::identity() : load_element(a.tau, "tau");
  PLMap y = load_element(a.y, "y"), z = load_element(a.z, "z");
  Decision d = tcp(y, z, tau);
  Json j = decision_json(ctx, d);
  if (d.yes()) j["verification"] = verify_tcp(y, z, tau, *d.witness);
  return emit(ctx, j, d.yes() ? 0 : 1);
}

int cmd_transport(const Ctx& ctx, const Args& a) {
  Context c;
  if (a.lo) c.lo = load_rat(*a.lo, "lo");
  if (a.hi) c.hi = load_rat(*a.hi, "hi");
  std::vector<std::pair<Rat, Rat>> pairs;
  Json pj = Json::array();
  for (const auto& p : a.pairs) {
    auto colon = p.find(':');
    if (colon == std::string::npos) throw InputError("--pair: expected alpha:beta, got '" + p + "'");
    Rat al = load_rat(p.substr(0, colon), "pair"), be = load_rat(p.substr(colon + 1), "pair");
    pairs.emplace_back(al, be);
    pj.push_back({{"alpha", to_string(al)}, {"beta", to_string(be)},
                  {"exists", transport_exists(al, be, c)}});
  }
  auto g = transport_build(pairs, c);
  Json j;
  j["pairs"] = pj;
  j["verdict"] = g ? "Yes" : "No";
  if (g) {
    j["map"] = g->to_text();
    Json checks = Json::array();
    checks.push_back(check("map in F", classify(*g).in_F));
    for (const auto& [al, be] : pairs)
      checks.push_back(check("g(" + to_string(al) + ") = " + to_string(be), (*g)(al) == be));
    j["verification"] = checks;
  }
  return emit(ctx, j, g ? 0 : 1);
}

int cmd_mather(const Ctx& ctx, const Args& a) {
  PLMap y = load_element(a.y, "y"), z = load_element(a.z, "z");
  MatherData md = mather(y, z, a.N);
  SolutionFamily sol = solve_exponent(md.t0, md.t1, md.t);
  Json j;
  j["N"] = md.N;
  j["L"] = to_string(md.L);
  j["R"] = to_string(md.R);
  const std::pair<const char*, const CircleMap*> maps[] = {
      {"y_inf", &md.y_inf}, {"z_inf", &md.z_inf}, {"v0", &md.v0}, {"v1", &md.v1},
      {"t0", &md.t0},       {"t1", &md.t1},       {"t", &md.t}};
  for (const auto& [name, m] : maps) j[name] = m->to_text();
  j["solutions"] = to_string(sol);
  j["used_fallback"] = sol.used_fallback;
  Json conj = Json::array();
  bool found = false;
  for (long l : sol.tails()) {
    auto g = conjugate_with_tail(y, z, l);
    Json e{{"tail", l}};
    if (g && conjugate(y, *g) == z) {
      e["witness"] = g->to_text();
      found = true;
    } else {
      e["witness"] = nullptr;
    }
    conj.push_back(e);
  }
  j["conjugators"] = conj;
  j["verdict"] = found ? "Yes" : "No";
  return emit(ctx, j, found ? 0 : 1);
}

int cmd_odp(const Ctx& ctx, const Args& a) {
  PLMap y = load_element(a.y, "y"), z = load_element(a.z, "z");
  Decision d = odp_decide(y, z);
  Json j = decision_json(ctx, d);
  if (d.yes()) j["verification"] = verify_conj(y, z, *d.witness, ConjugatorClass::EP2);
  if (!d.yes() && d.reason == Reason::ExhaustedCandidates && fixed_set(y).empty()) {
    // Same orbit question for the inverses when the maps lie below the diagonal.
    bool up = y(Rat(0)) > 0;
    try {
      T2CPInstance inst = up ? odp_reduce(y, z) : odp_reduce(invert(y), invert(z));
      j["t2cp"] = Json{{"inverted", !up},
                       {"s1", inst.s1.to_text()},
                       {"ystar", inst.ystar.to_text()},
                       {"zstar", inst.zstar.to_text()}};
    } catch (const Error& e) {
      j["t2cp_error"] = e.code();
    }
  }
  return emit(ctx, j, d.yes() ? 0 : 1);
}

int cmd_rinf(const Ctx& ctx, const Args& a) {
  if (a.n < 1) throw InputError("rinf: --n must be positive");
  Json j;
  bool ok = true;
  if (a.circle) {
    auto fam = rinfty_family_T(a.n);
    Json maps = Json::array(), counts = Json::array(), sym = Json::array();
    long last = -1;
    for (const auto& h : fam) {
      maps.push_back(h.to_text());
      long c = circle_boundary_count(power(h, 2));
      counts.push_back(c);
      bool s = reverse_conjugate(h.lift()) == h.lift();
      sym.push_back(s);
      ok = ok && s && c > last;
      last = c;
    }
    j["family"] = maps;
    j["boundary_counts_of_squares"] = counts;
    j["symmetric"] = sym;
  } else {
    PLMap tau = a.tau.empty() ? PLMap::identity() : load_element(a.tau, "tau");
    auto fam = rinfty_family_F(tau, a.n);
    Json maps = Json::array(), counts = Json::array(), pairs = Json::array();
    for (const auto& z : fam) {
      maps.push_back(z.to_text());
      counts.push_back(barred_fix_components(z, tau));
    }
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t k = 0; k < fam.size(); ++k) {
        if (i == k) continue;
        Decision d = tcp(fam[i], fam[k], tau);
        ok = ok && !d.yes();
        Json e{{"i", i}, {"j", k}, {"verdict", d.yes() ? "Yes" : "No"}};
        if (!d.yes()) e["reason"] = to_string(d.reason);
        pairs.push_back(e);
      }
    j["tau"] = tau.to_text();
    j["family"] = maps;
    j["fixed_components"] = counts;
    j["pairwise"] = pairs;
  }
  j["verdict"] = ok ? "Yes" : "No";
  return emit(ctx, j, ok ? 0 : 1);
}

int cmd_f2xf2(const Ctx& ctx, const Args& a) {
  const F2xF2& g = f2xf2_generators();
  Json j;
  j["a"] = g.a.to_text();
  j["b"] = g.b.to_text();
  j["c"] = g.c.to_text();
  j["d"] = g.d.to_text();
  j["ahat"] = g.ahat.to_text();
  j["bhat"] = g.bhat.to_text();
  j["chat"] = g.chat.to_text();
  j["dhat"] = g.dhat.to_text();
  Json checks = Json::array();
  checks.push_back(check("left projection of ahat is a", project_end(g.ahat, Side::Left) == g.a));
  checks.push_back(check("left projection of bhat is b", project_end(g.bhat, Side::Left) == g.b));
  checks.push_back(check("right projection of chat is c", project_end(g.chat, Side::Right) == g.c));
  checks.push_back(check("right projection of dhat is d", project_end(g.dhat, Side::Right) == g.d));
  for (const auto& [ln, l] : {std::pair{"ahat", &g.ahat}, std::pair{"bhat", &g.bhat}})
    for (const auto& [rn, r] : {std::pair{"chat", &g.chat}, std::pair{"dhat", &g.dhat}})
      checks.push_back(check(std::string(ln) + " commutes with " + rn,
                             compose(*l, *r) == compose(*r, *l)));
  j["verification"] = checks;
  int code = all_ok(checks) ? 0 : 1;
  if (!a.w1.empty() || !a.w2.empty()) {
    bool s = stab_witness(load_word(a.w1, "w1"), load_word(a.w2, "w2"));
    j["stab_witness"] = s;
    code = s ? 0 : 1;
  }
  return emit(ctx, j, code);
}

int cmd_verify(const Ctx& ctx, const Args& a) {
  PLMap y = load_element(a.y, "y"), z = load_element(a.z, "z");
  if (a.witness.empty() == a.result.empty())
    throw InputError("verify: give exactly one of --witness, --result");
  PLMap w;
  if (!a.result.empty()) {
    Json r;
    try {
      r = Json::parse(read_file(a.result));
    } catch (const Json::parse_error& e) {
      throw InputError(a.result + ": " + e.what());
    }
    if (!r.contains("witness") || !r["witness"].is_string())
      throw InputError(a.result + ": no witness in result");
    try {
      w = PLMap::from_text(r["witness"].get<std::string>());
    } catch (const ParseError& e) {
      throw InputError(where(a.result + " (witness)", e));
    }
  } else {
    w = load_element(a.witness, "witness");
  }
  Json checks;
  if (a.problem == "tcp") {
    PLMap tau = a.tau.empty() ? PLMap::identity() : load_element(a.tau, "tau");
    checks = verify_tcp(y, z, tau, w);
  } else {
    bool ep2 = a.problem == "odp" || a.problem == "conj-ep2";
    checks = verify_conj(y, z, w, ep2 ? ConjugatorClass::EP2 : ConjugatorClass::F);
  }
  bool ok = all_ok(checks);
  return emit(ctx, Json{{"accepted", ok}, {"checks", checks}}, ok ? 0 : 1);
}

int cmd_batch(const Ctx& ctx, const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  Json results = Json::array();
  int worst = 0;
  while (std::getline(in, line)) {
    if (first_token(line).empty()) continue;
    std::ostringstream out;
    int code = run_line(line, out, ctx.err);
    worst = std::max(worst, code);
    Json r{{"command", line}, {"exit", code}};
    try {
      r["output"] = Json::parse(out.str());
    } catch (const Json::parse_error&) {
      r["output"] = out.str();
    }
    results.push_back(r);
  }
  return emit(ctx, Json{{"results", results}}, worst);
}

template <class Parse>
int execute(Parse&& parse, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision procedures for Thompson's group F and its automorphisms", "thompson"};
  app.fallthrough();
  Args a;
  bool trace = false;
  std::string batch;
  app.add_flag("--trace", trace, "Print the human-readable pipeline trace to stderr");
  app.add_option("--batch", batch, "Run one command per line of FILE");

  auto element = [&](CLI::App* s, const char* name, std::string& dst, const char* help,
                     bool required = true) {
    auto* o = s->add_option(name, dst, help);
    if (required) o->required();
  };

  auto* eval = app.add_subcommand("eval", "Evaluate a word or map document");
  eval->add_option("--word", a.word, "Word, or file holding one");
  eval->add_option("--map", a.map, "File holding a map document");
  eval->add_option("--at", a.at, "Points at which to evaluate");

  auto* conj = app.add_subcommand("conj", "Conjugacy of y and z");
  element(conj, "--y", a.y, "Element y (file or word)");
  element(conj, "--z", a.z, "Element z (file or word)");
  conj->add_option("--class", a.cls, "Conjugator class")->check(CLI::IsMember({"F", "EP2"}));

  auto* tw = app.add_subcommand("tcp", "Twisted conjugacy of y and z for tau");
  element(tw, "--tau", a.tau, "Automorphism tau in EP~2 (default identity)", false);
  element(tw, "--y", a.y, "Element y of F");
  element(tw, "--z", a.z, "Element z of F");
  tw->add_flag("--json", a.json, "Accepted for compatibility; output is always JSON");

  auto* tr = app.add_subcommand("transport", "Element of F moving alpha_i to beta_i");
  tr->add_option("--pair", a.pairs, "alpha:beta")->required();
  tr->add_option("--lo", a.lo, "Left end of the support interval");
  tr->add_option("--hi", a.hi, "Right end of the support interval");

  auto* ma = app.add_subcommand("mather", "End circle data and exponent equation");
  element(ma, "--y", a.y, "Fixed-point free y above the diagonal");
  element(ma, "--z", a.z, "Fixed-point free z above the diagonal");
  ma->add_option("--N", a.N, "Power used for the transition maps");

  auto* od = app.add_subcommand("odp", "Orbit question for orientation-preserving automorphisms");
  element(od, "--y", a.y, "Element y of F");
  element(od, "--z", a.z, "Element z of F");

  auto* ri = app.add_subcommand("rinf", "Families of pairwise non-twisted-conjugate elements");
  element(ri, "--tau", a.tau, "Automorphism tau (default identity)", false);
  ri->add_option("--n", a.n, "Family size")->required();
  ri->add_flag("--circle", a.circle, "Symmetric family on the circle instead");

  auto* ff = app.add_subcommand("f2xf2", "Generators of F2 x F2 inside F and stabilizer check");
  ff->add_option("--w1", a.w1, "Word in ahat, bhat");
  ff->add_option("--w2", a.w2, "Word in chat, dhat");

  auto* ve = app.add_subcommand("verify", "Re-check a claimed witness");
  ve->add_option("--problem", a.problem, "conj, conj-ep2, tcp or odp")
      ->check(CLI::IsMember({"conj", "conj-ep2", "tcp", "odp"}));
  element(ve, "--y", a.y, "Element y");
  element(ve, "--z", a.z, "Element z");
  element(ve, "--tau", a.tau, "Automorphism tau for tcp", false);
  ve->add_option("--witness", a.witness, "Witness (file or word)");
  ve->add_option("--result", a.result, "JSON result holding a witness");

  try {
    parse(app);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Ctx ctx{trace, out, err};
  try {
    f2xf2_generators();  // makes ahat..dhat available to words
    if (!batch.empty()) return cmd_batch(ctx, batch);
    if (eval->parsed()) return cmd_eval(ctx, a);
    if (conj->parsed()) return cmd_conj(ctx, a);
    if (tw->parsed()) return cmd_tcp(ctx, a);
    if (tr->parsed()) return cmd_transport(ctx, a);
    if (ma->parsed()) return cmd_mather(ctx, a);
    if (od->parsed()) return cmd_odp(ctx, a);
    if (ri->parsed()) return cmd_rinf(ctx, a);
    if (ff->parsed()) return cmd_f2xf2(ctx, a);
    if (ve->parsed()) return cmd_verify(ctx, a);
    err << app.help();
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return emit(ctx, Json{{"error", "InputError"}, {"detail", e.what()}}, 2);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return emit(ctx, Json{{"error", e.code()}, {"detail", e.what()}}, 2);
  } catch (const ParseError& e) {
    err << "error: " << e.line << ":" << e.column << ": " << e.what() << "\n";
    return emit(ctx, Json{{"error", "ParseError"}, {"detail", e.what()}}, 2);
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return execute([&](CLI::App& app) { app.parse(argc, argv); }, out, err);
}

int run_line(const std::string& line, std::ostream& out, std::ostream& err) {
  return execute([&](CLI::App& app) { app.parse(line, false); }, out, err);
}

}  // namespace thompson::cli
