#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "thompson/circle.hpp"
#include "thompson/conjugacy.hpp"
#include "thompson/odp_rinf.hpp"
#include "thompson/transport.hpp"
#include "thompson/twisted.hpp"
#include "thompson/words.hpp"

namespace py = pybind11;
using namespace thompson;

namespace {

// Rationals cross the boundary as strings ("3/4", "-2", "5*2^-3").
Rat rat_in(const std::string& s) { return parse_rat(s); }

py::dict decision(const Decision& d) {
  py::dict r;
  r["verdict"] = d.yes() ? "Yes" : "No";
  if (d.yes()) r["witness"] = *d.witness;
  else r["reason"] = to_string(d.reason);
  r["trace"] = d.trace;
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact PL maps of the line, conjugacy and twisted conjugacy in F";

  py::register_exception<Error>(m, "ThompsonError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<PLMap>(m, "PLMap")
      .def(py::init<>())
      .def_static("from_text", &PLMap::from_text)
      .def_static("from_points",
                  [](const std::vector<std::string>& xs, const std::vector<std::string>& ys) {
                    std::vector<Rat> a, b;
                    for (const auto& s : xs) a.push_back(rat_in(s));
                    for (const auto& s : ys) b.push_back(rat_in(s));
                    return PLMap::from_points(a, b);
                  })
      .def_static("translation", [](const std::string& c) { return PLMap::translation(rat_in(c)); })
      .def("to_text", &PLMap::to_text)
      .def("__call__", [](const PLMap& f, const std::string& t) { return to_string(f(rat_in(t))); })
      .def("__mul__", [](const PLMap& f, const PLMap& g) { return compose(f, g); })
      .def("inverse", [](const PLMap& f) { return invert(f); })
      .def("is_identity", &PLMap::is_identity)
      .def_property_readonly("orientation", &PLMap::orientation)
      .def("__eq__", [](const PLMap& f, const PLMap& g) { return f == g; })
      .def("__repr__", [](const PLMap& f) { return "<PLMap\n" + f.to_text() + ">"; });

  m.def("eval_word", [](const std::string& w) { return eval_word(w); });
  m.def("compose", [](const PLMap& f, const PLMap& g) { return compose(f, g); }, "f o g");
  m.def("conjugate", &conjugate, "g^-1 o y o g");
  m.def("classify", [](const PLMap& f) {
    Membership c = classify(f);
    py::dict r;
    r["PL2R"] = c.in_PL2R;
    r["EP2"] = c.in_EP2;
    r["EPtilde2"] = c.in_EPtilde2;
    r["F"] = c.in_F;
    return r;
  });
  m.def("fixed_components", [](const PLMap& f) {
    std::vector<std::pair<std::optional<std::string>, std::optional<std::string>>> out;
    for (const auto& c : fixed_set(f).components)
      out.emplace_back(c.lo ? std::optional(to_string(*c.lo)) : std::nullopt,
                       c.hi ? std::optional(to_string(*c.hi)) : std::nullopt);
    return out;
  });

  m.def("transport_exists", [](const std::string& a, const std::string& b) {
    return transport_exists(rat_in(a), rat_in(b));
  });
  m.def("transport_build", [](const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<std::pair<Rat, Rat>> p;
    for (const auto& [a, b] : pairs) p.emplace_back(rat_in(a), rat_in(b));
    return transport_build(p);
  });

  m.def("conj_in_F", [](const PLMap& y, const PLMap& z) { return decision(conj_in_F(y, z)); });
  m.def("tcp", [](const PLMap& y, const PLMap& z, const PLMap& tau) {
    return decision(tcp(y, z, tau));
  }, py::arg("y"), py::arg("z"), py::arg("tau") = PLMap::identity());
  m.def("odp_decide", [](const PLMap& y, const PLMap& z) { return decision(odp_decide(y, z)); });

  m.def("stab_witness", [](const std::string& w1, const std::string& w2) {
    return stab_witness(parse_word(w1), parse_word(w2));
  });
  m.def("f2xf2_generators", [] {
    const F2xF2& g = f2xf2_generators();
    return std::vector<PLMap>{g.ahat, g.bhat, g.chat, g.dhat};
  });
  m.def("rinfty_family_F", &rinfty_family_F);
  m.def("barred_fix_components", &barred_fix_components);
}
