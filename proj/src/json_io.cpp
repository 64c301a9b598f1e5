#include "carnot/json_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace carnot {

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number_float()) return rational_from_double(j.get<double>());
  } catch (const std::exception& e) {
    throw InputError(std::string("bad rational ") + j.dump() + ": " + e.what());
  }
  throw InputError("expected a rational, got " + j.dump());
}

Gaussian gaussian_from_json(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw InputError("complex value must be [re, im], got " + j.dump());
    return Gaussian(rational_from_json(j[0]), rational_from_json(j[1]));
  }
  return Gaussian(rational_from_json(j));
}

Json to_json(const Gaussian& z) {
  if (z.is_real()) return format_rational(z.re);
  return Json::array({format_rational(z.re), format_rational(z.im)});
}

namespace {

Json rationals_to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(format_rational(x));
  return out;
}

std::vector<Rational> rationals_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array, got " + j.dump());
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

Json algebra_to_json(const GradedAlgebra& alg) {
  Json layers = Json::array();
  for (const auto& l : alg.layers()) layers.push_back({l.lo, l.hi});
  Json brackets = Json::array();
  for (const auto& c : alg.constants()) {
    brackets.push_back({{"i", c.i}, {"j", c.j}, {"k", c.k}, {"c", format_rational(c.c)}});
  }
  return {{"label", alg.label()}, {"dim", alg.dim()}, {"layers", layers}, {"brackets", brackets}};
}

GradedAlgebra algebra_from_json(const Json& j) {
  if (j.is_string()) return algebra_from_label(j.get<std::string>());
  if (j.contains("label") && !j.contains("brackets")) return algebra_from_label(j.at("label").get<std::string>());
  try {
    const auto dim = field(j, "dim").get<std::size_t>();
    std::vector<LayerRange> layers;
    for (const auto& l : field(j, "layers")) layers.push_back({l.at(0).get<std::size_t>(), l.at(1).get<std::size_t>()});
    std::vector<StructureConstant> constants;
    for (const auto& b : field(j, "brackets")) {
      constants.push_back({b.at("i").get<std::size_t>(), b.at("j").get<std::size_t>(), b.at("k").get<std::size_t>(),
                           rational_from_json(b.at("c"))});
    }
    return GradedAlgebra::custom(dim, std::move(layers), std::move(constants));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad algebra description: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::stringstream buffer;
  if (path == "-") {
    buffer << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    buffer << in.rdbuf();
  }
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

GradedAlgebra load_algebra(const std::string& spec) {
  if (spec.find('(') != std::string::npos) return algebra_from_label(spec);
  return algebra_from_json(read_json_file(spec));
}

Json element_to_json(const GradedAlgebra& alg, const Element& x) {
  alg.check(x);
  return {{"algebra_label", alg.label()}, {"coords", rationals_to_json(x.coords)}};
}

Element element_from_json(const GradedAlgebra& alg, const Json& j) {
  const Json* coords = &j;
  if (j.is_object()) {
    if (j.contains("algebra_label") && j.at("algebra_label").get<std::string>() != alg.label()) {
      throw AlgebraMismatch("element belongs to " + j.at("algebra_label").get<std::string>() + ", expected " +
                            alg.label());
    }
    coords = &field(j, "coords");
  }
  Element x(rationals_from_json(*coords));
  if (x.size() != alg.dim()) {
    throw AlgebraMismatch("element has " + std::to_string(x.size()) + " coordinates, " + alg.label() + " needs " +
                          std::to_string(alg.dim()));
  }
  return x;
}

Element parse_element(const GradedAlgebra& alg, const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      return element_from_json(alg, Json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("bad element: ") + e.what());
    }
  }
  if (text.find(',') == std::string::npos && text.find(".json") != std::string::npos) {
    return element_from_json(alg, read_json_file(text));
  }
  if (text == "0" || text == "o") return alg.zero();
  std::vector<Rational> coords;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      coords.push_back(parse_rational(item));
    } catch (const std::exception& e) {
      throw InputError("bad coordinate \"" + item + "\": " + e.what());
    }
  }
  Element x(std::move(coords));
  if (x.size() != alg.dim()) {
    throw AlgebraMismatch("element has " + std::to_string(x.size()) + " coordinates, " + alg.label() + " needs " +
                          std::to_string(alg.dim()));
  }
  return x;
}

namespace {

Json shear_to_json(const ShearSpec& spec) {
  const auto& h = spec.profile();
  Json pieces = Json::array();
  const auto& bp = h.breakpoints();
  for (std::size_t k = 0; k < h.pieces().size(); ++k) {
    Json piece;
    piece["lo"] = k == 0 ? Json(nullptr) : Json(format_rational(bp[k - 1]));
    piece["hi"] = k == bp.size() ? Json(nullptr) : Json(format_rational(bp[k]));
    piece["coeffs"] = rationals_to_json(h.pieces()[k].coefficients());
    pieces.push_back(piece);
  }
  return {{"type", "shear"}, {"pieces", pieces}, {"lipschitz", format_rational(spec.lipschitz_bound())}};
}

ShearSpec shear_from_json(const Json& j) {
  std::optional<Rational> bound;
  if (j.contains("lipschitz")) bound = rational_from_json(j.at("lipschitz"));
  if (j.contains("samples")) {
    const Json& s = j.at("samples");
    auto spec = ShearSpec::from_samples(rationals_from_json(field(s, "x")), rationals_from_json(field(s, "y")));
    return bound ? ShearSpec(spec.profile(), bound) : spec;
  }
  const Json& pieces = field(j, "pieces");
  if (!pieces.is_array() || pieces.empty()) throw InputError("shear needs a non-empty \"pieces\" array");
  std::vector<std::optional<Rational>> lo, hi;
  std::vector<Polynomial> polys;
  for (const auto& p : pieces) {
    lo.push_back(p.contains("lo") && !p.at("lo").is_null() ? std::optional(rational_from_json(p.at("lo"))) : std::nullopt);
    hi.push_back(p.contains("hi") && !p.at("hi").is_null() ? std::optional(rational_from_json(p.at("hi"))) : std::nullopt);
    polys.emplace_back(rationals_from_json(field(p, "coeffs")));
  }
  bool bounded = true, unbounded_ends = !lo.front() && !hi.back();
  for (std::size_t k = 0; k < polys.size(); ++k) {
    if (!lo[k] || !hi[k]) bounded = false;
    if (k > 0 && (!lo[k] || !hi[k - 1] || *lo[k] != *hi[k - 1])) unbounded_ends = false;
  }
  if (bounded) {
    std::vector<Rational> l, h;
    for (std::size_t k = 0; k < polys.size(); ++k) {
      l.push_back(*lo[k]);
      h.push_back(*hi[k]);
    }
    return ShearSpec(PiecewisePolynomial::from_bounded_pieces(l, h, polys), bound);
  }
  if (!unbounded_ends) throw InputError("shear pieces must all be bounded, or tile the line with open ends");
  std::vector<Rational> breakpoints;
  for (std::size_t k = 0; k + 1 < polys.size(); ++k) breakpoints.push_back(*hi[k]);
  return ShearSpec(PiecewisePolynomial(breakpoints, polys), bound);
}

}  // namespace

Json map_to_json(const GradedAlgebra& alg, const MapExpr& map) {
  Json atoms = Json::array();
  for (const auto& atom : map.atoms) {
    std::visit(
        [&](const auto& a) {
          using A = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<A, LeftTranslation>) {
            atoms.push_back({{"type", "translation"}, {"g", rationals_to_json(a.g.coords)}});
          } else if constexpr (std::is_same_v<A, GradedAuto>) {
            atoms.push_back({{"type", "graded"},
                             {"a1", to_json(a.params.a1)},
                             {"a2", to_json(a.params.a2)},
                             {"b", to_json(a.params.b)},
                             {"tau", a.params.conjugated}});
          } else if constexpr (std::is_same_v<A, Shear>) {
            atoms.push_back(shear_to_json(*a.spec));
          } else {
            atoms.push_back({{"type", "tau"}});
          }
        },
        atom);
  }
  return {{"algebra_label", alg.label()}, {"atoms", atoms}};
}

MapExpr map_from_json(const GradedAlgebra& alg, const Json& j) {
  MapExpr map;
  const Json& atoms = field(j, "atoms");
  if (!atoms.is_array()) throw InputError("\"atoms\" must be an array");
  for (const auto& a : atoms) {
    const std::string type = field(a, "type").get<std::string>();
    if (type == "translation") {
      map.atoms.push_back(LeftTranslation{element_from_json(alg, field(a, "g"))});
    } else if (type == "graded") {
      AutoParams p{gaussian_from_json(field(a, "a1")), gaussian_from_json(field(a, "a2")),
                   a.contains("b") ? gaussian_from_json(a.at("b")) : Gaussian(0),
                   a.contains("tau") && a.at("tau").get<bool>()};
      graded_auto_matrix(alg, p);  // validates parameters against the algebra
      map.atoms.push_back(GradedAuto{p});
    } else if (type == "dilation") {
      map.atoms.push_back(GradedAuto{dilation_params(rational_from_json(field(a, "t")))});
    } else if (type == "shear") {
      map.atoms.push_back(Shear{std::make_shared<const ShearSpec>(shear_from_json(a))});
    } else if (type == "tau") {
      map.atoms.push_back(Tau{});
    } else {
      throw InputError("unknown map atom type \"" + type + "\"");
    }
  }
  return map;
}

Polyline polyline_from_json(const GradedAlgebra& alg, const Json& j) {
  Polyline c;
  c.closed = j.contains("closed") && j.at("closed").get<bool>();
  const auto& v1 = alg.layer(1);
  for (const auto& v : field(j, "vertices")) {
    const auto coords = rationals_from_json(v);
    if (coords.size() != v1.size()) {
      throw InputError("curve vertex needs " + std::to_string(v1.size()) + " V_1 coordinates, got " + v.dump());
    }
    Element x(alg.dim());
    for (std::size_t i = 0; i < coords.size(); ++i) x.coords[v1.lo + i] = coords[i];
    c.vertices.push_back(std::move(x));
  }
  return c;
}

std::vector<Gaussian> complex_polygon_from_json(const Json& j, bool& closed) {
  closed = j.contains("closed") && j.at("closed").get<bool>();
  std::vector<Gaussian> out;
  for (const auto& v : field(j, "vertices")) out.push_back(gaussian_from_json(v));
  return out;
}

ConjugatePolynomial conjugate_polynomial_from_json(const Json& j) {
  ConjugatePolynomial g;
  for (const auto& t : field(j, "terms")) {
    const long w = t.contains("w") ? t.at("w").get<long>() : 0;
    const long wbar = t.contains("wbar") ? t.at("wbar").get<long>() : 0;
    if (w < 0 || wbar < 0) throw InputError("exponents must be non-negative");
    g.terms.push_back({static_cast<unsigned>(w), static_cast<unsigned>(wbar), gaussian_from_json(field(t, "c"))});
  }
  return g;
}

Json path_to_json(const GradedAlgebra& alg, const CarnotEstimate& estimate) {
  Json controls = Json::array();
  for (const auto& u : estimate.path.controls) controls.push_back(rationals_to_json(u));
  Json starts = Json::array();
  for (double s : estimate.start_lengths) starts.push_back(std::isfinite(s) ? Json(s) : Json(nullptr));
  return {{"algebra_label", alg.label()},
          {"length", estimate.length},
          {"endpoint_error", estimate.endpoint_error},
          {"segments", estimate.path.segments()},
          {"duration", format_rational(estimate.path.duration)},
          {"best_start", estimate.best_start},
          {"start_lengths", starts},
          {"controls", controls}};
}

}  // namespace carnot
