#pragma once

#include "carnot/metric.hpp"
#include "carnot/qc_maps.hpp"
#include "carnot/two_step.hpp"

#include <json.hpp>

#include <string>

namespace carnot {

using Json = nlohmann::ordered_json;

/// Thrown for malformed input documents.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "p/q" string, integer, or float (converted exactly).
Rational rational_from_json(const Json& j);
/// Rational value, or [re, im].
Gaussian gaussian_from_json(const Json& j);
Json to_json(const Gaussian& z);

Json algebra_to_json(const GradedAlgebra& alg);
/// {"label": "FiliformReal(3)"} or a full description with dim, layers and brackets.
GradedAlgebra algebra_from_json(const Json& j);
/// A label such as FiliformReal(3), or the path of a JSON algebra file.
GradedAlgebra load_algebra(const std::string& spec);

Json element_to_json(const GradedAlgebra& alg, const Element& x);
/// {"algebra_label": ..., "coords": [...]} or a bare coordinate array.
Element element_from_json(const GradedAlgebra& alg, const Json& j);
/// Comma separated coordinates, or a JSON document (inline or a file path).
Element parse_element(const GradedAlgebra& alg, const std::string& text);

Json map_to_json(const GradedAlgebra& alg, const MapExpr& map);
MapExpr map_from_json(const GradedAlgebra& alg, const Json& j);

/// {"closed": bool, "vertices": [[V_1 coordinates], ...]}.
Polyline polyline_from_json(const GradedAlgebra& alg, const Json& j);
/// Same document with [re, im] vertices in the w_1-plane.
std::vector<Gaussian> complex_polygon_from_json(const Json& j, bool& closed);
/// {"terms": [{"w": j, "wbar": k, "c": value}]}.
ConjugatePolynomial conjugate_polynomial_from_json(const Json& j);

Json path_to_json(const GradedAlgebra& alg, const CarnotEstimate& estimate);

/// Reads a file (or "-" for stdin) and parses it as JSON.
Json read_json_file(const std::string& path);

}  // namespace carnot
