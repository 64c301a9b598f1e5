#pragma once

#include "carnot/algebra.hpp"

#include <vector>

namespace carnot {

/// Polygonal curve in V_1; vertices are full elements with zero components outside V_1.
template <class T>
struct BasicPolyline {
  std::vector<BasicElement<T>> vertices;
  bool closed = false;
};
using Polyline = BasicPolyline<Rational>;
using PolylineF = BasicPolyline<double>;

/// Throws std::invalid_argument unless alg has step 2, the curve has >= 2 vertices in V_1,
/// and a closed curve ends where it starts.
template <class T>
void check_polyline(const GradedAlgebra& alg, const BasicPolyline<T>& c);

/// omega(X, Y) = [X, Y] for X, Y in V_1.
Element omega(const GradedAlgebra& alg, const Element& x, const Element& y);

/// Sum over segments A -> A + B of [A, B].
Element alpha_integral(const GradedAlgebra& alg, const Polyline& c);
ElementF alpha_integral(const GradedAlgebra& alg, const PolylineF& c);

struct LiftResult {
  /// V_2 component at each vertex.
  std::vector<Element> centers;
  Element defect;
};

/// Lift with c_2' = 1/2 [c_1, c_1'], starting from the V_2 element `start_center`.
LiftResult horizontal_lift(const GradedAlgebra& alg, const Polyline& c, const Element& start_center);

/// g(w) = sum c_{jk} w^j conj(w)^k.
struct ConjugatePolynomial {
  struct Term {
    unsigned w = 0;
    unsigned wbar = 0;
    Gaussian c;
  };
  std::vector<Term> terms;

  Gaussian operator()(const Gaussian& w) const;
};

/// Closed contour integral of g(w) dw along the polygon through `vertices`, exact per segment.
/// Throws std::invalid_argument for an open polygon.
Gaussian morera_defect(const ConjugatePolynomial& g, const std::vector<Gaussian>& vertices, bool closed = true);

}  // namespace carnot
