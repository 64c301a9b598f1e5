#include "carnot/two_step.hpp"

#include <stdexcept>

namespace carnot {

namespace {

void require_two_step(const GradedAlgebra& alg) {
  if (alg.step() != 2) throw std::invalid_argument("two-step forms need a step-2 algebra; got " + alg.label());
}

template <class T>
void require_horizontal(const GradedAlgebra& alg, const BasicElement<T>& x) {
  alg.check(x);
  const auto& v1 = alg.layer(1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!v1.contains(i) && !is_zero(x.coords[i])) throw std::invalid_argument("vector is not in V_1");
  }
}

template <class T>
BasicElement<T> alpha_sum(const GradedAlgebra& alg, const BasicPolyline<T>& c) {
  check_polyline(alg, c);
  BasicElement<T> total(alg.dim());
  for (std::size_t k = 0; k + 1 < c.vertices.size(); ++k) {
    total += bracket(alg, c.vertices[k], c.vertices[k + 1] - c.vertices[k]);
  }
  return total;
}

using GaussPoly = std::vector<Gaussian>;

GaussPoly multiply(const GaussPoly& a, const GaussPoly& b) {
  GaussPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

template <class T>
void check_polyline(const GradedAlgebra& alg, const BasicPolyline<T>& c) {
  require_two_step(alg);
  if (c.vertices.size() < 2) throw std::invalid_argument("polyline needs at least 2 vertices");
  for (const auto& v : c.vertices) require_horizontal(alg, v);
  if (c.closed && !(c.vertices.front() == c.vertices.back())) {
    throw std::invalid_argument("closed polyline must end at its first vertex");
  }
}

template void check_polyline(const GradedAlgebra&, const Polyline&);
template void check_polyline(const GradedAlgebra&, const PolylineF&);

Element omega(const GradedAlgebra& alg, const Element& x, const Element& y) {
  require_two_step(alg);
  require_horizontal(alg, x);
  require_horizontal(alg, y);
  return bracket(alg, x, y);
}

Element alpha_integral(const GradedAlgebra& alg, const Polyline& c) { return alpha_sum(alg, c); }
ElementF alpha_integral(const GradedAlgebra& alg, const PolylineF& c) { return alpha_sum(alg, c); }

LiftResult horizontal_lift(const GradedAlgebra& alg, const Polyline& c, const Element& start_center) {
  check_polyline(alg, c);
  alg.check(start_center);
  for (std::size_t i = alg.layer(1).lo; i < alg.layer(1).hi; ++i) {
    if (sgn(start_center.coords[i]) != 0) throw std::invalid_argument("start center must lie in V_2");
  }
  LiftResult out;
  out.centers.push_back(start_center);
  const Rational half(1, 2);
  for (std::size_t k = 0; k + 1 < c.vertices.size(); ++k) {
    out.centers.push_back(out.centers.back() + half * bracket(alg, c.vertices[k], c.vertices[k + 1] - c.vertices[k]));
  }
  out.defect = out.centers.back() - out.centers.front();
  return out;
}

Gaussian ConjugatePolynomial::operator()(const Gaussian& w) const {
  Gaussian total;
  for (const auto& t : terms) total += t.c * pow(w, t.w) * pow(w.conj(), t.wbar);
  return total;
}

Gaussian morera_defect(const ConjugatePolynomial& g, const std::vector<Gaussian>& vertices, bool closed) {
  if (!closed) throw std::invalid_argument("morera defect needs a closed curve");
  if (vertices.size() < 2) throw std::invalid_argument("polygon needs at least 2 vertices");
  if (!(vertices.front() == vertices.back())) throw std::invalid_argument("closed polygon must end at its first vertex");
  Gaussian total;
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    // w(t) = A + tB on [0, 1], dw = B dt; integrate the polynomial in t exactly.
    const Gaussian& a = vertices[k];
    const Gaussian b = vertices[k + 1] - vertices[k];
    GaussPoly integrand{Gaussian(0)};
    for (const auto& term : g.terms) {
      GaussPoly p{term.c};
      for (unsigned j = 0; j < term.w; ++j) p = multiply(p, {a, b});
      for (unsigned j = 0; j < term.wbar; ++j) p = multiply(p, {a.conj(), b.conj()});
      if (p.size() > integrand.size()) integrand.resize(p.size());
      for (std::size_t m = 0; m < p.size(); ++m) integrand[m] += p[m];
    }
    Gaussian segment;
    for (std::size_t m = 0; m < integrand.size(); ++m) {
      Rational inv(1, static_cast<long>(m + 1));
      segment += integrand[m] * Gaussian(inv);
    }
    total += segment * b;
  }
  return total;
}

}  // namespace carnot
