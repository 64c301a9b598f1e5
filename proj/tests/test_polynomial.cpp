#include "doctest.h"

#include "carnot/polynomial.hpp"

using namespace carnot;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

Polynomial poly(std::initializer_list<Rational> c) { return Polynomial(std::vector<Rational>(c)); }

}  // namespace

TEST_CASE("polynomial arithmetic and calculus") {
  const Polynomial p = poly({q(1), q(-2), q(3)});
  CHECK(p.degree() == 2);
  CHECK(p(q(2)) == q(9));
  CHECK(p.derivative() == poly({q(-2), q(6)}));
  CHECK(p.antiderivative().derivative() == p);
  CHECK(p.antiderivative()(q(0)) == 0);
  CHECK((p - p).is_zero());
  CHECK((p * p)(q(3)) == p(q(3)) * p(q(3)));
  CHECK(p.shifted(q(1, 2))(q(3, 2)) == p(q(2)));
  CHECK(Polynomial().degree() == -1);
}

TEST_CASE("lagrange interpolation recovers a cubic") {
  const Polynomial cubic = poly({q(1, 3), q(0), q(-5, 2), q(7)});
  std::vector<std::pair<Rational, Rational>> pts;
  for (long x : {-2L, -1L, 1L, 4L}) pts.emplace_back(q(x), cubic(q(x)));
  CHECK(Polynomial::interpolate(pts) == cubic);
}

TEST_CASE("piecewise continuity is validated") {
  CHECK_THROWS_AS(PiecewisePolynomial({q(0)}, {poly({q(0)}), poly({q(1)})}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewisePolynomial({q(1), q(0)}, {poly({}), poly({}), poly({})}), std::invalid_argument);
  const PiecewisePolynomial abs({q(0)}, {poly({q(0), q(-1)}), poly({q(0), q(1)})});
  CHECK(abs(q(-3)) == 3);
  CHECK(abs(q(5, 2)) == q(5, 2));
  CHECK_FALSE(abs.derivative_at(q(0)).has_value());
  CHECK(*abs.derivative_at(q(-1)) == -1);
  CHECK(abs.is_breakpoint(q(0)));
}

TEST_CASE("shear antiderivatives of the identity") {
  // h_2 = h, h_{j+1} = -integral_0^x h_j: x, -x^2/2, x^3/6.
  const PiecewisePolynomial h2(poly({q(0), q(1)}));
  const PiecewisePolynomial h3 = -h2.integral_from_zero();
  const PiecewisePolynomial h4 = -h3.integral_from_zero();
  CHECK(h3 == PiecewisePolynomial(poly({q(0), q(0), q(-1, 2)})));
  CHECK(h4 == PiecewisePolynomial(poly({q(0), q(0), q(0), q(1, 6)})));
}

TEST_CASE("integral from zero is continuous across breakpoints") {
  const auto h = PiecewisePolynomial::linear_interpolation({q(-1), q(0), q(2)}, {q(0), q(1), q(-1)});
  const auto f = h.integral_from_zero();
  CHECK(f(q(0)) == 0);
  CHECK(f(q(2)) == 0);
  CHECK(f(q(-1)) == q(-1, 2));
  // constant extension beyond the samples
  CHECK(f(q(3)) == q(-1));
  CHECK(f(q(-2)) == q(-1, 2));
}

TEST_CASE("lipschitz bounds") {
  const auto tent = PiecewisePolynomial::linear_interpolation({q(-1), q(0), q(1)}, {q(0), q(2), q(0)});
  const auto bound = tent.lipschitz_upper_bound();
  REQUIRE(bound.has_value());
  CHECK(*bound >= 2);
  CHECK(tent.certify_lipschitz(q(2)));
  CHECK_FALSE(tent.certify_lipschitz(q(19, 10)));
  CHECK_FALSE(PiecewisePolynomial(poly({q(0), q(0), q(1)})).lipschitz_upper_bound().has_value());
  const auto bump = PiecewisePolynomial::from_bounded_pieces({q(0)}, {q(1)}, {poly({q(0), q(0), q(1)})});
  CHECK(bump.certify_lipschitz(q(2)));
  CHECK_FALSE(bump.certify_lipschitz(q(199, 100)));
  CHECK(abs_bound_on_interval(poly({q(0), q(0), q(1)}), q(-1), q(1)) >= 1);
}
