#include "doctest.h"

#include "carnot/metric.hpp"
#include "carnot/random.hpp"

#include <cmath>

using namespace carnot;

TEST_CASE("homogeneous norm on F_R^3") {
  const auto alg = GradedAlgebra::filiform_real(3);
  Element x(alg.dim());
  x.coords = {Rational(3), Rational(4), Rational(-8), Rational(27)};
  CHECK(homogeneous_norm(alg, x) == doctest::Approx(5.0 + std::sqrt(8.0) + 3.0));
}

TEST_CASE("homogeneous distance properties") {
  Rng rng(derive_seed(7, 1));
  for (const auto& alg : {GradedAlgebra::filiform_real(3), GradedAlgebra::filiform_complex_as_real(3),
                          GradedAlgebra::complex_heisenberg_as_real(1)}) {
    for (int trial = 0; trial < 40; ++trial) {
      const Element p = random_element(alg, rng), q = random_element(alg, rng), g = random_element(alg, rng);
      const double d = homogeneous_distance(alg, p, q);
      CHECK(d >= 0.0);
      CHECK(homogeneous_distance(alg, p, p) == 0.0);
      CHECK(homogeneous_distance(alg, q, p) == doctest::Approx(d).epsilon(1e-12));
      CHECK(homogeneous_distance(alg, dynkin_product(alg, g, p), dynkin_product(alg, g, q)) ==
            doctest::Approx(d).epsilon(1e-12));
      const Rational t = random_nonzero_rational(rng) * random_nonzero_rational(rng);
      const Rational s = t < 0 ? Rational(-t) : t;
      CHECK(homogeneous_distance(alg, dilate(alg, s, p), dilate(alg, s, q)) ==
            doctest::Approx(s.get_d() * d).epsilon(1e-12));
    }
  }
}

TEST_CASE("path displacement of a straight segment") {
  const auto alg = GradedAlgebra::filiform_real(3);
  HorizontalPath path;
  path.controls.assign(8, {Rational(2), Rational(0)});
  Element expected(alg.dim());
  expected.coords[0] = 2;
  CHECK(path_displacement(alg, path) == expected);
  CHECK(path.length() == doctest::Approx(2.0));
  CHECK(path_vertices(alg, alg.zero(), path).size() == 9);
}

TEST_CASE("carnot distance upper bound on F_R^3") {
  const auto alg = GradedAlgebra::filiform_real(3);
  CarnotOptions opts;
  opts.segments = 32;
  opts.starts = 2;
  const Element o = alg.zero();

  SUBCASE("horizontal target is a straight segment") {
    const auto est = carnot_distance_upper(alg, o, alg.basis(0), opts);
    CHECK(est.endpoint_error <= 1e-8);
    CHECK(est.length == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(est.length >= homogeneous_distance(alg, o, alg.basis(0)) - 1e-9);
  }
  SUBCASE("identity target") {
    const auto est = carnot_distance_upper(alg, o, o, opts);
    CHECK(est.length == 0.0);
  }
  SUBCASE("vertical target is reached exactly and scales with dilation") {
    Element z = alg.basis(2);
    const auto est = carnot_distance_upper(alg, o, z, opts);
    CHECK(est.endpoint_error <= 1e-8);
    CHECK(homogeneous_distance(alg, path_displacement(alg, est.path), z) <= 1e-8);
    // area 1 enclosed by a circle of perimeter sqrt(4 pi) is optimal in the Heisenberg quotient
    CHECK(est.length >= 2.0 * std::sqrt(M_PI) - 1e-6);
    CHECK(est.length <= 2.0 * std::sqrt(M_PI) * 1.02);
    const auto scaled = carnot_distance_upper(alg, o, dilate(alg, Rational(4), z), opts);
    CHECK(scaled.length / est.length == doctest::Approx(4.0).epsilon(0.02));
  }
}
