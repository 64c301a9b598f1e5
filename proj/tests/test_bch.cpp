#include "doctest.h"

#include "carnot/bch.hpp"
#include "carnot/random.hpp"

using namespace carnot;

namespace {

// exp(-t ad e_1) Y as a finite sum; ad e_1 is nilpotent.
Element exp_minus_t_ad_e1(const GradedAlgebra& alg, const Rational& t, const Element& y) {
  Element term = y;
  Element sum = y;
  for (int k = 1; k <= alg.step(); ++k) {
    term = bracket(alg, alg.basis(0), term);
    term *= Rational(-t) / Rational(k);
    sum += term;
  }
  return sum;
}

Element random_ideal_element(const GradedAlgebra& alg, Rng& rng) {
  Element y = random_element(alg, rng);
  y.coords[0] = 0;
  if (alg.complex_structure()) y.coords[1] = 0;
  return y;
}

std::vector<GradedAlgebra> small_algebras() {
  return {GradedAlgebra::filiform_real(2), GradedAlgebra::filiform_real(3), GradedAlgebra::filiform_real(4),
          GradedAlgebra::filiform_real(5), GradedAlgebra::filiform_complex_as_real(3),
          GradedAlgebra::complex_heisenberg_as_real(1)};
}

}  // namespace

TEST_CASE("Heisenberg product e_1 * e_2 = e_1 + e_2 + e_3/2") {
  const auto h = GradedAlgebra::filiform_real(2);
  const Element expected = h.basis(0) + h.basis(1) + Rational(1, 2) * h.basis(2);
  CHECK(dynkin_product(h, h.basis(0), h.basis(1)) == expected);
}

TEST_CASE("identity and inverse") {
  Rng rng(1);
  for (const auto& alg : small_algebras()) {
    for (int trial = 0; trial < 20; ++trial) {
      const Element x = random_element(alg, rng);
      CHECK(dynkin_product(alg, x, alg.zero()) == x);
      CHECK(dynkin_product(alg, alg.zero(), x) == x);
      CHECK(dynkin_product(alg, x, inverse(x)).is_zero());
    }
  }
}

TEST_CASE("associativity on random rational triples") {
  Rng rng(2);
  for (const auto& alg : small_algebras()) {
    CAPTURE(alg.label());
    for (int trial = 0; trial < 25; ++trial) {
      const Element x = random_element(alg, rng), y = random_element(alg, rng), z = random_element(alg, rng);
      CHECK(dynkin_product(alg, dynkin_product(alg, x, y), z) == dynkin_product(alg, x, dynkin_product(alg, y, z)));
    }
  }
}

TEST_CASE("Dynkin series reproduces the displayed low-order expansion") {
  // X*Y = X + Y + [X,Y]/2 + [X,[X,Y]]/12 - [Y,[X,Y]]/12 - [Y,[X,[X,Y]]]/48 - [X,[Y,[X,Y]]]/48 + (degree >= 5)
  Rng rng(9);
  for (const auto& alg : {GradedAlgebra::filiform_real(4), GradedAlgebra::filiform_complex_as_real(4),
                          GradedAlgebra::complex_heisenberg_as_real(1)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Element x = random_element(alg, rng), y = random_element(alg, rng);
      auto br = [&](const Element& a, const Element& b) { return bracket(alg, a, b); };
      const Element xy = br(x, y);
      const Element expected = x + y + Rational(1, 2) * xy + Rational(1, 12) * br(x, xy) -
                               Rational(1, 12) * br(y, xy) - Rational(1, 48) * br(y, br(x, xy)) -
                               Rational(1, 48) * br(x, br(y, xy));
      CHECK(dynkin_product(alg, x, y) == expected);
    }
  }
}

TEST_CASE("series word coefficients at degree 2") {
  const auto series = BchSeries::truncated_at(4);
  CHECK(series->coefficient({0}) == 1);
  CHECK(series->coefficient({1}) == 1);
  // [X,Y]/2 splits as (1/4) ad(X)Y - (1/4) ad(Y)X.
  CHECK(series->coefficient({0, 1}) == Rational(1, 4));
  CHECK(series->coefficient({1, 0}) == Rational(-1, 4));
  CHECK(series->coefficient({0, 0}) == 0);
}

TEST_CASE("BCH tail coefficients match the z/(1-e^{-z}) expansion") {
  // Frozen from tests/oracles/derive_values.py (sympy series, independent of the Dynkin code).
  const std::vector<Rational> expected{Rational(1, 12), Rational(0), Rational(-1, 720), Rational(0),
                                       Rational(1, 30240), Rational(0)};
  const auto& c = bch_coefficients(8);
  REQUIRE(c.c.size() == 6);
  for (std::size_t j = 0; j < 6; ++j) CHECK(c.c[j] == expected[j]);
  CHECK(bch_coefficients(3).at(2) == Rational(1, 12));
  // c_3 from e_1 * e_2 on F_R^4
  CHECK(bch_coefficients(4).at(3) == 0);
  CHECK(bch_coefficients(2).c.empty());
}

TEST_CASE("F_R^3: e_1 * e_2 = e_1 + e_2 + e_3/2 + e_4/12") {
  const auto f3 = GradedAlgebra::filiform_real(3);
  const Element expected = f3.basis(0) + f3.basis(1) + Rational(1, 2) * f3.basis(2) + Rational(1, 12) * f3.basis(3);
  CHECK(abelian_tail_product(f3, f3.basis(0), f3.basis(1)) == expected);
  CHECK(dynkin_product(f3, f3.basis(0), f3.basis(1)) == expected);
}

TEST_CASE("abelian tail closed forms agree with the Dynkin series") {
  Rng rng(4);
  for (const auto& alg : {GradedAlgebra::filiform_real(3), GradedAlgebra::filiform_real(5),
                          GradedAlgebra::filiform_real(7), GradedAlgebra::filiform_complex_as_real(4)}) {
    CAPTURE(alg.label());
    for (int trial = 0; trial < 40; ++trial) {
      const Element x = random_element(alg, rng);
      const Element y = random_ideal_element(alg, rng);
      CHECK(abelian_tail_product(alg, x, y) == dynkin_product(alg, x, y));
      CHECK(abelian_tail_product_reversed(alg, y, x) == dynkin_product(alg, y, x));
    }
  }
}

TEST_CASE("abelian tail rejects inputs outside its domain") {
  const auto f3 = GradedAlgebra::filiform_real(3);
  CHECK_THROWS_AS(abelian_tail_product(f3, f3.basis(1), f3.basis(0)), std::invalid_argument);
  const auto hc = GradedAlgebra::complex_heisenberg_as_real(1);
  CHECK_THROWS_AS(abelian_tail_product(hc, hc.basis(0), hc.basis(2)), std::invalid_argument);
  const auto fc = GradedAlgebra::filiform_complex_as_real(3);
  CHECK_THROWS_AS(abelian_tail_product(fc, fc.basis(0), fc.basis(1)), std::invalid_argument);
}

TEST_CASE("horizontal conjugation") {
  const auto f3 = GradedAlgebra::filiform_real(3);
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const Element y = random_ideal_element(f3, rng);
    const Rational t = random_rational(rng);
    const Element got = conjugate_by_horizontal(f3, t, y);
    // x'_3 = x_3 - t x_2, x'_4 = x_4 - t x_3 + t^2 x_2 / 2 (sympy oracle).
    CHECK(got[1] == y[1]);
    CHECK(got[2] == y[2] - t * y[1]);
    CHECK(got[3] == y[3] - t * y[2] + t * t * y[1] / 2);
    CHECK(got == exp_minus_t_ad_e1(f3, t, y));
  }
  const Element y = random_ideal_element(f3, rng);
  CHECK(conjugate_by_horizontal(f3, Rational(0), y) == y);
  CHECK_THROWS_AS(conjugate_by_horizontal(f3, Rational(1), f3.basis(0)), std::invalid_argument);
  CHECK_THROWS_AS(conjugate_by_horizontal(f3, Gaussian(0, 1), y), std::invalid_argument);

  for (int n = 4; n <= 6; ++n) {
    const auto alg = GradedAlgebra::filiform_real(n);
    for (int trial = 0; trial < 10; ++trial) {
      const Element v = random_ideal_element(alg, rng);
      const Rational t = random_rational(rng);
      CHECK(conjugate_by_horizontal(alg, t, v) == exp_minus_t_ad_e1(alg, t, v));
    }
  }
}

TEST_CASE("horizontal conjugation is additive on the abelian ideal") {
  const auto f5 = GradedAlgebra::filiform_real(5);
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Element a = random_ideal_element(f5, rng), b = random_ideal_element(f5, rng);
    const Rational t = random_rational(rng);
    CHECK(dynkin_product(f5, a, b) == a + b);
    CHECK(conjugate_by_horizontal(f5, t, a + b) ==
          conjugate_by_horizontal(f5, t, a) + conjugate_by_horizontal(f5, t, b));
  }
}

TEST_CASE("float product agrees with the exact product") {
  Rng rng(10);
  const auto f4 = GradedAlgebra::filiform_real(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Element x = random_element(f4, rng), y = random_element(f4, rng);
    const ElementF exact = to_float(dynkin_product(f4, x, y));
    const ElementF approx = product(f4, to_float(x), to_float(y));
    for (std::size_t i = 0; i < f4.dim(); ++i) CHECK(approx[i] == doctest::Approx(exact[i]).epsilon(1e-12));
  }
}

TEST_CASE("truncation limit is enforced") {
  const auto f9 = GradedAlgebra::filiform_real(9);
  CHECK_THROWS_AS(dynkin_product(f9, f9.basis(0), f9.basis(1)), std::invalid_argument);
  CHECK_NOTHROW(dynkin_product(f9, f9.basis(0), f9.basis(1), 9));
}
