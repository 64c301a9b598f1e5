#include "doctest.h"

#include "carnot/bch.hpp"
#include "carnot/metric.hpp"
#include "carnot/qc_maps.hpp"
#include "carnot/random.hpp"

#include <cmath>

using namespace carnot;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

std::shared_ptr<const ShearSpec> identity_profile_shear() {
  return std::make_shared<const ShearSpec>(PiecewisePolynomial(Polynomial({q(0), q(1)})), q(1));
}

Gaussian random_gaussian(Rng& rng, bool complex) {
  return complex ? Gaussian(random_rational(rng), random_rational(rng)) : Gaussian(random_rational(rng));
}

AutoParams random_params(Rng& rng, bool complex) {
  AutoParams p;
  do p.a1 = random_gaussian(rng, complex); while (p.a1.is_zero());
  do p.a2 = random_gaussian(rng, complex); while (p.a2.is_zero());
  p.b = random_gaussian(rng, complex);
  p.conjugated = complex && (rng() & 1U);
  return p;
}

MapExpr random_map(const GradedAlgebra& alg, Rng& rng) {
  MapExpr m;
  const bool real = alg.kind() == AlgebraKind::FiliformReal;
  for (int k = 0; k < 4; ++k) {
    switch (rng() % 4) {
      case 0: m.atoms.push_back(LeftTranslation{random_element(alg, rng)}); break;
      case 1: m.atoms.push_back(GradedAuto{random_params(rng, !real)}); break;
      case 2:
        if (real) m.atoms.push_back(Shear{std::make_shared<const ShearSpec>(random_piecewise_polynomial(rng))});
        break;
      default:
        if (!real) m.atoms.push_back(Tau{});
    }
  }
  return m;
}

}  // namespace

TEST_CASE("shear of the identity profile on F_R^3") {
  const auto alg = GradedAlgebra::filiform_real(3);
  const MapExpr shear{{Shear{identity_profile_shear()}}};
  Element tail(alg.dim());
  tail.coords = {q(0), q(1), q(-1, 2), q(1, 6)};
  CHECK(apply(alg, shear, alg.basis(0)) == dynkin_product(alg, alg.basis(0), tail));
  // for h(x) = x the shear is the linear automorphism h_{1,1,1}
  const Matrix<Rational> h111 = graded_auto_matrix(alg, AutoParams{1, 1, 1, false});
  Rng rng(derive_seed(3, 0));
  for (int i = 0; i < 50; ++i) {
    const Element p = random_element(alg, rng);
    CHECK(apply(alg, shear, p) == Element(h111 * p.coords));
  }
}

TEST_CASE("trivial maps") {
  const auto alg = GradedAlgebra::filiform_real(4);
  Rng rng(derive_seed(3, 1));
  const Element p = random_element(alg, rng), g = random_element(alg, rng);
  const MapExpr zero_shear{{Shear{std::make_shared<const ShearSpec>(PiecewisePolynomial())}}};
  CHECK(apply(alg, zero_shear, p) == p);
  CHECK(apply(alg, MapExpr{{LeftTranslation{g}}}, alg.zero()) == g);
  CHECK(apply(alg, MapExpr{}, p) == p);
  CHECK(invert(MapExpr{}).atoms.empty());
}

TEST_CASE("inverse parameters compose to the identity") {
  Rng rng(derive_seed(3, 2));
  for (const auto& alg : {GradedAlgebra::filiform_real(3), GradedAlgebra::filiform_real(5),
                          GradedAlgebra::filiform_complex_as_real(3)}) {
    for (int i = 0; i < 50; ++i) {
      const AutoParams p = random_params(rng, alg.complex_structure());
      const auto m = graded_auto_matrix(alg, p) * graded_auto_matrix(alg, inverse_params(p));
      CHECK(m == Matrix<Rational>::identity(alg.dim()));
    }
  }
  const AutoParams inv = inverse_params(AutoParams{2, 3, 5, false});
  CHECK(inv == AutoParams{q(1, 2), q(1, 3), q(-5, 6), false});
}

TEST_CASE("inverting a shear negates its profile") {
  const auto spec = identity_profile_shear();
  const auto inv = std::get<Shear>(invert(MapAtom{Shear{spec}}));
  CHECK(inv.spec->profile() == -spec->profile());
  CHECK(inv.spec->antiderivative(4) == -spec->antiderivative(4));
}

TEST_CASE("round trip over all atom types") {
  Rng rng(derive_seed(3, 3));
  for (const auto& alg : {GradedAlgebra::filiform_real(3), GradedAlgebra::filiform_real(5),
                          GradedAlgebra::filiform_complex_as_real(3)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const MapExpr m = random_map(alg, rng);
      const MapExpr inv = invert(m);
      for (int i = 0; i < 50; ++i) {
        const Element p = random_element(alg, rng);
        CHECK(apply(alg, inv, apply(alg, m, p)) == p);
      }
    }
  }
}

TEST_CASE("shear preserves cosets of the e2 line") {
  const auto alg = GradedAlgebra::filiform_real(4);
  Rng rng(derive_seed(3, 4));
  for (int i = 0; i < 40; ++i) {
    const ShearSpec spec(random_piecewise_polynomial(rng));
    const Element p = random_element(alg, rng);
    const Element te2 = random_rational(rng) * alg.basis(1);
    const Element image = apply_shear(alg, spec, p);
    CHECK(image.coords[0] == p.coords[0]);
    CHECK(apply_shear(alg, spec, dynkin_product(alg, p, te2)) == dynkin_product(alg, image, te2));
  }
}

TEST_CASE("shear spec validation") {
  CHECK_THROWS_AS(ShearSpec(PiecewisePolynomial(Polynomial({q(0), q(0), q(1)}))), std::invalid_argument);
  CHECK_THROWS_AS(ShearSpec(PiecewisePolynomial(Polynomial({q(0), q(2)})), q(1)), std::invalid_argument);
  const auto tab = ShearSpec::from_samples({q(0), q(1), q(3)}, {q(0), q(1), q(0)});
  CHECK(tab.lipschitz_bound() >= 1);
  CHECK(tab.antiderivative(3)(q(1)) == q(-1, 2));
  const auto alg = GradedAlgebra::filiform_complex_as_real(3);
  CHECK_THROWS_AS(apply_shear(alg, tab, alg.zero()), std::invalid_argument);
  CHECK_THROWS_AS(apply(GradedAlgebra::filiform_real(3), Tau{}, GradedAlgebra::filiform_real(3).zero()),
                  std::invalid_argument);
}

TEST_CASE("classification examples") {
  const auto alg = GradedAlgebra::filiform_real(3);
  const auto m = graded_auto_matrix(alg, AutoParams{2, 3, 0, false});
  CHECK(m(3, 3) == 12);
  const auto accepted = classify_graded_automorphism(alg, m);
  REQUIRE(std::holds_alternative<AutoParams>(accepted));
  CHECK(std::get<AutoParams>(accepted) == AutoParams{2, 3, 0, false});
  CHECK(std::get<AutoParams>(classify_graded_automorphism(alg, Matrix<Rational>::identity(4))) ==
        AutoParams{1, 1, 0, false});
  Matrix<Rational> swap = Matrix<Rational>::identity(4);
  swap(0, 0) = swap(1, 1) = 0;
  swap(0, 1) = swap(1, 0) = 1;
  const auto rejected = classify_graded_automorphism(alg, swap);
  REQUIRE(std::holds_alternative<Rejection>(rejected));
  CHECK(std::get<Rejection>(rejected).condition == "e2-invariance");
  Matrix<Rational> leak = Matrix<Rational>::identity(4);
  leak(2, 0) = 1;
  CHECK(std::get<Rejection>(classify_graded_automorphism(alg, leak)).condition == "layer");
  Matrix<Rational> skew = Matrix<Rational>::identity(4);
  skew(3, 3) = 2;
  CHECK(std::get<Rejection>(classify_graded_automorphism(alg, skew)).condition == "bracket");
  CHECK_THROWS_AS(classify_graded_automorphism(GradedAlgebra::filiform_real(2), Matrix<Rational>::identity(3)),
                  std::invalid_argument);
}

TEST_CASE("tau is an anti-linear graded automorphism") {
  const auto alg = GradedAlgebra::filiform_complex_as_real(3);
  Rng rng(derive_seed(3, 5));
  const Element p = random_element(alg, rng);
  CHECK(apply(alg, MapExpr{{Tau{}, Tau{}}}, p) == p);
  const auto t = known_differential(alg, MapExpr{{Tau{}}}, p);
  REQUIRE(t.has_value());
  const auto cls = classify_graded_automorphism(alg, *t);
  REQUIRE(std::holds_alternative<AutoParams>(cls));
  CHECK(std::get<AutoParams>(cls) == AutoParams{1, 1, 0, true});
  const auto m = graded_auto_matrix(alg, AutoParams{Gaussian(1, 2), Gaussian(3), Gaussian(0, 1), true});
  CHECK(std::get<AutoParams>(classify_graded_automorphism(alg, m)) ==
        AutoParams{Gaussian(1, 2), Gaussian(3), Gaussian(0, 1), true});
}

TEST_CASE("graded automorphisms compose") {
  Rng rng(derive_seed(3, 6));
  for (const auto& alg : {GradedAlgebra::filiform_real(4), GradedAlgebra::filiform_complex_as_real(3)}) {
    for (int i = 0; i < 40; ++i) {
      const AutoParams p1 = random_params(rng, alg.complex_structure());
      const AutoParams p2 = random_params(rng, alg.complex_structure());
      const auto cls = classify_graded_automorphism(alg, graded_auto_matrix(alg, p1) * graded_auto_matrix(alg, p2));
      REQUIRE(std::holds_alternative<AutoParams>(cls));
      const auto& got = std::get<AutoParams>(cls);
      CHECK(got.conjugated == (p1.conjugated != p2.conjugated));
      CHECK(got.a1 == (p2.conjugated ? p1.a1.conj() : p1.a1) * p2.a1);
    }
  }
}

TEST_CASE("float classification tolerance") {
  const auto alg = GradedAlgebra::filiform_real(3);
  auto m = to_double(graded_auto_matrix(alg, AutoParams{2, 3, 1, false}));
  m(3, 3) += 1e-9;
  const auto ok = classify_graded_automorphism(alg, m);
  REQUIRE(std::holds_alternative<AutoParamsF>(ok));
  CHECK(std::get<AutoParamsF>(ok).a2.real() == doctest::Approx(3.0));
  m(3, 3) += 1e-3;
  CHECK(std::holds_alternative<Rejection>(classify_graded_automorphism(alg, m)));
}

TEST_CASE("pansu estimate of exactly homogeneous maps") {
  const auto alg = GradedAlgebra::filiform_real(3);
  Rng rng(derive_seed(3, 7));
  const Element p = random_element(alg, rng);
  const auto translation = pansu_differential_estimate(alg, MapExpr{{LeftTranslation{random_element(alg, rng)}}}, p);
  CHECK(translation.differential == Matrix<Rational>::identity(alg.dim()));
  for (const auto& row : translation.residuals)
    for (double r : row) CHECK(r == 0.0);
  const AutoParams params{2, q(-1, 3), q(5, 2), false};
  const auto graded = pansu_differential_estimate(alg, MapExpr{{GradedAuto{params}}}, p);
  CHECK(graded.differential == graded_auto_matrix(alg, params));
  CHECK(graded.monotone);
  REQUIRE(std::holds_alternative<AutoParamsF>(graded.classification));
}

TEST_CASE("pansu estimate of a shear matches the tangent automorphism") {
  const auto alg = GradedAlgebra::filiform_real(4);
  // h(x) = x^3 / 3 - x on [-2, 2], constant outside
  const auto h = PiecewisePolynomial::from_bounded_pieces({q(-2)}, {q(2)}, {Polynomial({q(0), q(-1), q(0), q(1, 3)})});
  const MapExpr m{{Shear{std::make_shared<const ShearSpec>(h)}}};
  Element p(alg.dim());
  p.coords = {q(1, 2), q(1), q(-2), q(1, 3), q(3)};
  const auto est = pansu_differential_estimate(alg, m, p);
  CHECK_FALSE(est.at_breakpoint);
  CHECK(est.monotone);
  const auto expected = to_double(graded_auto_matrix(alg, AutoParams{1, 1, Gaussian(q(-3, 4)), false}));
  const auto got = to_double(est.differential);
  for (std::size_t r = 0; r < alg.dim(); ++r)
    for (std::size_t c = 0; c < alg.dim(); ++c) CHECK(std::abs(got(r, c) - expected(r, c)) <= 1e-6);
  // the image of the horizontal line stays horizontal: delta_t(e1) -> e1 + h'(x1) e2
  const Element image = apply(alg, m, p);
  const Element d = pansu_quotient(alg, m, p, image, q(1, 100000), alg.basis(0));
  CHECK(std::abs(d.coords[1].get_d() + 0.75) < 1e-4);
  CHECK(std::abs(d.coords[2].get_d()) < 1e-4);
  REQUIRE(std::holds_alternative<AutoParamsF>(est.classification));

  Element kink(alg.dim());
  kink.coords[0] = 2;
  CHECK(pansu_differential_estimate(alg, m, kink).at_breakpoint);
  CHECK_FALSE(known_differential(alg, m, kink).has_value());
}

TEST_CASE("pansu chain rule") {
  const auto alg = GradedAlgebra::filiform_real(3);
  Rng rng(derive_seed(3, 8));
  for (int trial = 0; trial < 5; ++trial) {
    MapExpr m;
    m.atoms.push_back(LeftTranslation{random_element(alg, rng)});
    m.atoms.push_back(Shear{std::make_shared<const ShearSpec>(random_piecewise_polynomial(rng))});
    m.atoms.push_back(GradedAuto{random_params(rng, false)});
    const Element p = random_element(alg, rng);
    const auto known = known_differential(alg, m, p);
    if (!known) continue;
    PansuOptions opts;
    opts.scales = {q(1, 10), q(1, 100), q(1, 1000)};
    const auto est = pansu_differential_estimate(alg, m, p, opts);
    if (est.at_breakpoint) continue;
    const auto a = to_double(*known), b = to_double(est.differential);
    double err = 0.0, scale = 1.0;
    for (std::size_t r = 0; r < alg.dim(); ++r)
      for (std::size_t c = 0; c < alg.dim(); ++c) {
        err = std::max(err, std::abs(a(r, c) - b(r, c)));
        scale = std::max(scale, std::abs(a(r, c)));
      }
    CHECK(err <= 1e-4 * scale);
  }
}

TEST_CASE("pansu input validation") {
  const auto alg = GradedAlgebra::filiform_real(3);
  PansuOptions opts;
  opts.scales = {q(1, 100), q(1, 10)};
  CHECK_THROWS_AS(pansu_differential_estimate(alg, MapExpr{}, alg.zero(), opts), std::invalid_argument);
  PansuOptions few;
  few.directions = {alg.basis(0), alg.basis(1)};
  CHECK_THROWS_AS(pansu_differential_estimate(alg, MapExpr{}, alg.zero(), few), std::invalid_argument);
}

TEST_CASE("distortion of similarities") {
  const auto alg = GradedAlgebra::filiform_real(3);
  DistortionOptions opts;
  opts.pairs = 300;
  opts.shard_size = 64;
  for (const Rational& t : {q(1, 4), q(3)}) {
    const auto stats = distortion_sample(alg, MapExpr{{GradedAuto{dilation_params(t)}}}, opts);
    for (const auto& pair : stats.pairs) CHECK(std::abs(pair.ratio - t.get_d()) <= 1e-12 * t.get_d());
  }
  Rng rng(derive_seed(3, 9));
  const auto stats = distortion_sample(alg, MapExpr{{LeftTranslation{random_element(alg, rng)}}}, opts);
  CHECK(std::abs(stats.min_ratio - 1.0) <= 1e-12);
  CHECK(std::abs(stats.max_ratio - 1.0) <= 1e-12);
}

TEST_CASE("distortion sampling is deterministic across worker counts") {
  const auto alg = GradedAlgebra::filiform_real(3);
  const MapExpr shear{{Shear{identity_profile_shear()}}};
  DistortionOptions opts;
  opts.pairs = 500;
  opts.shard_size = 100;
  opts.seed = 11;
  const auto parallel = distortion_sample(alg, shear, opts);
  opts.parallel = false;
  const auto serial = distortion_sample(alg, shear, opts);
  REQUIRE(parallel.pairs.size() == serial.pairs.size());
  for (std::size_t i = 0; i < serial.pairs.size(); ++i) CHECK(parallel.pairs[i].ratio == serial.pairs[i].ratio);
  CHECK(parallel.histogram == serial.histogram);
  CHECK(serial.min_ratio > 0.0);
  opts.sampler = PairSampler::Box;
  CHECK(distortion_sample(alg, shear, opts).max_ratio < 100.0);
}
