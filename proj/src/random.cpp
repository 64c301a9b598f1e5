#include "carnot/random.hpp"

namespace carnot {

Rational random_rational(Rng& rng, long max_abs_num, long max_den) {
  std::uniform_int_distribution<long> num(-max_abs_num, max_abs_num);
  std::uniform_int_distribution<long> den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

Rational random_nonzero_rational(Rng& rng, long max_abs_num, long max_den) {
  for (;;) {
    Rational q = random_rational(rng, max_abs_num, max_den);
    if (sgn(q) != 0) return q;
  }
}

Element random_element(const GradedAlgebra& alg, Rng& rng, long max_abs_num, long max_den) {
  Element x(alg.dim());
  for (auto& c : x.coords) c = random_rational(rng, max_abs_num, max_den);
  return x;
}

Element random_horizontal(const GradedAlgebra& alg, Rng& rng, long max_abs_num, long max_den) {
  Element x(alg.dim());
  const auto& v1 = alg.layer(1);
  for (std::size_t i = v1.lo; i < v1.hi; ++i) x.coords[i] = random_rational(rng, max_abs_num, max_den);
  return x;
}

PiecewisePolynomial random_piecewise_polynomial(Rng& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_int_distribution<int> degree(0, 3);
  const int pieces = count(rng);
  std::vector<Rational> cuts{random_rational(rng, 3, 2) - 2};
  for (int k = 0; k < pieces; ++k) cuts.push_back(cuts.back() + Rational(1 + static_cast<long>(degree(rng)), 2));
  std::vector<Rational> lo(cuts.begin(), cuts.end() - 1), hi(cuts.begin() + 1, cuts.end());
  std::vector<Polynomial> polys;
  Rational value_at_start = random_rational(rng, 3, 3);
  for (int k = 0; k < pieces; ++k) {
    std::vector<Rational> c(static_cast<std::size_t>(degree(rng)) + 1);
    for (auto& x : c) x = random_rational(rng, 5, 4);
    Polynomial p(std::move(c));
    p = p + Polynomial({Rational(value_at_start - p(lo[static_cast<std::size_t>(k)]))});
    value_at_start = p(hi[static_cast<std::size_t>(k)]);
    polys.push_back(std::move(p));
  }
  return PiecewisePolynomial::from_bounded_pieces(lo, hi, polys);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace carnot
