#include "doctest.h"

#include "carnot/matrix.hpp"
#include "carnot/random.hpp"

using namespace carnot;

namespace {

// Plain rational Gauss elimination, used only as an independent reference.
std::size_t naive_rank(Matrix<Rational> m) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t p = rank;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(rank, k));
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      const Rational f = m(r, c) / m(rank, c);
      for (std::size_t k = 0; k < m.cols(); ++k) m(r, k) -= f * m(rank, k);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-4") == Rational(-4));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("-1e-3") == Rational(-1, 1000));
  CHECK(parse_rational(" 2/3 ") == Rational(2, 3));
  CHECK(format_rational(Rational(6, 4)) == "3/2");
  CHECK(format_rational(Rational(5)) == "5");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK(rational_from_double(0.1).get_d() == 0.1);
}

TEST_CASE("Gaussian rationals") {
  const Gaussian i(0, 1);
  CHECK(i * i == Gaussian(-1));
  CHECK(pow(i, 4) == Gaussian(1));
  CHECK(Gaussian(3, 4) / Gaussian(3, 4) == Gaussian(1));
  CHECK(format_gaussian(Gaussian(Rational(1, 2), -2)) == "1/2-2i");
  CHECK(format_gaussian(Gaussian(0, 1)) == "1i");
  CHECK_THROWS_AS(Gaussian(1) / Gaussian(0), std::domain_error);
}

TEST_CASE("exact rank agrees with naive elimination on random low-rank matrices") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6, inner = 1 + rng() % 4;
    Matrix<Rational> a(rows, inner), b(inner, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < inner; ++c) a(r, c) = random_rational(rng, 5, 4);
    for (std::size_t r = 0; r < inner; ++r)
      for (std::size_t c = 0; c < cols; ++c) b(r, c) = random_rational(rng, 5, 4);
    const Matrix<Rational> m = a * b;
    CHECK(exact_rank(m) == naive_rank(m));
  }
  CHECK(exact_rank(Matrix<Rational>(3, 3)) == 0);
  CHECK(exact_rank(Matrix<Rational>::identity(4)) == 4);
}

TEST_CASE("determinant and inverse") {
  Matrix<Rational> m(2, 2);
  m(0, 0) = Rational(1, 2);
  m(0, 1) = 3;
  m(1, 0) = -1;
  m(1, 1) = Rational(2, 3);
  CHECK(exact_determinant(m) == Rational(1, 3) + 3);
  CHECK(m * exact_inverse(m) == Matrix<Rational>::identity(2));
  Matrix<Rational> singular(2, 2);
  singular(0, 0) = 1;
  singular(0, 1) = 2;
  singular(1, 0) = 2;
  singular(1, 1) = 4;
  CHECK(exact_determinant(singular) == 0);
  CHECK_THROWS_AS(exact_inverse(singular), std::domain_error);
}
