#pragma once

#include "carnot/algebra.hpp"
#include "carnot/polynomial.hpp"

#include <cstdint>
#include <random>

namespace carnot {

using Rng = std::mt19937_64;

/// splitmix64 finalizer: independent per-stream seeds from one master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform p/q with |p| <= max_abs_num and 1 <= q <= max_den.
Rational random_rational(Rng& rng, long max_abs_num = 9, long max_den = 7);
/// As random_rational but never zero.
Rational random_nonzero_rational(Rng& rng, long max_abs_num = 9, long max_den = 7);
Element random_element(const GradedAlgebra& alg, Rng& rng, long max_abs_num = 9, long max_den = 7);
/// Random element of the first layer V_1.
Element random_horizontal(const GradedAlgebra& alg, Rng& rng, long max_abs_num = 9, long max_den = 7);
/// Uniform double in [lo, hi).
/// Continuous piecewise polynomial on a bounded interval (1 to 4 pieces, degree <= 3), constant outside.
PiecewisePolynomial random_piecewise_polynomial(Rng& rng);

double uniform(Rng& rng, double lo, double hi);

}  // namespace carnot
