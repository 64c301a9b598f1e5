#pragma once

#include "carnot/scalar.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace carnot {

/// Univariate polynomial with exact rational coefficients (ascending powers, no trailing zeros).
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);

  static Polynomial monomial(const Rational& c, std::size_t power);
  /// Lagrange interpolation through points with distinct abscissae.
  static Polynomial interpolate(const std::vector<std::pair<Rational, Rational>>& points);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coefficient(std::size_t power) const { return power < coeffs_.size() ? coeffs_[power] : Rational(0); }

  Rational operator()(const Rational& x) const;
  double operator()(double x) const;

  Polynomial derivative() const;
  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const;
  /// x -> p(x + shift).
  Polynomial shifted(const Rational& shift) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& s, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Continuous piecewise polynomial on the real line.
///
/// With breakpoints b_0 < ... < b_{m-1}, piece k lives on [b_{k-1}, b_k]
/// (b_{-1} = -inf, b_m = +inf), so there are m + 1 pieces.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() : pieces_(1) {}
  explicit PiecewisePolynomial(Polynomial p) : pieces_{std::move(p)} {}
  /// Throws std::invalid_argument unless breakpoints increase strictly and pieces agree at them.
  PiecewisePolynomial(std::vector<Rational> breakpoints, std::vector<Polynomial> pieces);

  /// Bounded pieces [lo_k, hi_k] that tile an interval; h is extended by constants outside it.
  static PiecewisePolynomial from_bounded_pieces(const std::vector<Rational>& lo, const std::vector<Rational>& hi,
                                                 const std::vector<Polynomial>& pieces);
  /// Linear interpolation of samples (x strictly increasing), constant outside [x_0, x_last].
  static PiecewisePolynomial linear_interpolation(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Polynomial>& pieces() const { return pieces_; }
  std::size_t piece_index(const Rational& x) const;

  Rational operator()(const Rational& x) const;
  double operator()(double x) const;
  bool is_breakpoint(const Rational& x) const;
  /// Derivative at x; empty at a breakpoint where the one-sided derivatives differ.
  std::optional<Rational> derivative_at(const Rational& x) const;

  /// F(x) = integral of this function from 0 to x (exact, continuous).
  PiecewisePolynomial integral_from_zero() const;

  /// Certified upper bound for sup |h'|; infinite (empty) when an unbounded piece has degree >= 2.
  std::optional<Rational> lipschitz_upper_bound(int bisection_depth = 8) const;
  /// True when |h(x) - h(y)| <= bound |x - y| is certified by derivative bounding on every piece.
  bool certify_lipschitz(const Rational& bound, int max_depth = 24) const;

  friend PiecewisePolynomial operator-(const PiecewisePolynomial& p);
  friend PiecewisePolynomial operator*(const Rational& s, const PiecewisePolynomial& p);
  friend bool operator==(const PiecewisePolynomial& a, const PiecewisePolynomial& b) {
    return a.breakpoints_ == b.breakpoints_ && a.pieces_ == b.pieces_;
  }

 private:
  std::vector<Rational> breakpoints_;
  std::vector<Polynomial> pieces_;
};

/// Upper bound for max |p| on [lo, hi] via a Taylor expansion at the midpoint.
Rational abs_bound_on_interval(const Polynomial& p, const Rational& lo, const Rational& hi);

}  // namespace carnot
