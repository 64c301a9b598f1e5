#include "carnot/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace carnot {

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

void Polynomial::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

Polynomial Polynomial::monomial(const Rational& c, std::size_t power) {
  std::vector<Rational> coeffs(power + 1, Rational(0));
  coeffs[power] = c;
  return Polynomial(std::move(coeffs));
}

Polynomial Polynomial::interpolate(const std::vector<std::pair<Rational, Rational>>& points) {
  Polynomial result;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Polynomial basis({Rational(1)});
    Rational denom = 1;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      if (points[i].first == points[j].first) throw std::invalid_argument("interpolation nodes must be distinct");
      basis = basis * Polynomial({Rational(-points[j].first), Rational(1)});
      denom *= points[i].first - points[j].first;
    }
    result = result + Rational(points[i].second / denom) * basis;
  }
  return result;
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> out(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) out[k - 1] = coeffs_[k] * static_cast<long>(k);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::antiderivative() const {
  if (coeffs_.empty()) return {};
  std::vector<Rational> out(coeffs_.size() + 1, Rational(0));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k + 1] = coeffs_[k] / static_cast<long>(k + 1);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::shifted(const Rational& shift) const {
  // Horner in the polynomial ring: p(x + s) = (...(a_d (x+s) + a_{d-1})(x+s) + ...).
  Polynomial result;
  const Polynomial linear({shift, Rational(1)});
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) result = result * linear + Polynomial({*it});
  return result;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[k] += b.coeffs_[k];
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a) {
  Polynomial out = a;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(out));
}

Polynomial operator*(const Rational& s, const Polynomial& p) {
  std::vector<Rational> out = p.coeffs_;
  for (auto& c : out) c *= s;
  return Polynomial(std::move(out));
}

Rational abs_bound_on_interval(const Polynomial& p, const Rational& lo, const Rational& hi) {
  const Rational mid = (lo + hi) / 2;
  const Rational radius = (hi - lo) / 2;
  const Polynomial local = p.shifted(mid);
  Rational bound = 0;
  Rational power = 1;
  for (const auto& c : local.coefficients()) {
    bound += abs(c) * power;
    power *= radius;
  }
  return bound;
}

PiecewisePolynomial::PiecewisePolynomial(std::vector<Rational> breakpoints, std::vector<Polynomial> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (pieces_.size() != breakpoints_.size() + 1) throw std::invalid_argument("need one more piece than breakpoints");
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    breakpoints_[k].canonicalize();
    if (k > 0 && !(breakpoints_[k - 1] < breakpoints_[k])) throw std::invalid_argument("breakpoints must increase");
    if (pieces_[k](breakpoints_[k]) != pieces_[k + 1](breakpoints_[k])) {
      throw std::invalid_argument("piecewise polynomial is discontinuous at " + format_rational(breakpoints_[k]));
    }
  }
}

PiecewisePolynomial PiecewisePolynomial::from_bounded_pieces(const std::vector<Rational>& lo,
                                                             const std::vector<Rational>& hi,
                                                             const std::vector<Polynomial>& pieces) {
  if (lo.size() != pieces.size() || hi.size() != pieces.size() || pieces.empty()) {
    throw std::invalid_argument("bounded pieces need matching lo/hi/coefficient lists");
  }
  std::vector<Rational> breakpoints{lo.front()};
  std::vector<Polynomial> polys{Polynomial({pieces.front()(lo.front())})};
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (!(lo[k] < hi[k])) throw std::invalid_argument("empty piece [" + format_rational(lo[k]) + ", " + format_rational(hi[k]) + "]");
    if (k > 0 && lo[k] != hi[k - 1]) throw std::invalid_argument("pieces must tile an interval");
    breakpoints.push_back(hi[k]);
    polys.push_back(pieces[k]);
  }
  polys.push_back(Polynomial({pieces.back()(hi.back())}));
  return PiecewisePolynomial(std::move(breakpoints), std::move(polys));
}

PiecewisePolynomial PiecewisePolynomial::linear_interpolation(const std::vector<Rational>& xs,
                                                              const std::vector<Rational>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("need at least two samples");
  std::vector<Rational> lo, hi;
  std::vector<Polynomial> pieces;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    if (!(xs[k] < xs[k + 1])) throw std::invalid_argument("sample abscissae must increase");
    const Rational slope = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
    lo.push_back(xs[k]);
    hi.push_back(xs[k + 1]);
    pieces.push_back(Polynomial({Rational(ys[k] - slope * xs[k]), slope}));
  }
  return from_bounded_pieces(lo, hi, pieces);
}

std::size_t PiecewisePolynomial::piece_index(const Rational& x) const {
  return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin());
}

Rational PiecewisePolynomial::operator()(const Rational& x) const { return pieces_[piece_index(x)](x); }

double PiecewisePolynomial::operator()(double x) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x,
                                   [](double v, const Rational& b) { return v < b.get_d(); });
  return pieces_[static_cast<std::size_t>(it - breakpoints_.begin())](x);
}

bool PiecewisePolynomial::is_breakpoint(const Rational& x) const {
  return std::binary_search(breakpoints_.begin(), breakpoints_.end(), x);
}

std::optional<Rational> PiecewisePolynomial::derivative_at(const Rational& x) const {
  const std::size_t k = piece_index(x);
  const Rational right = pieces_[k].derivative()(x);
  if (k > 0 && breakpoints_[k - 1] == x) {
    const Rational left = pieces_[k - 1].derivative()(x);
    if (left != right) return std::nullopt;
  }
  return right;
}

PiecewisePolynomial PiecewisePolynomial::integral_from_zero() const {
  std::vector<Polynomial> out(pieces_.size());
  const std::size_t home = piece_index(Rational(0));
  for (std::size_t k = 0; k < pieces_.size(); ++k) out[k] = pieces_[k].antiderivative();
  // Shift constants so the result vanishes at 0 and is continuous at every breakpoint.
  out[home] = out[home] - Polynomial({out[home](Rational(0))});
  for (std::size_t k = home + 1; k < pieces_.size(); ++k) {
    const Rational& b = breakpoints_[k - 1];
    out[k] = out[k] + Polynomial({Rational(out[k - 1](b) - out[k](b))});
  }
  for (std::size_t k = home; k-- > 0;) {
    const Rational& b = breakpoints_[k];
    out[k] = out[k] + Polynomial({Rational(out[k + 1](b) - out[k](b))});
  }
  return PiecewisePolynomial(breakpoints_, std::move(out));
}

namespace {

Rational bisected_bound(const Polynomial& dp, const Rational& lo, const Rational& hi, int depth) {
  if (depth == 0) return abs_bound_on_interval(dp, lo, hi);
  const Rational mid = (lo + hi) / 2;
  return std::max(bisected_bound(dp, lo, mid, depth - 1), bisected_bound(dp, mid, hi, depth - 1));
}

// 1: certified, 0: could not decide at this depth, -1: violated at a sample point.
int certify_piece(const Polynomial& dp, const Rational& lo, const Rational& hi, const Rational& bound, int depth) {
  if (abs_bound_on_interval(dp, lo, hi) <= bound) return 1;
  const Rational mid = (lo + hi) / 2;
  if (abs(dp(mid)) > bound || abs(dp(lo)) > bound || abs(dp(hi)) > bound) return -1;
  if (depth == 0) return 0;
  const int left = certify_piece(dp, lo, mid, bound, depth - 1);
  if (left <= 0) return left;
  return certify_piece(dp, mid, hi, bound, depth - 1);
}

}  // namespace

std::optional<Rational> PiecewisePolynomial::lipschitz_upper_bound(int bisection_depth) const {
  Rational best = 0;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const Polynomial dp = pieces_[k].derivative();
    const bool unbounded = k == 0 || k + 1 == pieces_.size();
    if (unbounded) {
      if (dp.degree() > 0) return std::nullopt;
      best = std::max(best, Rational(abs(dp.coefficient(0))));
      continue;
    }
    best = std::max(best, bisected_bound(dp, breakpoints_[k - 1], breakpoints_[k], bisection_depth));
  }
  return best;
}

bool PiecewisePolynomial::certify_lipschitz(const Rational& bound, int max_depth) const {
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const Polynomial dp = pieces_[k].derivative();
    const bool unbounded = k == 0 || k + 1 == pieces_.size();
    if (unbounded) {
      if (dp.degree() > 0 || abs(dp.coefficient(0)) > bound) return false;
      continue;
    }
    if (certify_piece(dp, breakpoints_[k - 1], breakpoints_[k], bound, max_depth) != 1) return false;
  }
  return true;
}

PiecewisePolynomial operator-(const PiecewisePolynomial& p) { return Rational(-1) * p; }

PiecewisePolynomial operator*(const Rational& s, const PiecewisePolynomial& p) {
  PiecewisePolynomial out = p;
  for (auto& piece : out.pieces_) piece = s * piece;
  return out;
}

}  // namespace carnot
