#pragma once

#include "carnot/algebra.hpp"

#include <array>
#include <memory>
#include <vector>

namespace carnot {

inline constexpr int kDefaultMaxBchStep = 8;

/// The BCH series truncated at a bracket degree, as a trie of right-normed words.
///
/// A node is a word L_1 L_2 ... L_m over {X, Y} standing for
/// ad(L_1) ad(L_2) ... ad(L_{m-1}) L_m; its children prepend one letter. The
/// coefficient of each word is the sum of the Dynkin coefficients
/// (-1)^{k+1} / (k * m * prod p_i! q_i!) over all block segmentations
/// X^{p_1} Y^{q_1} ... X^{p_k} Y^{q_k} that spell the word.
class BchSeries {
 public:
  struct Node {
    Rational coefficient;
    double coefficient_f = 0.0;
    std::array<int, 2> child{-1, -1};  // index 0: prepend X, 1: prepend Y
  };

  /// Cached per degree; the first call for a degree builds it under a lock.
  static std::shared_ptr<const BchSeries> truncated_at(int degree);

  int degree() const { return degree_; }
  const Node& node(int index) const { return nodes_[static_cast<std::size_t>(index)]; }
  /// Roots for the single-letter words "X" and "Y".
  std::array<int, 2> roots() const { return roots_; }
  std::size_t size() const { return nodes_.size(); }
  /// Coefficient of a word (letters 0 = X, 1 = Y); zero if absent.
  Rational coefficient(const std::vector<int>& word) const;

 private:
  explicit BchSeries(int degree);
  int degree_;
  std::vector<Node> nodes_;
  std::array<int, 2> roots_{-1, -1};
};

namespace detail {

template <class T>
T series_coefficient(const BchSeries::Node& node) {
  if constexpr (std::is_same_v<T, Rational>) {
    return node.coefficient;
  } else {
    return T(node.coefficient_f);
  }
}

template <class T>
void accumulate_words(const GradedAlgebra& alg, const BchSeries& series, int index, const BasicElement<T>& value,
                      const std::array<const BasicElement<T>*, 2>& letters, BasicElement<T>& out) {
  const auto& node = series.node(index);
  if (sgn(node.coefficient) != 0) {
    const T c = series_coefficient<T>(node);
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (!is_zero(value.coords[i])) out.coords[i] += c * value.coords[i];
    }
  }
  for (int letter = 0; letter < 2; ++letter) {
    const int child = node.child[static_cast<std::size_t>(letter)];
    if (child < 0) continue;
    BasicElement<T> next = bracket(alg, *letters[static_cast<std::size_t>(letter)], value);
    if (next.is_zero()) continue;
    accumulate_words(alg, series, child, next, letters, out);
  }
}

}  // namespace detail

/// Group law X*Y by the truncated Dynkin series; exact for any scalar type
/// because the series is a finite polynomial in a nilpotent algebra.
template <class T>
BasicElement<T> bch_product(const GradedAlgebra& alg, const BasicElement<T>& x, const BasicElement<T>& y,
                            int max_step = kDefaultMaxBchStep) {
  alg.check(x);
  alg.check(y);
  if (alg.step() > max_step) {
    throw std::invalid_argument("algebra step " + std::to_string(alg.step()) + " exceeds the BCH truncation limit " +
                                std::to_string(max_step));
  }
  const auto series = BchSeries::truncated_at(alg.step());
  BasicElement<T> out(alg.dim());
  const std::array<const BasicElement<T>*, 2> letters{&x, &y};
  const auto roots = series->roots();
  if (!x.is_zero()) detail::accumulate_words(alg, *series, roots[0], x, letters, out);
  if (!y.is_zero()) detail::accumulate_words(alg, *series, roots[1], y, letters, out);
  return out;
}

/// Exact group product (the slow ground truth). Float inputs are rejected at compile time.
Element dynkin_product(const GradedAlgebra& alg, const Element& x, const Element& y,
                       int max_step = kDefaultMaxBchStep);
ElementF dynkin_product(const GradedAlgebra&, const ElementF&, const ElementF&, int = kDefaultMaxBchStep) = delete;

/// Float group product for metric and optimizer paths.
inline ElementF product(const GradedAlgebra& alg, const ElementF& x, const ElementF& y) {
  return bch_product(alg, x, y);
}

/// Group inverse in exponential coordinates.
template <class T>
BasicElement<T> inverse(const BasicElement<T>& x) {
  return -x;
}

/// The rational constants c_2..c_{n-1} with X*Y = X + Y + [X,Y]/2 + sum c_j (ad X)^j Y
/// whenever Y lies in the abelian ideal of F^n. Extracted from the Dynkin series
/// (coefficient of e_{j+2} in e_1 * e_2 on F_R^n) and cached per n.
struct BchCoefficients {
  int n = 0;
  std::vector<Rational> c;  // c[0] = c_2, ..., c[n-3] = c_{n-1}
  const Rational& at(int j) const { return c.at(static_cast<std::size_t>(j - 2)); }
};

const BchCoefficients& bch_coefficients(int n);

/// True when y lies in K e_2 + V_2 + ... + V_n of a filiform algebra.
bool in_abelian_ideal(const GradedAlgebra& alg, const Element& y);

/// X*Y for Y in the abelian ideal (filiform algebras), by the closed form.
Element abelian_tail_product(const GradedAlgebra& alg, const Element& x, const Element& y);

/// Y*X for Y in the abelian ideal: the closed form with (-1)^j c_j.
Element abelian_tail_product_reversed(const GradedAlgebra& alg, const Element& y, const Element& x);

/// (-t e_1) * Y * (t e_1) for Y in the abelian ideal. For complex algebras t may be a Gaussian rational.
Element conjugate_by_horizontal(const GradedAlgebra& alg, const Gaussian& t, const Element& y);

}  // namespace carnot
