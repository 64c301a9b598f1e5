#include "carnot/bch.hpp"

#include <map>
#include <mutex>

namespace carnot {

namespace {

Rational factorial(int k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
  return Rational(f);
}

// Enumerates Dynkin block sequences and accumulates one coefficient per letter word.
class WordCollector {
 public:
  explicit WordCollector(int degree) : degree_(degree) {}

  std::map<std::vector<int>, Rational> run() {
    std::vector<int> letters;
    extend(letters, 0, Rational(1));
    return std::move(words_);
  }

 private:
  void extend(std::vector<int>& letters, int blocks, const Rational& factorials) {
    const int used = static_cast<int>(letters.size());
    for (int size = 1; used + size <= degree_; ++size) {
      for (int p = 0; p <= size; ++p) {
        const int q = size - p;
        const std::size_t mark = letters.size();
        letters.insert(letters.end(), static_cast<std::size_t>(p), 0);
        letters.insert(letters.end(), static_cast<std::size_t>(q), 1);
        const Rational weight = factorials * factorial(p) * factorial(q);
        const int k = blocks + 1;
        // A block may close the word only as X^p Y (q = 1) or as a lone X.
        if (q == 1 || (q == 0 && p == 1)) {
          Rational c = Rational(k % 2 == 1 ? 1 : -1) / (Rational(k) * Rational(static_cast<long>(letters.size())) * weight);
          words_[letters] += c;
        }
        extend(letters, k, weight);
        letters.resize(mark);
      }
    }
  }

  int degree_;
  std::map<std::vector<int>, Rational> words_;
};

}  // namespace

BchSeries::BchSeries(int degree) : degree_(degree) {
  if (degree < 1) throw std::invalid_argument("BCH truncation degree must be positive");
  auto words = WordCollector(degree).run();
  // Words whose last two letters agree end in [L, L] = 0.
  std::erase_if(words, [](const auto& entry) {
    const auto& w = entry.first;
    return sgn(entry.second) == 0 || (w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2]);
  });
  auto node_for = [this](const std::vector<int>& word) {
    // Walk from the last letter (the root) towards the first, creating nodes.
    int index = roots_[static_cast<std::size_t>(word.back())];
    if (index < 0) {
      index = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
      roots_[static_cast<std::size_t>(word.back())] = index;
    }
    for (std::size_t pos = word.size() - 1; pos-- > 0;) {
      const auto letter = static_cast<std::size_t>(word[pos]);
      int child = nodes_[static_cast<std::size_t>(index)].child[letter];
      if (child < 0) {
        child = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[static_cast<std::size_t>(index)].child[letter] = child;
      }
      index = child;
    }
    return index;
  };
  for (const auto& [word, c] : words) {
    auto& node = nodes_[static_cast<std::size_t>(node_for(word))];
    node.coefficient = c;
    node.coefficient_f = c.get_d();
  }
}

std::shared_ptr<const BchSeries> BchSeries::truncated_at(int degree) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const BchSeries>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(degree);
  if (it == cache.end()) {
    it = cache.emplace(degree, std::shared_ptr<const BchSeries>(new BchSeries(degree))).first;
  }
  return it->second;
}

Rational BchSeries::coefficient(const std::vector<int>& word) const {
  if (word.empty()) return 0;
  int index = roots_.at(static_cast<std::size_t>(word.back()));
  for (std::size_t pos = word.size() - 1; pos-- > 0 && index >= 0;) {
    index = nodes_[static_cast<std::size_t>(index)].child.at(static_cast<std::size_t>(word[pos]));
  }
  return index < 0 ? Rational(0) : nodes_[static_cast<std::size_t>(index)].coefficient;
}

Element dynkin_product(const GradedAlgebra& alg, const Element& x, const Element& y, int max_step) {
  return bch_product(alg, x, y, max_step);
}

const BchCoefficients& bch_coefficients(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const BchCoefficients>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto coeffs = std::make_unique<BchCoefficients>();
    coeffs->n = n;
    if (n >= 3) {
      const auto alg = GradedAlgebra::filiform_real(n);
      const Element prod = dynkin_product(alg, alg.basis(0), alg.basis(1));
      // e_1 * e_2 = e_1 + e_2 + e_3/2 + sum_j c_j e_{j+2}
      for (int j = 2; j <= n - 1; ++j) coeffs->c.push_back(prod.coords[static_cast<std::size_t>(j + 1)]);
    }
    it = cache.emplace(n, std::move(coeffs)).first;
  }
  return *it->second;
}

namespace {

void require_filiform(const GradedAlgebra& alg, const char* op) {
  if (!alg.is_filiform()) throw std::invalid_argument(std::string(op) + " requires a filiform algebra, got " + alg.label());
}

// Number of leading coordinates that span K e_1.
std::size_t e1_width(const GradedAlgebra& alg) { return alg.kind() == AlgebraKind::FiliformComplexAsReal ? 2 : 1; }

Element tail_series(const GradedAlgebra& alg, const Element& x, const Element& y, bool reversed) {
  const int n = alg.parameter();
  const auto& coeffs = bch_coefficients(n);
  Element out = x + y;
  Element power = bracket(alg, x, y);  // (ad X)^1 Y
  Element half = power;
  half *= Rational(reversed ? -1 : 1, 2);
  out += half;
  for (int j = 2; j <= n - 1 && !power.is_zero(); ++j) {
    power = bracket(alg, x, power);
    Rational c = coeffs.at(j);
    if (reversed && j % 2 == 1) c = -c;
    if (sgn(c) == 0) continue;
    Element term = power;
    term *= c;
    out += term;
  }
  return out;
}

}  // namespace

bool in_abelian_ideal(const GradedAlgebra& alg, const Element& y) {
  require_filiform(alg, "abelian ideal test");
  alg.check(y);
  for (std::size_t i = 0; i < e1_width(alg); ++i)
    if (sgn(y.coords[i]) != 0) return false;
  return true;
}

Element abelian_tail_product(const GradedAlgebra& alg, const Element& x, const Element& y) {
  require_filiform(alg, "abelian_tail_product");
  alg.check(x);
  if (!in_abelian_ideal(alg, y)) throw std::invalid_argument("abelian_tail_product: Y is outside the abelian ideal");
  return tail_series(alg, x, y, false);
}

Element abelian_tail_product_reversed(const GradedAlgebra& alg, const Element& y, const Element& x) {
  require_filiform(alg, "abelian_tail_product_reversed");
  alg.check(x);
  if (!in_abelian_ideal(alg, y)) throw std::invalid_argument("abelian_tail_product_reversed: Y is outside the abelian ideal");
  return tail_series(alg, x, y, true);
}

Element conjugate_by_horizontal(const GradedAlgebra& alg, const Gaussian& t, const Element& y) {
  require_filiform(alg, "conjugate_by_horizontal");
  if (!in_abelian_ideal(alg, y)) throw std::invalid_argument("conjugate_by_horizontal: Y has a nonzero e_1 component");
  Element te1(alg.dim());
  te1.coords[0] = t.re;
  if (alg.complex_structure()) {
    te1.coords[1] = t.im;
  } else if (!t.is_real()) {
    throw std::invalid_argument("conjugate_by_horizontal: complex t on a real algebra");
  }
  return dynkin_product(alg, dynkin_product(alg, -te1, y), te1);
}

}  // namespace carnot
