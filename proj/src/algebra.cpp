#include "carnot/algebra.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <tuple>

namespace carnot {

ElementF to_float(const Element& x) {
  ElementF out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.coords[i] = x.coords[i].get_d();
  return out;
}

GradedAlgebra::GradedAlgebra(AlgebraKind kind, int parameter, std::size_t dim, std::vector<LayerRange> layers,
                             std::vector<StructureConstant> constants, bool complex_structure)
    : kind_(kind),
      parameter_(parameter),
      dim_(dim),
      layers_(std::move(layers)),
      weights_(dim, 0),
      constants_(std::move(constants)),
      complex_structure_(complex_structure) {
  std::size_t expected_lo = 0;
  for (std::size_t w = 0; w < layers_.size(); ++w) {
    const auto& layer = layers_[w];
    if (layer.lo != expected_lo || layer.hi <= layer.lo) {
      throw std::invalid_argument("layers must be non-empty consecutive index ranges starting at 0");
    }
    for (std::size_t i = layer.lo; i < layer.hi; ++i) weights_[i] = static_cast<int>(w + 1);
    expected_lo = layer.hi;
  }
  if (expected_lo != dim_) throw std::invalid_argument("layers do not partition the basis");
  std::sort(constants_.begin(), constants_.end(), [](const StructureConstant& a, const StructureConstant& b) {
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
  });
  constants_f_.reserve(constants_.size());
  for (const auto& sc : constants_) constants_f_.push_back(sc.c.get_d());
  if (complex_structure_ && dim_ % 2 != 0) throw std::invalid_argument("complex structure needs even dimension");
}

GradedAlgebra GradedAlgebra::filiform_real(int n) {
  if (n < 2) throw std::invalid_argument("filiform algebra needs n >= 2, got " + std::to_string(n));
  const auto dim = static_cast<std::size_t>(n + 1);
  std::vector<LayerRange> layers{{0, 2}};
  for (std::size_t j = 2; j <= static_cast<std::size_t>(n); ++j) layers.push_back({j, j + 1});
  std::vector<StructureConstant> constants;
  // [e_1, e_j] = e_{j+1}, 2 <= j <= n (0-based: [0, j-1] -> j).
  for (std::size_t j = 2; j <= static_cast<std::size_t>(n); ++j) constants.push_back({0, j - 1, j, Rational(1)});
  return GradedAlgebra(AlgebraKind::FiliformReal, n, dim, std::move(layers), std::move(constants), false);
}

GradedAlgebra GradedAlgebra::filiform_complex_as_real(int n) {
  if (n < 2) throw std::invalid_argument("complex filiform algebra needs n >= 2, got " + std::to_string(n));
  const auto dim = static_cast<std::size_t>(2 * (n + 1));
  auto re = [](std::size_t j) { return 2 * (j - 1); };
  auto im = [](std::size_t j) { return 2 * (j - 1) + 1; };
  std::vector<LayerRange> layers{{0, 4}};
  for (std::size_t j = 2; j <= static_cast<std::size_t>(n); ++j) layers.push_back({re(j + 1), re(j + 1) + 2});
  std::vector<StructureConstant> constants;
  for (std::size_t j = 2; j <= static_cast<std::size_t>(n); ++j) {
    constants.push_back({re(1), re(j), re(j + 1), Rational(1)});   // [e_1, e_j] = e_{j+1}
    constants.push_back({re(1), im(j), im(j + 1), Rational(1)});   // [e_1, ie_j] = ie_{j+1}
    constants.push_back({im(1), re(j), im(j + 1), Rational(1)});   // [ie_1, e_j] = ie_{j+1}
    constants.push_back({im(1), im(j), re(j + 1), Rational(-1)});  // [ie_1, ie_j] = -e_{j+1}
  }
  return GradedAlgebra(AlgebraKind::FiliformComplexAsReal, n, dim, std::move(layers), std::move(constants), true);
}

GradedAlgebra GradedAlgebra::complex_heisenberg_as_real(int n) {
  if (n < 1) throw std::invalid_argument("complex Heisenberg algebra needs n >= 1, got " + std::to_string(n));
  const auto first = static_cast<std::size_t>(4 * n);
  const std::size_t z = first;
  const std::size_t iz = first + 1;
  std::vector<StructureConstant> constants;
  for (std::size_t m = 0; m < static_cast<std::size_t>(n); ++m) {
    const std::size_t x = 4 * m, ix = 4 * m + 1, y = 4 * m + 2, iy = 4 * m + 3;
    constants.push_back({x, y, z, Rational(1)});     // [X, Y] = Z
    constants.push_back({x, iy, iz, Rational(1)});   // [X, iY] = iZ
    constants.push_back({ix, y, iz, Rational(1)});   // [iX, Y] = iZ
    constants.push_back({ix, iy, z, Rational(-1)});  // [iX, iY] = -Z
  }
  return GradedAlgebra(AlgebraKind::ComplexHeisenbergAsReal, n, first + 2, {{0, first}, {first, first + 2}},
                       std::move(constants), true);
}

GradedAlgebra GradedAlgebra::custom(std::size_t dim, std::vector<LayerRange> layers,
                                    std::vector<StructureConstant> constants, bool complex_structure) {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational> merged;
  for (auto sc : constants) {
    if (sc.i >= dim || sc.j >= dim || sc.k >= dim) throw std::invalid_argument("structure constant index out of range");
    if (sc.i == sc.j) {
      if (sgn(sc.c) != 0) throw std::invalid_argument("[e_i, e_i] must vanish");
      continue;
    }
    if (sc.i > sc.j) {
      std::swap(sc.i, sc.j);
      sc.c = -sc.c;
    }
    merged[{sc.i, sc.j, sc.k}] += sc.c;
  }
  std::vector<StructureConstant> normalized;
  for (const auto& [key, c] : merged) {
    if (sgn(c) != 0) normalized.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), c});
  }
  GradedAlgebra alg(AlgebraKind::Custom, 0, dim, std::move(layers), std::move(normalized), complex_structure);
  for (const auto& check : {check_grading(alg), check_jacobi(alg), check_carnot_condition(alg)}) {
    if (!check.empty()) throw std::invalid_argument("not a Carnot algebra: " + check);
  }
  return alg;
}

std::string GradedAlgebra::label() const {
  switch (kind_) {
    case AlgebraKind::FiliformReal:
      return "FiliformReal(" + std::to_string(parameter_) + ")";
    case AlgebraKind::FiliformComplexAsReal:
      return "FiliformComplexAsReal(" + std::to_string(parameter_) + ")";
    case AlgebraKind::ComplexHeisenbergAsReal:
      return "ComplexHeisenbergAsReal(" + std::to_string(parameter_) + ")";
    case AlgebraKind::Custom:
      break;
  }
  return "Custom";
}

std::string GradedAlgebra::basis_name(std::size_t i) const {
  switch (kind_) {
    case AlgebraKind::FiliformReal:
      return "e_" + std::to_string(i + 1);
    case AlgebraKind::FiliformComplexAsReal:
      return (i % 2 == 0 ? "e_" : "ie_") + std::to_string(i / 2 + 1);
    case AlgebraKind::ComplexHeisenbergAsReal:
      if (i < layers_[0].hi) return "e_" + std::to_string(i + 1);
      return "eta_" + std::to_string(i - layers_[0].hi + 1);
    case AlgebraKind::Custom:
      break;
  }
  return "b_" + std::to_string(i + 1);
}

Element GradedAlgebra::basis(std::size_t i) const {
  if (i >= dim_) throw std::out_of_range("basis index out of range");
  Element e(dim_);
  e.coords[i] = 1;
  return e;
}

ElementF GradedAlgebra::basis_f(std::size_t i) const {
  if (i >= dim_) throw std::out_of_range("basis index out of range");
  ElementF e(dim_);
  e.coords[i] = 1.0;
  return e;
}

bool operator==(const GradedAlgebra& a, const GradedAlgebra& b) {
  if (a.dim_ != b.dim_ || a.layers_ != b.layers_ || a.complex_structure_ != b.complex_structure_) return false;
  if (a.constants_.size() != b.constants_.size()) return false;
  for (std::size_t n = 0; n < a.constants_.size(); ++n) {
    const auto& x = a.constants_[n];
    const auto& y = b.constants_[n];
    if (x.i != y.i || x.j != y.j || x.k != y.k || x.c != y.c) return false;
  }
  return true;
}

GradedAlgebra algebra_from_label(const std::string& label) {
  static const std::regex pattern(R"(\s*([A-Za-z]+)\s*\(\s*(\d+)\s*\)\s*)");
  std::smatch m;
  if (!std::regex_match(label, m, pattern)) throw std::invalid_argument("unrecognized algebra label '" + label + "'");
  const std::string name = m[1];
  const int n = std::stoi(m[2]);
  if (name == "FiliformReal") return GradedAlgebra::filiform_real(n);
  if (name == "FiliformComplexAsReal") return GradedAlgebra::filiform_complex_as_real(n);
  if (name == "ComplexHeisenbergAsReal") return GradedAlgebra::complex_heisenberg_as_real(n);
  throw std::invalid_argument("unrecognized algebra label '" + label + "'");
}

Matrix<Rational> ad_matrix(const GradedAlgebra& alg, const Element& x) {
  alg.check(x);
  Matrix<Rational> m(alg.dim(), alg.dim());
  for (std::size_t c = 0; c < alg.dim(); ++c) m.set_column(c, bracket(alg, x, alg.basis(c)).coords);
  return m;
}

std::size_t rank(const GradedAlgebra& alg, const Element& x) { return exact_rank(ad_matrix(alg, x)); }

std::string check_jacobi(const GradedAlgebra& alg) {
  const std::size_t n = alg.dim();
  for (std::size_t a = 0; a < n; ++a) {
    const Element x = alg.basis(a);
    for (std::size_t b = a + 1; b < n; ++b) {
      const Element y = alg.basis(b);
      for (std::size_t c = b + 1; c < n; ++c) {
        const Element z = alg.basis(c);
        Element sum = bracket(alg, x, bracket(alg, y, z)) + bracket(alg, y, bracket(alg, z, x)) +
                      bracket(alg, z, bracket(alg, x, y));
        if (!sum.is_zero()) {
          return "Jacobi fails on (" + alg.basis_name(a) + ", " + alg.basis_name(b) + ", " + alg.basis_name(c) + ")";
        }
      }
    }
  }
  return {};
}

std::string check_grading(const GradedAlgebra& alg) {
  for (const auto& sc : alg.constants()) {
    const int target = alg.weight(sc.i) + alg.weight(sc.j);
    if (target > alg.step() || alg.weight(sc.k) != target) {
      return "[" + alg.basis_name(sc.i) + ", " + alg.basis_name(sc.j) + "] leaves layer V_" + std::to_string(target);
    }
  }
  return {};
}

std::string check_carnot_condition(const GradedAlgebra& alg) {
  const auto& first = alg.layer(1);
  for (int w = 1; w < alg.step(); ++w) {
    const auto& src = alg.layer(w);
    const auto& next = alg.layer(w + 1);
    Matrix<Rational> span(next.size(), first.size() * src.size());
    std::size_t col = 0;
    for (std::size_t a = first.lo; a < first.hi; ++a) {
      for (std::size_t b = src.lo; b < src.hi; ++b, ++col) {
        Element v = bracket(alg, alg.basis(a), alg.basis(b));
        for (std::size_t k = next.lo; k < next.hi; ++k) span(k - next.lo, col) = v.coords[k];
      }
    }
    if (exact_rank(span) != next.size()) {
      return "[V_1, V_" + std::to_string(w) + "] does not span V_" + std::to_string(w + 1);
    }
  }
  return {};
}

Matrix<Rational> complex_structure_matrix(const GradedAlgebra& alg) {
  if (!alg.complex_structure()) throw std::invalid_argument(alg.label() + " has no complex structure");
  Matrix<Rational> j(alg.dim(), alg.dim());
  for (std::size_t m = 0; m + 1 < alg.dim(); m += 2) {
    j(m + 1, m) = 1;   // v -> iv
    j(m, m + 1) = -1;  // iv -> -v
  }
  return j;
}

}  // namespace carnot
