#pragma once

#include "carnot/matrix.hpp"
#include "carnot/scalar.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace carnot {

class AlgebraMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Point of the group / algebra in exponential coordinates w.r.t. the fixed basis.
template <class T>
struct BasicElement {
  std::vector<T> coords;

  BasicElement() = default;
  explicit BasicElement(std::size_t dim) : coords(dim, T(0)) {}
  explicit BasicElement(std::vector<T> c) : coords(std::move(c)) {}

  std::size_t size() const { return coords.size(); }
  T& operator[](std::size_t i) { return coords[i]; }
  const T& operator[](std::size_t i) const { return coords[i]; }

  bool is_zero() const {
    for (const auto& c : coords)
      if (!carnot::is_zero(c)) return false;
    return true;
  }

  BasicElement& operator+=(const BasicElement& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += o.coords[i];
    return *this;
  }
  BasicElement& operator-=(const BasicElement& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] -= o.coords[i];
    return *this;
  }
  BasicElement& operator*=(const T& s) {
    for (auto& c : coords) c *= s;
    return *this;
  }
  friend BasicElement operator+(BasicElement a, const BasicElement& b) { return a += b; }
  friend BasicElement operator-(BasicElement a, const BasicElement& b) { return a -= b; }
  friend BasicElement operator-(BasicElement a) {
    for (auto& c : a.coords) c = -c;
    return a;
  }
  friend BasicElement operator*(const T& s, BasicElement a) { return a *= s; }
  friend bool operator==(const BasicElement& a, const BasicElement& b) { return a.coords == b.coords; }

 private:
  void check_same_size(const BasicElement& o) const {
    if (o.coords.size() != coords.size()) throw AlgebraMismatch("element dimensions differ");
  }
};

using Element = BasicElement<Rational>;
using ElementF = BasicElement<double>;

ElementF to_float(const Element& x);

enum class AlgebraKind { FiliformReal, FiliformComplexAsReal, ComplexHeisenbergAsReal, Custom };

/// Half-open range [lo, hi) of basis indices forming one layer.
struct LayerRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t size() const { return hi - lo; }
  bool contains(std::size_t i) const { return lo <= i && i < hi; }
  friend bool operator==(const LayerRange&, const LayerRange&) = default;
};

/// Nonzero structure constant with i < j: [e_i, e_j] has coefficient c on e_k.
struct StructureConstant {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  Rational c;
};

/// A Carnot (stratified nilpotent) Lie algebra given by sparse structure constants.
///
/// Complex algebras are stored as real algebras on the interleaved basis
/// (v_1, i v_1, v_2, i v_2, ...); complex_structure() records that the pairs
/// (2m, 2m+1) carry multiplication by i.
class GradedAlgebra {
 public:
  static GradedAlgebra filiform_real(int n);
  static GradedAlgebra filiform_complex_as_real(int n);
  static GradedAlgebra complex_heisenberg_as_real(int n);
  /// Validates antisymmetric storage, Jacobi and the Carnot condition; throws on failure.
  static GradedAlgebra custom(std::size_t dim, std::vector<LayerRange> layers,
                              std::vector<StructureConstant> constants, bool complex_structure = false);

  std::size_t dim() const { return dim_; }
  int step() const { return static_cast<int>(layers_.size()); }
  const std::vector<LayerRange>& layers() const { return layers_; }
  const LayerRange& layer(int weight) const { return layers_.at(static_cast<std::size_t>(weight - 1)); }
  /// Layer number (1-based) of basis vector i.
  int weight(std::size_t i) const { return weights_.at(i); }
  AlgebraKind kind() const { return kind_; }
  /// n for the model families, 0 for custom algebras.
  int parameter() const { return parameter_; }
  std::string label() const;
  bool complex_structure() const { return complex_structure_; }
  const std::vector<StructureConstant>& constants() const { return constants_; }

  bool is_filiform() const {
    return kind_ == AlgebraKind::FiliformReal || kind_ == AlgebraKind::FiliformComplexAsReal;
  }

  Element basis(std::size_t i) const;
  ElementF basis_f(std::size_t i) const;
  Element zero() const { return Element(dim_); }

  /// Throws AlgebraMismatch unless x has this algebra's dimension.
  template <class T>
  void check(const BasicElement<T>& x) const {
    if (x.size() != dim_) {
      throw AlgebraMismatch("element of dimension " + std::to_string(x.size()) + " used with " + label() +
                            " (dimension " + std::to_string(dim_) + ")");
    }
  }

  /// Human-readable name of basis vector i ("e_1", "ie_2", "eta_1", ...).
  std::string basis_name(std::size_t i) const;

  friend bool operator==(const GradedAlgebra& a, const GradedAlgebra& b);

 private:
  GradedAlgebra(AlgebraKind kind, int parameter, std::size_t dim, std::vector<LayerRange> layers,
                std::vector<StructureConstant> constants, bool complex_structure);

  AlgebraKind kind_ = AlgebraKind::Custom;
  int parameter_ = 0;
  std::size_t dim_ = 0;
  std::vector<LayerRange> layers_;
  std::vector<int> weights_;
  std::vector<StructureConstant> constants_;
  std::vector<double> constants_f_;
  bool complex_structure_ = false;

  template <class T>
  friend BasicElement<T> bracket(const GradedAlgebra&, const BasicElement<T>&, const BasicElement<T>&);
};

/// Parses labels such as "FiliformReal(3)", "FiliformComplexAsReal(3)", "ComplexHeisenbergAsReal(1)".
GradedAlgebra algebra_from_label(const std::string& label);

template <class T>
BasicElement<T> bracket(const GradedAlgebra& alg, const BasicElement<T>& x, const BasicElement<T>& y) {
  alg.check(x);
  alg.check(y);
  BasicElement<T> out(alg.dim_);
  for (std::size_t n = 0; n < alg.constants_.size(); ++n) {
    const auto& sc = alg.constants_[n];
    const T& xi = x.coords[sc.i];
    const T& xj = x.coords[sc.j];
    const T& yi = y.coords[sc.i];
    const T& yj = y.coords[sc.j];
    if (is_zero(xi) && is_zero(xj)) continue;
    if (is_zero(yi) && is_zero(yj)) continue;
    T wedge = xi * yj - xj * yi;
    if (is_zero(wedge)) continue;
    if constexpr (std::is_same_v<T, Rational>) {
      out.coords[sc.k] += sc.c * wedge;
    } else {
      out.coords[sc.k] += alg.constants_f_[n] * wedge;
    }
  }
  return out;
}

/// Matrix of ad(x) = [x, .] in the fixed basis.
Matrix<Rational> ad_matrix(const GradedAlgebra& alg, const Element& x);

/// dim of the image of ad(x), by exact elimination. Exact scalars only.
std::size_t rank(const GradedAlgebra& alg, const Element& x);
std::size_t rank(const GradedAlgebra& alg, const ElementF& x) = delete;

/// lambda_t: multiplies layer-i coordinates by t^i. Requires t > 0.
template <class T>
BasicElement<T> dilate(const GradedAlgebra& alg, const T& t, const BasicElement<T>& x) {
  alg.check(x);
  if (!(t > 0)) throw std::domain_error("dilation factor must be positive");
  BasicElement<T> out = x;
  T factor = t;
  for (const auto& layer : alg.layers()) {
    for (std::size_t i = layer.lo; i < layer.hi; ++i) out.coords[i] *= factor;
    factor *= t;
  }
  return out;
}

/// Structural checks on an algebra; each returns a description of the first violation, or "".
std::string check_jacobi(const GradedAlgebra& alg);
std::string check_grading(const GradedAlgebra& alg);
std::string check_carnot_condition(const GradedAlgebra& alg);

/// Complex conjugation tau on a complex-as-real algebra: negates every imaginary coordinate.
template <class T>
BasicElement<T> conjugate(const GradedAlgebra& alg, const BasicElement<T>& x) {
  alg.check(x);
  if (!alg.complex_structure()) throw std::invalid_argument("conjugation requires a complex algebra; got " + alg.label());
  BasicElement<T> out = x;
  for (std::size_t i = 1; i < out.size(); i += 2) out.coords[i] = -out.coords[i];
  return out;
}

/// Multiplication by i on a complex-as-real algebra, as a real matrix.
Matrix<Rational> complex_structure_matrix(const GradedAlgebra& alg);

}  // namespace carnot
