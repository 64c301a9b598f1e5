#pragma once

#include "carnot/algebra.hpp"
#include "carnot/matrix.hpp"
#include "carnot/polynomial.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace carnot {

/// h(e_1) = a1 e_1 + b e_2, h(e_j) = a1^{j-2} a2 e_j; with `conjugated` the map is tau o h.
/// Complex parameters are only meaningful on complex algebras.
template <class S>
struct BasicAutoParams {
  S a1 = S(1);
  S a2 = S(1);
  S b = S(0);
  bool conjugated = false;

  friend bool operator==(const BasicAutoParams&, const BasicAutoParams&) = default;
};
using AutoParams = BasicAutoParams<Gaussian>;
using AutoParamsF = BasicAutoParams<std::complex<double>>;

Matrix<Rational> graded_auto_matrix(const GradedAlgebra& alg, const AutoParams& params);
Matrix<double> graded_auto_matrix(const GradedAlgebra& alg, const AutoParamsF& params);
AutoParams inverse_params(const AutoParams& params);
/// Dilation by t as a graded automorphism: (t, t, 0).
AutoParams dilation_params(const Rational& t);

/// Lipschitz profile h with its iterated antiderivatives h_2 = h, h_j = -int_0^x h_{j-1}.
class ShearSpec {
 public:
  static constexpr int kMaxIndex = 9;

  /// Throws std::invalid_argument when `lipschitz_bound` is not certified (or none can be found).
  explicit ShearSpec(PiecewisePolynomial h, std::optional<Rational> lipschitz_bound = std::nullopt);
  /// Samples joined by linear interpolation and held constant outside; the data are exact rationals.
  static ShearSpec from_samples(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

  const PiecewisePolynomial& profile() const { return h_[0]; }
  const Rational& lipschitz_bound() const { return bound_; }
  /// h_j for 2 <= j <= kMaxIndex.
  const PiecewisePolynomial& antiderivative(int j) const { return h_.at(static_cast<std::size_t>(j - 2)); }
  ShearSpec negated() const;

 private:
  ShearSpec() = default;
  std::vector<PiecewisePolynomial> h_;
  Rational bound_;
};

struct LeftTranslation {
  Element g;
};
struct GradedAuto {
  AutoParams params;
};
struct Shear {
  std::shared_ptr<const ShearSpec> spec;
};
struct Tau {};

using MapAtom = std::variant<LeftTranslation, GradedAuto, Shear, Tau>;

/// Composition of atoms; atoms[0] acts first.
struct MapExpr {
  std::vector<MapAtom> atoms;
};

Element apply(const GradedAlgebra& alg, const MapAtom& atom, const Element& p);
Element apply(const GradedAlgebra& alg, const MapExpr& map, const Element& p);
/// Input of every atom followed by the final image.
std::vector<Element> trace(const GradedAlgebra& alg, const MapExpr& map, const Element& p);
MapAtom invert(const MapAtom& atom);
MapExpr invert(const MapExpr& map);
/// Shear on F_R^n: x_1 e_1 * sum x_j e_j  ->  x_1 e_1 * sum (x_j + h_j(x_1)) e_j.
Element apply_shear(const GradedAlgebra& alg, const ShearSpec& spec, const Element& p);

/// Differential of each atom composed by the chain rule; empty at a kink of a shear profile.
std::optional<Matrix<Rational>> known_differential(const GradedAlgebra& alg, const MapExpr& map, const Element& p);

struct Rejection {
  /// One of: layer, e2-invariance, bracket, singular, complex-structure, parametric-form.
  std::string condition;
  std::string detail;
};

using Classification = std::variant<AutoParams, Rejection>;
using ClassificationF = std::variant<AutoParamsF, Rejection>;

/// Decides whether L is some h_{a1,a2,b} (or tau o h on complex algebras). Requires a filiform
/// algebra with n >= 3; throws std::invalid_argument otherwise.
Classification classify_graded_automorphism(const GradedAlgebra& alg, const Matrix<Rational>& L);
/// Floating-point variant; entries agree when they differ by at most tolerance * max |L_ij|.
ClassificationF classify_graded_automorphism(const GradedAlgebra& alg, const Matrix<double>& L,
                                             double tolerance = 1e-6);

struct PansuOptions {
  /// Strictly decreasing positive scales.
  std::vector<Rational> scales;
  /// Defaults to the basis.
  std::vector<Element> directions;
  double classify_tolerance = 1e-6;
  double monotone_slack = 1e-14;
  PansuOptions();
};

struct PansuEstimate {
  Matrix<Rational> differential;
  /// Per direction, extrapolated limit of delta_t(v).
  std::vector<Element> limits;
  /// residuals[d][s] = d(delta_{t_s}(v_d), L v_d) / ||v_d||.
  std::vector<std::vector<double>> residuals;
  bool monotone = true;
  /// A shear atom sees its argument at a breakpoint of h; the finest scale is reported unextrapolated.
  bool at_breakpoint = false;
  ClassificationF classification;
};

/// delta_t(v) = Lambda_{1/t}(F(p)^{-1} * F(p * Lambda_t v)), exact.
Element pansu_quotient(const GradedAlgebra& alg, const MapExpr& map, const Element& p, const Element& image,
                       const Rational& t, const Element& v);
PansuEstimate pansu_differential_estimate(const GradedAlgebra& alg, const MapExpr& map, const Element& p,
                                          const PansuOptions& options = {});

enum class PairSampler { ScaleSweep, Box };

struct DistortionOptions {
  std::size_t pairs = 1000;
  std::uint64_t seed = 1;
  PairSampler sampler = PairSampler::ScaleSweep;
  double scale_lo = 1e-3;
  double scale_hi = 1e3;
  /// Base points are drawn with coordinates in [-box, box].
  double box = 1.0;
  std::size_t histogram_bins = 20;
  std::size_t shard_size = 1000;
  bool parallel = true;
};

struct DistortionPair {
  double scale;
  double distance;
  double image_distance;
  double ratio;
};

struct DistortionStats {
  std::vector<DistortionPair> pairs;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double histogram_lo = 0.0;
  double histogram_hi = 0.0;
  std::vector<std::size_t> histogram;
  std::size_t redraws = 0;
};

/// Ratios d(F(p), F(q)) / d(p, q) over random pairs; pair i uses the generator of shard i / shard_size.
DistortionStats distortion_sample(const GradedAlgebra& alg, const MapExpr& map, const DistortionOptions& options);
/// min/max/histogram over a prefix of the pairs.
DistortionStats summarize(const std::vector<DistortionPair>& pairs, std::size_t bins);

}  // namespace carnot
