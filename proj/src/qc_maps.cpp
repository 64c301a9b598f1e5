#include "carnot/qc_maps.hpp"

#include "carnot/bch.hpp"
#include "carnot/metric.hpp"
#include "carnot/parallel.hpp"
#include "carnot/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace carnot {

namespace {

Rational re_part(const Gaussian& z) { return z.re; }
Rational im_part(const Gaussian& z) { return z.im; }
double re_part(const std::complex<double>& z) { return z.real(); }
double im_part(const std::complex<double>& z) { return z.imag(); }

Gaussian complex_scalar(const Rational& re, const Rational& im) { return Gaussian(re, im); }
std::complex<double> complex_scalar(double re, double im) { return {re, im}; }

template <class S>
S power(const S& base, int k) {
  S out(1);
  for (int i = 0; i < k; ++i) out = out * base;
  return out;
}

template <class S>
bool is_zero_scalar(const S& z) {
  return is_zero(re_part(z)) && is_zero(im_part(z));
}

void require_filiform(const GradedAlgebra& alg, const char* what) {
  if (!alg.is_filiform()) throw std::invalid_argument(std::string(what) + " requires a filiform algebra; got " + alg.label());
}

// Matrix of h_{a1,a2,b} (or tau o h) in the algebra's real basis.
template <class T, class S>
Matrix<T> build_auto_matrix(const GradedAlgebra& alg, const BasicAutoParams<S>& params) {
  require_filiform(alg, "graded automorphism");
  if (is_zero_scalar(params.a1) || is_zero_scalar(params.a2)) {
    throw std::invalid_argument("graded automorphism needs a1 != 0 and a2 != 0");
  }
  const std::size_t dim = alg.dim();
  Matrix<T> m(dim, dim);
  const std::size_t n1 = static_cast<std::size_t>(alg.parameter()) + 1;
  std::vector<std::pair<std::size_t, std::size_t>> cells{{0, 0}, {1, 0}};
  std::vector<S> values{params.a1, params.b};
  for (std::size_t k = 1; k < n1; ++k) {
    cells.emplace_back(k, k);
    values.push_back(power(params.a1, static_cast<int>(k) - 1) * params.a2);
  }
  if (!alg.complex_structure()) {
    if (params.conjugated || !is_zero(im_part(params.a1)) || !is_zero(im_part(params.a2)) ||
        !is_zero(im_part(params.b))) {
      throw std::invalid_argument("complex automorphism parameters on real algebra " + alg.label());
    }
    for (std::size_t c = 0; c < cells.size(); ++c) m(cells[c].first, cells[c].second) = re_part(values[c]);
    return m;
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::size_t r = 2 * cells[c].first, col = 2 * cells[c].second;
    const T re = re_part(values[c]), im = im_part(values[c]);
    m(r, col) = re;
    m(r, col + 1) = -im;
    m(r + 1, col) = im;
    m(r + 1, col + 1) = re;
  }
  if (params.conjugated) {
    for (std::size_t r = 1; r < dim; r += 2)
      for (std::size_t c = 0; c < dim; ++c) m(r, c) = -m(r, c);
  }
  return m;
}

Matrix<Rational> tau_matrix(const GradedAlgebra& alg) {
  if (!alg.complex_structure()) throw std::invalid_argument("tau requires a complex algebra; got " + alg.label());
  Matrix<Rational> t = Matrix<Rational>::identity(alg.dim());
  for (std::size_t r = 1; r < alg.dim(); r += 2) t(r, r) = -1;
  return t;
}

Element mat_vec(const Matrix<Rational>& m, const Element& x) { return Element(m * x.coords); }

}  // namespace

Matrix<Rational> graded_auto_matrix(const GradedAlgebra& alg, const AutoParams& params) {
  return build_auto_matrix<Rational>(alg, params);
}

Matrix<double> graded_auto_matrix(const GradedAlgebra& alg, const AutoParamsF& params) {
  return build_auto_matrix<double>(alg, params);
}

AutoParams inverse_params(const AutoParams& p) {
  if (p.a1.is_zero() || p.a2.is_zero()) throw std::invalid_argument("graded automorphism needs a1 != 0 and a2 != 0");
  AutoParams out{Gaussian(1) / p.a1, Gaussian(1) / p.a2, -(p.b / (p.a1 * p.a2)), p.conjugated};
  // (tau o h)^{-1} = h^{-1} o tau = tau o conj(h^{-1})
  if (p.conjugated) {
    out.a1 = out.a1.conj();
    out.a2 = out.a2.conj();
    out.b = out.b.conj();
  }
  return out;
}

AutoParams dilation_params(const Rational& t) {
  if (!(t > 0)) throw std::domain_error("dilation factor must be positive");
  return {Gaussian(t), Gaussian(t), Gaussian(0), false};
}

ShearSpec::ShearSpec(PiecewisePolynomial h, std::optional<Rational> lipschitz_bound) {
  if (lipschitz_bound) {
    if (*lipschitz_bound < 0 || !h.certify_lipschitz(*lipschitz_bound)) {
      throw std::invalid_argument("shear profile is not certified Lipschitz with bound " +
                                  format_rational(*lipschitz_bound));
    }
    bound_ = *lipschitz_bound;
  } else {
    const auto bound = h.lipschitz_upper_bound();
    if (!bound) throw std::invalid_argument("shear profile is not globally Lipschitz");
    bound_ = *bound;
  }
  h_.push_back(std::move(h));
  for (int j = 3; j <= kMaxIndex; ++j) h_.push_back(-h_.back().integral_from_zero());
}

ShearSpec ShearSpec::from_samples(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  return ShearSpec(PiecewisePolynomial::linear_interpolation(xs, ys));
}

ShearSpec ShearSpec::negated() const {
  ShearSpec out;
  out.bound_ = bound_;
  for (const auto& h : h_) out.h_.push_back(-h);
  return out;
}

Element apply_shear(const GradedAlgebra& alg, const ShearSpec& spec, const Element& p) {
  alg.check(p);
  if (alg.kind() != AlgebraKind::FiliformReal) throw std::invalid_argument("shear maps live on F_R^n; got " + alg.label());
  const int n = alg.parameter();
  if (n + 1 > ShearSpec::kMaxIndex) throw std::invalid_argument("shear supports n <= " + std::to_string(ShearSpec::kMaxIndex - 1));
  Element lead(alg.dim());
  lead.coords[0] = p.coords[0];
  Element tail = dynkin_product(alg, inverse(lead), p);
  for (int j = 2; j <= n + 1; ++j) tail.coords[static_cast<std::size_t>(j - 1)] += spec.antiderivative(j)(p.coords[0]);
  return abelian_tail_product(alg, lead, tail);
}

Element apply(const GradedAlgebra& alg, const MapAtom& atom, const Element& p) {
  alg.check(p);
  return std::visit(
      [&](const auto& a) -> Element {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, LeftTranslation>) {
          return dynkin_product(alg, a.g, p);
        } else if constexpr (std::is_same_v<A, GradedAuto>) {
          return mat_vec(graded_auto_matrix(alg, a.params), p);
        } else if constexpr (std::is_same_v<A, Shear>) {
          return apply_shear(alg, *a.spec, p);
        } else {
          return conjugate(alg, p);
        }
      },
      atom);
}

std::vector<Element> trace(const GradedAlgebra& alg, const MapExpr& map, const Element& p) {
  std::vector<Element> out{p};
  for (const auto& atom : map.atoms) out.push_back(apply(alg, atom, out.back()));
  return out;
}

Element apply(const GradedAlgebra& alg, const MapExpr& map, const Element& p) {
  Element x = p;
  for (const auto& atom : map.atoms) x = apply(alg, atom, x);
  return x;
}

MapAtom invert(const MapAtom& atom) {
  return std::visit(
      [](const auto& a) -> MapAtom {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, LeftTranslation>) {
          return LeftTranslation{inverse(a.g)};
        } else if constexpr (std::is_same_v<A, GradedAuto>) {
          return GradedAuto{inverse_params(a.params)};
        } else if constexpr (std::is_same_v<A, Shear>) {
          return Shear{std::make_shared<const ShearSpec>(a.spec->negated())};
        } else {
          return Tau{};
        }
      },
      atom);
}

MapExpr invert(const MapExpr& map) {
  MapExpr out;
  for (auto it = map.atoms.rbegin(); it != map.atoms.rend(); ++it) out.atoms.push_back(invert(*it));
  return out;
}

std::optional<Matrix<Rational>> known_differential(const GradedAlgebra& alg, const MapExpr& map, const Element& p) {
  const auto points = trace(alg, map, p);
  Matrix<Rational> total = Matrix<Rational>::identity(alg.dim());
  for (std::size_t k = 0; k < map.atoms.size(); ++k) {
    const auto& atom = map.atoms[k];
    Matrix<Rational> d = Matrix<Rational>::identity(alg.dim());
    if (const auto* g = std::get_if<GradedAuto>(&atom)) {
      d = graded_auto_matrix(alg, g->params);
    } else if (std::holds_alternative<Tau>(atom)) {
      d = tau_matrix(alg);
    } else if (const auto* s = std::get_if<Shear>(&atom)) {
      const auto slope = s->spec->profile().derivative_at(points[k].coords[0]);
      if (!slope) return std::nullopt;
      d = graded_auto_matrix(alg, AutoParams{1, 1, Gaussian(*slope), false});
    }
    total = d * total;
  }
  return total;
}

namespace {

struct ExactCompare {
  bool eq(const Rational& a, const Rational& b) const { return a == b; }
  bool zero(const Rational& a) const { return sgn(a) == 0; }
};

struct FloatCompare {
  double tol;
  bool eq(double a, double b) const { return std::abs(a - b) <= tol; }
  bool zero(double a) const { return std::abs(a) <= tol; }
};

template <class T>
BasicElement<T> column_of(const Matrix<T>& m, std::size_t c) {
  return BasicElement<T>(m.column(c));
}

template <class T, class S, class Cmp>
std::variant<BasicAutoParams<S>, Rejection> classify(const GradedAlgebra& alg, const Matrix<T>& L, const Cmp& cmp) {
  require_filiform(alg, "classify_graded_automorphism");
  if (alg.parameter() < 3) throw std::invalid_argument("classify_graded_automorphism requires n >= 3");
  const std::size_t dim = alg.dim();
  if (L.rows() != dim || L.cols() != dim) throw std::invalid_argument("matrix size does not match " + alg.label());
  const auto name = [&](std::size_t i) { return alg.basis_name(i); };

  for (std::size_t c = 0; c < dim; ++c) {
    const auto& layer = alg.layer(alg.weight(c));
    for (std::size_t r = 0; r < dim; ++r) {
      if (!layer.contains(r) && !cmp.zero(L(r, c))) {
        return Rejection{"layer", "image of " + name(c) + " has a component along " + name(r)};
      }
    }
  }

  const bool complex = alg.complex_structure();
  const std::size_t width = complex ? 2 : 1;
  for (std::size_t c = width; c < 2 * width; ++c)
    for (std::size_t r = 0; r < width; ++r)
      if (!cmp.zero(L(r, c))) return Rejection{"e2-invariance", "image of " + name(c) + " leaves the e2 line"};

  std::vector<BasicElement<T>> images;
  for (std::size_t c = 0; c < dim; ++c) images.push_back(column_of(L, c));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      BasicElement<T> lhs(dim);
      for (const auto& sc : alg.constants()) {
        if (sc.i == i && sc.j == j) {
          const T c = scalar_from_rational<T>(sc.c);
          for (std::size_t r = 0; r < dim; ++r) lhs.coords[r] += c * L(r, sc.k);
        }
      }
      const BasicElement<T> rhs = bracket(alg, images[i], images[j]);
      for (std::size_t r = 0; r < dim; ++r) {
        if (!cmp.eq(lhs.coords[r], rhs.coords[r])) {
          return Rejection{"bracket", "L[" + name(i) + "," + name(j) + "] != [L" + name(i) + ",L" + name(j) + "]"};
        }
      }
    }
  }

  for (std::size_t b = 0; b < dim; b += width) {
    const T det = complex ? T(L(b, b) * L(b + 1, b + 1) - L(b, b + 1) * L(b + 1, b)) : T(L(b, b));
    if (cmp.zero(det)) return Rejection{"singular", "diagonal block at " + name(b) + " is singular"};
  }

  Matrix<T> H = L;
  bool conjugated = false;
  if (complex) {
    bool linear = true, anti = true;
    for (std::size_t r = 0; r < dim && (linear || anti); ++r) {
      for (std::size_t c = 0; c < dim; c += 2) {
        // (LJ)(r, c) = L(r, c + 1), (LJ)(r, c + 1) = -L(r, c); JL swaps rows likewise.
        const std::size_t r0 = r - r % 2;
        const T lj0 = L(r, c + 1), lj1 = -L(r, c);
        const T jl0 = r % 2 == 0 ? T(-L(r0 + 1, c)) : T(L(r0, c));
        const T jl1 = r % 2 == 0 ? T(-L(r0 + 1, c + 1)) : T(L(r0, c + 1));
        if (!cmp.eq(lj0, jl0) || !cmp.eq(lj1, jl1)) linear = false;
        if (!cmp.eq(lj0, -jl0) || !cmp.eq(lj1, -jl1)) anti = false;
      }
    }
    if (!linear && !anti) return Rejection{"complex-structure", "neither complex linear nor complex anti-linear"};
    if (!linear) {
      conjugated = true;
      for (std::size_t r = 1; r < dim; r += 2)
        for (std::size_t c = 0; c < dim; ++c) H(r, c) = -H(r, c);
    }
  }

  BasicAutoParams<S> params;
  if (complex) {
    params.a1 = complex_scalar(H(0, 0), H(1, 0));
    params.b = complex_scalar(H(2, 0), H(3, 0));
    params.a2 = complex_scalar(H(2, 2), H(3, 2));
  } else {
    params.a1 = complex_scalar(H(0, 0), T(0));
    params.b = complex_scalar(H(1, 0), T(0));
    params.a2 = complex_scalar(H(1, 1), T(0));
  }
  params.conjugated = conjugated;
  const Matrix<T> expected = build_auto_matrix<T>(alg, params);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      if (!cmp.eq(L(r, c), expected(r, c))) {
        return Rejection{"parametric-form", "entry (" + name(r) + ", " + name(c) + ") differs from h_{a1,a2,b}"};
      }
  return params;
}

}  // namespace

Classification classify_graded_automorphism(const GradedAlgebra& alg, const Matrix<Rational>& L) {
  return classify<Rational, Gaussian>(alg, L, ExactCompare{});
}

ClassificationF classify_graded_automorphism(const GradedAlgebra& alg, const Matrix<double>& L, double tolerance) {
  double scale = 0.0;
  for (std::size_t r = 0; r < L.rows(); ++r)
    for (std::size_t c = 0; c < L.cols(); ++c) scale = std::max(scale, std::abs(L(r, c)));
  return classify<double, std::complex<double>>(alg, L, FloatCompare{tolerance * std::max(scale, 1e-300)});
}

PansuOptions::PansuOptions() : scales{Rational(1, 10), Rational(1, 100), Rational(1, 1000), Rational(1, 10000)} {}

Element pansu_quotient(const GradedAlgebra& alg, const MapExpr& map, const Element& p, const Element& image,
                       const Rational& t, const Element& v) {
  const Element moved = apply(alg, map, dynkin_product(alg, p, dilate(alg, t, v)));
  return dilate(alg, Rational(1 / t), dynkin_product(alg, inverse(image), moved));
}

PansuEstimate pansu_differential_estimate(const GradedAlgebra& alg, const MapExpr& map, const Element& p,
                                          const PansuOptions& options) {
  alg.check(p);
  const auto& scales = options.scales;
  if (scales.empty()) throw std::invalid_argument("pansu estimate needs at least one scale");
  for (std::size_t s = 0; s < scales.size(); ++s) {
    if (!(scales[s] > 0) || (s > 0 && !(scales[s] < scales[s - 1]))) {
      throw std::invalid_argument("pansu scales must be positive and strictly decreasing");
    }
  }
  const std::size_t dim = alg.dim();
  std::vector<Element> directions = options.directions;
  if (directions.empty())
    for (std::size_t i = 0; i < dim; ++i) directions.push_back(alg.basis(i));
  Matrix<Rational> V(dim, directions.size());
  for (std::size_t d = 0; d < directions.size(); ++d) {
    alg.check(directions[d]);
    V.set_column(d, directions[d].coords);
  }
  if (exact_rank(V) != dim) throw std::invalid_argument("pansu directions do not span the algebra");

  PansuEstimate out;
  const auto points = trace(alg, map, p);
  for (std::size_t k = 0; k < map.atoms.size(); ++k) {
    if (const auto* s = std::get_if<Shear>(&map.atoms[k])) {
      if (s->spec->profile().is_breakpoint(points[k].coords[0])) out.at_breakpoint = true;
    }
  }
  const Element& image = points.back();

  std::vector<std::vector<Element>> deltas(directions.size());
  Matrix<Rational> D(dim, directions.size());
  for (std::size_t d = 0; d < directions.size(); ++d) {
    for (const auto& t : scales) deltas[d].push_back(pansu_quotient(alg, map, p, image, t, directions[d]));
    Element limit = deltas[d].back();
    if (scales.size() >= 2 && !out.at_breakpoint) {
      // First-order Richardson step on the two finest scales.
      const Rational& tc = scales[scales.size() - 2];
      const Rational& tf = scales.back();
      limit = Rational(1 / (tc - tf)) * (tc * deltas[d].back() - tf * deltas[d][scales.size() - 2]);
    }
    D.set_column(d, limit.coords);
    out.limits.push_back(std::move(limit));
  }
  // L = D V^T (V V^T)^{-1}; this is D itself for the basis directions.
  Matrix<Rational> Vt(directions.size(), dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < directions.size(); ++c) Vt(c, r) = V(r, c);
  out.differential = D * Vt * exact_inverse(V * Vt);

  for (std::size_t d = 0; d < directions.size(); ++d) {
    const Element predicted = mat_vec(out.differential, directions[d]);
    const double norm = homogeneous_norm(alg, directions[d]);
    std::vector<double> row;
    for (const auto& delta : deltas[d]) row.push_back(homogeneous_distance(alg, delta, predicted) / norm);
    for (std::size_t s = 1; s < row.size(); ++s)
      if (row[s] > row[s - 1] + options.monotone_slack) out.monotone = false;
    out.residuals.push_back(std::move(row));
  }
  if (alg.is_filiform() && alg.parameter() >= 3) {
    out.classification = classify_graded_automorphism(alg, to_double(out.differential), options.classify_tolerance);
  } else {
    out.classification = Rejection{"unsupported", "classification needs a filiform algebra with n >= 3"};
  }
  return out;
}

namespace {

constexpr int kSampleBits = 24;

Element random_box_point(const GradedAlgebra& alg, Rng& rng, double box) {
  Element x(alg.dim());
  for (auto& c : x.coords) c = rational_from_double_rounded(uniform(rng, -box, box), kSampleBits);
  return x;
}

// Gaussian direction pushed to the unit homogeneous sphere by a float dilation, then made exact.
Element random_unit_sphere_point(const GradedAlgebra& alg, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    ElementF u(alg.dim());
    for (auto& c : u.coords) c = normal(rng);
    const double norm = homogeneous_norm(alg, u);
    if (norm < 1e-12) continue;
    Element out(alg.dim());
    for (std::size_t i = 0; i < u.size(); ++i) {
      out.coords[i] = rational_from_double_rounded(u[i] * std::pow(norm, -alg.weight(i)), kSampleBits);
    }
    if (!out.is_zero()) return out;
  }
}

}  // namespace

DistortionStats summarize(const std::vector<DistortionPair>& pairs, std::size_t bins) {
  DistortionStats stats;
  stats.histogram.assign(std::max<std::size_t>(bins, 1), 0);
  if (pairs.empty()) return stats;
  stats.min_ratio = stats.max_ratio = pairs.front().ratio;
  for (const auto& p : pairs) {
    stats.min_ratio = std::min(stats.min_ratio, p.ratio);
    stats.max_ratio = std::max(stats.max_ratio, p.ratio);
  }
  stats.histogram_lo = stats.min_ratio;
  stats.histogram_hi = stats.max_ratio;
  const double width = (stats.max_ratio - stats.min_ratio) / static_cast<double>(stats.histogram.size());
  for (const auto& p : pairs) {
    std::size_t bin = width > 0.0 ? static_cast<std::size_t>((p.ratio - stats.min_ratio) / width) : 0;
    stats.histogram[std::min(bin, stats.histogram.size() - 1)]++;
  }
  return stats;
}

DistortionStats distortion_sample(const GradedAlgebra& alg, const MapExpr& map, const DistortionOptions& options) {
  if (options.pairs < 2) throw std::invalid_argument("distortion_sample needs at least 2 pairs");
  if (options.shard_size == 0) throw std::invalid_argument("shard size must be positive");
  if (!(options.scale_lo > 0.0) || !(options.scale_hi >= options.scale_lo)) {
    throw std::invalid_argument("scale range must satisfy 0 < lo <= hi");
  }
  std::vector<DistortionPair> pairs(options.pairs);
  const std::size_t shards = (options.pairs + options.shard_size - 1) / options.shard_size;
  std::vector<std::size_t> redraws(shards, 0);

  auto run_shard = [&](std::size_t shard) {
    Rng rng(derive_seed(options.seed, shard));
    const std::size_t end = std::min(options.pairs, (shard + 1) * options.shard_size);
    for (std::size_t i = shard * options.shard_size; i < end; ++i) {
      for (;;) {
        const Element p = random_box_point(alg, rng, options.box);
        Element q;
        double scale = 0.0;
        if (options.sampler == PairSampler::ScaleSweep) {
          const Element u = random_unit_sphere_point(alg, rng);
          const Rational s = rational_from_double_rounded(
              std::pow(10.0, uniform(rng, std::log10(options.scale_lo), std::log10(options.scale_hi))), kSampleBits);
          scale = s.get_d();
          q = dynkin_product(alg, p, dilate(alg, s, u));
        } else {
          q = random_box_point(alg, rng, options.box);
        }
        if (p == q) {
          ++redraws[shard];
          continue;
        }
        const double d = homogeneous_distance(alg, p, q);
        if (options.sampler == PairSampler::Box) scale = d;
        const double dF = homogeneous_distance(alg, apply(alg, map, p), apply(alg, map, q));
        pairs[i] = {scale, d, dF, dF / d};
        break;
      }
    }
  };

  parallel_for(shards, options.parallel, run_shard);

  DistortionStats stats = summarize(pairs, options.histogram_bins);
  for (std::size_t r : redraws) stats.redraws += r;
  stats.pairs = std::move(pairs);
  return stats;
}

}  // namespace carnot
