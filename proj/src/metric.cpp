#include "carnot/metric.hpp"

#include "carnot/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <future>
#include <limits>
#include <numeric>

namespace carnot {

double homogeneous_norm(const GradedAlgebra& alg, const ElementF& x) {
  alg.check(x);
  double total = 0.0;
  int weight = 1;
  for (const auto& layer : alg.layers()) {
    double sq = 0.0;
    for (std::size_t i = layer.lo; i < layer.hi; ++i) sq += x.coords[i] * x.coords[i];
    const double euclid = std::sqrt(sq);
    if (euclid > 0.0) total += weight == 1 ? euclid : std::pow(euclid, 1.0 / weight);
    ++weight;
  }
  return total;
}

double homogeneous_norm(const GradedAlgebra& alg, const Element& x) { return homogeneous_norm(alg, to_float(x)); }

double homogeneous_distance(const GradedAlgebra& alg, const Element& p, const Element& q) {
  return homogeneous_norm(alg, dynkin_product(alg, inverse(p), q));
}

double homogeneous_distance(const GradedAlgebra& alg, const ElementF& p, const ElementF& q) {
  return homogeneous_norm(alg, product(alg, inverse(p), q));
}

double HorizontalPath::length() const {
  double total = 0.0;
  for (const auto& u : controls) {
    double sq = 0.0;
    for (const auto& c : u) sq += c.get_d() * c.get_d();
    total += std::sqrt(sq);
  }
  return total * dt().get_d();
}

namespace {

Element slice_element(const GradedAlgebra& alg, const std::vector<Rational>& u, const Rational& dt) {
  Element g(alg.dim());
  const auto& v1 = alg.layer(1);
  if (u.size() != v1.size()) throw std::invalid_argument("control vector does not match dim V_1");
  for (std::size_t c = 0; c < u.size(); ++c) g.coords[v1.lo + c] = u[c] * dt;
  return g;
}

}  // namespace

Element path_displacement(const GradedAlgebra& alg, const HorizontalPath& path) {
  Element acc = alg.zero();
  const Rational dt = path.dt();
  for (const auto& u : path.controls) acc = dynkin_product(alg, acc, slice_element(alg, u, dt));
  return acc;
}

std::vector<Element> path_vertices(const GradedAlgebra& alg, const Element& start, const HorizontalPath& path) {
  std::vector<Element> out{start};
  const Rational dt = path.dt();
  for (const auto& u : path.controls) out.push_back(dynkin_product(alg, out.back(), slice_element(alg, u, dt)));
  return out;
}

namespace {

using Complex = std::complex<double>;
using ElementC = BasicElement<Complex>;

// Endpoint map z -> exp(dt u_1) * ... * exp(dt u_N) in floating point, with its Jacobian.
class EndpointModel {
 public:
  EndpointModel(const GradedAlgebra& alg, std::size_t segments)
      : alg_(alg), segments_(segments), width_(alg.layer(1).size()), offset_(alg.layer(1).lo),
        dt_(1.0 / static_cast<double>(segments)) {}

  std::size_t parameters() const { return segments_ * width_; }
  double dt() const { return dt_; }

  ElementF slice(const std::vector<double>& z, std::size_t k) const {
    ElementF g(alg_.dim());
    for (std::size_t c = 0; c < width_; ++c) g.coords[offset_ + c] = dt_ * z[k * width_ + c];
    return g;
  }

  ElementF endpoint(const std::vector<double>& z) const {
    ElementF acc(alg_.dim());
    for (std::size_t k = 0; k < segments_; ++k) acc = product(alg_, acc, slice(z, k));
    return acc;
  }

  // Endpoint and Jacobian (dim x parameters, column-major by parameter). The product
  // is a polynomial, so complex-step differentiation is exact up to rounding.
  ElementF endpoint_with_jacobian(const std::vector<double>& z, Eigen::MatrixXd& jac) const {
    const std::size_t dim = alg_.dim();
    std::vector<ElementF> prefix(segments_ + 1, ElementF(dim));
    std::vector<ElementF> suffix(segments_ + 1, ElementF(dim));
    for (std::size_t k = 0; k < segments_; ++k) prefix[k + 1] = product(alg_, prefix[k], slice(z, k));
    for (std::size_t k = segments_; k-- > 0;) suffix[k] = product(alg_, slice(z, k), suffix[k + 1]);
    jac.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(parameters()));
    constexpr double h = 1e-100;
    for (std::size_t k = 0; k < segments_; ++k) {
      const ElementC left = complexify(prefix[k]);
      const ElementC right = complexify(suffix[k + 1]);
      const ElementC base = complexify(slice(z, k));
      for (std::size_t c = 0; c < width_; ++c) {
        ElementC g = base;
        g.coords[offset_ + c] += Complex(0.0, h * dt_);
        const ElementC value = bch_product(alg_, bch_product(alg_, left, g), right);
        for (std::size_t i = 0; i < dim; ++i) {
          jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k * width_ + c)) = value.coords[i].imag() / h;
        }
      }
    }
    return prefix[segments_];
  }

 private:
  static ElementC complexify(const ElementF& x) {
    ElementC out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out.coords[i] = x.coords[i];
    return out;
  }

  const GradedAlgebra& alg_;
  std::size_t segments_;
  std::size_t width_;
  std::size_t offset_;
  double dt_;
};

// f(z) = sqrt(dt * sum |u_k|^2) + mu * |E(z) - target|^2. The first term dominates the
// path length (Cauchy-Schwarz, unit duration) and equals it for constant-speed paths.
class PenaltyObjective {
 public:
  PenaltyObjective(const EndpointModel& model, const ElementF& target) : model_(model), target_(target) {}

  void set_mu(double mu) { mu_ = mu; }

  double operator()(const std::vector<double>& z, std::vector<double>& grad) const {
    Eigen::MatrixXd jac;
    const ElementF end = model_.endpoint_with_jacobian(z, jac);
    double energy = 0.0;
    for (double v : z) energy += v * v;
    const double speed = std::sqrt(model_.dt() * energy);
    Eigen::VectorXd residual(static_cast<Eigen::Index>(end.size()));
    for (std::size_t i = 0; i < end.size(); ++i) residual(static_cast<Eigen::Index>(i)) = end[i] - target_[i];
    const Eigen::VectorXd penalty_grad = 2.0 * mu_ * (jac.transpose() * residual);
    grad.resize(z.size());
    for (std::size_t n = 0; n < z.size(); ++n) {
      grad[n] = (speed > 0.0 ? model_.dt() * z[n] / speed : 0.0) + penalty_grad(static_cast<Eigen::Index>(n));
    }
    return speed + mu_ * residual.squaredNorm();
  }

 private:
  const EndpointModel& model_;
  ElementF target_;
  double mu_ = 1.0;
};

// Limited-memory BFGS with Armijo backtracking.
template <class Objective>
void minimize_lbfgs(const Objective& f, std::vector<double>& z, int max_iterations, double tolerance) {
  constexpr std::size_t memory = 12;
  const std::size_t n = z.size();
  std::vector<double> grad;
  double value = f(z, grad);
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> direction(n), trial(n), trial_grad;
  for (int iter = 0; iter < max_iterations; ++iter) {
    // Two-loop recursion for direction = -H grad.
    direction = grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t m = s_hist.size(); m-- > 0;) {
      alpha[m] = rho_hist[m] * std::inner_product(s_hist[m].begin(), s_hist[m].end(), direction.begin(), 0.0);
      for (std::size_t i = 0; i < n; ++i) direction[i] -= alpha[m] * y_hist[m][i];
    }
    if (!s_hist.empty()) {
      const auto& s = s_hist.back();
      const auto& y = y_hist.back();
      const double gamma = std::inner_product(s.begin(), s.end(), y.begin(), 0.0) /
                           std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
      for (double& d : direction) d *= gamma;
    }
    for (std::size_t m = 0; m < s_hist.size(); ++m) {
      const double beta = rho_hist[m] * std::inner_product(y_hist[m].begin(), y_hist[m].end(), direction.begin(), 0.0);
      for (std::size_t i = 0; i < n; ++i) direction[i] += (alpha[m] - beta) * s_hist[m][i];
    }
    for (double& d : direction) d = -d;
    double slope = std::inner_product(grad.begin(), grad.end(), direction.begin(), 0.0);
    if (!(slope < 0.0)) {
      // Not a descent direction: restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) direction[i] = -grad[i];
      slope = -std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0);
      if (slope == 0.0) return;
    }
    double step = s_hist.empty() ? std::min(1.0, 1.0 / std::sqrt(-slope)) : 1.0;
    double trial_value = 0.0;
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = z[i] + step * direction[i];
      trial_value = f(trial, trial_grad);
      if (std::isfinite(trial_value) && trial_value <= value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return;
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = trial[i] - z[i];
      y[i] = trial_grad[i] - grad[i];
    }
    const double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
    if (sy > 1e-16) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double improvement = value - trial_value;
    z = trial;
    grad = trial_grad;
    value = trial_value;
    if (improvement < tolerance) return;
  }
}

struct StartResult {
  bool feasible = false;
  double length = std::numeric_limits<double>::infinity();
  double endpoint_error = std::numeric_limits<double>::infinity();
  HorizontalPath path;
};

// Newton steps on exact controls until the exact endpoint matches the target.
// Each step solves J delta = residual in floating point; the residual itself is exact.
StartResult polish(const GradedAlgebra& alg, const EndpointModel& model, std::vector<double> z_unit,
                   const Rational& scale, const Element& target, double tolerance) {
  const std::size_t width = alg.layer(1).size();
  const std::size_t segments = z_unit.size() / width;
  StartResult out;
  out.path.controls.assign(segments, std::vector<Rational>(width));
  for (std::size_t k = 0; k < segments; ++k)
    for (std::size_t c = 0; c < width; ++c) out.path.controls[k][c] = rational_from_double(z_unit[k * width + c]) * scale;
  for (int iter = 0; iter < 10; ++iter) {
    const Element end = path_displacement(alg, out.path);
    out.endpoint_error = homogeneous_distance(alg, end, target);
    if (out.endpoint_error <= tolerance * 1e-3) break;
    std::vector<double> z(segments * width);
    for (std::size_t k = 0; k < segments; ++k)
      for (std::size_t c = 0; c < width; ++c) z[k * width + c] = out.path.controls[k][c].get_d();
    Eigen::MatrixXd jac;
    model.endpoint_with_jacobian(z, jac);
    Eigen::VectorXd residual(static_cast<Eigen::Index>(alg.dim()));
    for (std::size_t i = 0; i < alg.dim(); ++i) residual(static_cast<Eigen::Index>(i)) = Rational(end[i] - target[i]).get_d();
    const Eigen::VectorXd delta = jac.completeOrthogonalDecomposition().solve(residual);
    if (!delta.allFinite()) break;
    for (std::size_t n = 0; n < z.size(); ++n) {
      out.path.controls[n / width][n % width] -= rational_from_double(delta(static_cast<Eigen::Index>(n)));
    }
  }
  out.endpoint_error = homogeneous_distance(alg, path_displacement(alg, out.path), target);
  out.feasible = out.endpoint_error <= tolerance;
  out.length = out.path.length();
  return out;
}

StartResult run_start(const GradedAlgebra& alg, const ElementF& unit_target, const Rational& scale,
                      const Element& target, const CarnotOptions& options, std::uint64_t seed) {
  const EndpointModel model(alg, options.segments);
  const std::size_t width = alg.layer(1).size();
  const auto& v1 = alg.layer(1);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Straight-line drift towards the horizontal part of the target plus a random loop.
  std::vector<double> z(model.parameters());
  for (std::size_t k = 0; k < options.segments; ++k)
    for (std::size_t c = 0; c < width; ++c) z[k * width + c] = unit_target[v1.lo + c] + normal(rng);
  PenaltyObjective objective(model, unit_target);
  // Start where the trivial path costs more than any feasible one at unit scale.
  for (double mu = 1e3; mu <= 1e8; mu *= 10.0) {
    objective.set_mu(mu);
    minimize_lbfgs(objective, z, options.iterations, options.convergence_tolerance);
  }
  return polish(alg, model, std::move(z), scale, target, options.endpoint_tolerance);
}

}  // namespace

CarnotEstimate carnot_distance_upper(const GradedAlgebra& alg, const Element& p, const Element& q,
                                     const CarnotOptions& options) {
  alg.check(p);
  alg.check(q);
  if (options.segments < 1) throw std::invalid_argument("carnot_distance_upper needs at least one segment");
  if (options.starts < 1) throw std::invalid_argument("carnot_distance_upper needs at least one start");
  const std::size_t width = alg.layer(1).size();
  const Element target = dynkin_product(alg, inverse(p), q);
  CarnotEstimate result;
  if (target.is_zero()) {
    result.path.controls.assign(options.segments, std::vector<Rational>(width, Rational(0)));
    result.start_lengths.assign(static_cast<std::size_t>(options.starts), 0.0);
    return result;
  }
  // Solve at unit homogeneous scale; dilations map horizontal paths to horizontal paths.
  const Rational scale = rational_from_double(homogeneous_norm(alg, target));
  const ElementF unit_target = to_float(dilate(alg, Rational(1 / scale), target));

  std::vector<StartResult> starts(static_cast<std::size_t>(options.starts));
  auto launch = [&](std::size_t s) {
    return run_start(alg, unit_target, scale, target, options, derive_seed(options.seed, s));
  };
  if (options.parallel && options.starts > 1) {
    std::vector<std::future<StartResult>> futures;
    for (std::size_t s = 0; s < starts.size(); ++s) futures.push_back(std::async(std::launch::async, launch, s));
    for (std::size_t s = 0; s < starts.size(); ++s) starts[s] = futures[s].get();
  } else {
    for (std::size_t s = 0; s < starts.size(); ++s) starts[s] = launch(s);
  }

  std::size_t best = starts.size();
  double best_error = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts.size(); ++s) {
    result.start_lengths.push_back(starts[s].feasible ? starts[s].length : std::numeric_limits<double>::infinity());
    best_error = std::min(best_error, starts[s].endpoint_error);
    if (starts[s].feasible && (best == starts.size() || starts[s].length < starts[best].length)) best = s;
  }
  if (best == starts.size()) {
    throw InfeasiblePath("no horizontal path reached the endpoint tolerance (best error " +
                             std::to_string(best_error) + ")",
                         best_error);
  }
  result.best_start = best;
  result.length = starts[best].length;
  result.endpoint_error = starts[best].endpoint_error;
  result.path = std::move(starts[best].path);
  return result;
}

}  // namespace carnot
