#pragma once

#include "carnot/algebra.hpp"
#include "carnot/bch.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace carnot {

/// ||x|| = sum over layers i of |x_i|^{1/i}, with |.| Euclidean on each layer's coordinates.
/// On F_R^n this is (x_1^2 + x_2^2)^{1/2} + sum_{i>=3} |x_i|^{1/(i-1)}.
double homogeneous_norm(const GradedAlgebra& alg, const ElementF& x);
double homogeneous_norm(const GradedAlgebra& alg, const Element& x);

/// d(p, q) = ||(-p) * q||. The group product is exact for rational input; only the norm is float.
double homogeneous_distance(const GradedAlgebra& alg, const Element& p, const Element& q);
double homogeneous_distance(const GradedAlgebra& alg, const ElementF& p, const ElementF& q);

/// Piecewise-constant horizontal velocity: slice k moves by exp(dt * u_k), dt = duration / N.
struct HorizontalPath {
  std::vector<std::vector<Rational>> controls;
  Rational duration = 1;

  std::size_t segments() const { return controls.size(); }
  Rational dt() const { return duration / static_cast<long>(controls.size()); }
  /// dt * sum |u_k| with the orthonormal inner product on V_1.
  double length() const;
};

/// exp(dt u_1) * ... * exp(dt u_N), exactly.
Element path_displacement(const GradedAlgebra& alg, const HorizontalPath& path);
/// start, start * exp(dt u_1), ... : the N + 1 vertices of the curve.
std::vector<Element> path_vertices(const GradedAlgebra& alg, const Element& start, const HorizontalPath& path);

struct CarnotOptions {
  std::size_t segments = 64;
  /// L-BFGS iteration cap per penalty stage.
  int iterations = 3000;
  std::uint64_t seed = 1;
  int starts = 4;
  double endpoint_tolerance = 1e-8;
  /// Stop a stage when the objective improves by less than this per iteration.
  double convergence_tolerance = 1e-10;
  bool parallel = true;
};

struct CarnotEstimate {
  double length = 0.0;
  HorizontalPath path;
  double endpoint_error = 0.0;
  std::size_t best_start = 0;
  /// Certified length of every start; infinity for starts that failed feasibility.
  std::vector<double> start_lengths;
};

/// Raised when no start reaches the endpoint tolerance; the estimate is then not a bound.
class InfeasiblePath : public std::runtime_error {
 public:
  InfeasiblePath(const std::string& what, double best_error) : std::runtime_error(what), best_error_(best_error) {}
  double best_error() const { return best_error_; }

 private:
  double best_error_;
};

/// Upper bound for the Carnot-Caratheodory distance d_c(p, q): the length of a feasible
/// horizontal path found by a penalty method, polished to exact feasibility.
CarnotEstimate carnot_distance_upper(const GradedAlgebra& alg, const Element& p, const Element& q,
                                     const CarnotOptions& options = {});

}  // namespace carnot
