#include "carnot/verify.hpp"

#include "carnot/bch.hpp"
#include "carnot/parallel.hpp"
#include "carnot/random.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <functional>
#include <map>

namespace carnot {

namespace {

using CaseResult = std::optional<SuiteFailure>;

// Runs n independent cases and keeps failures in case order.
void run_cases(SuiteReport& report, std::size_t n, bool parallel, const std::function<CaseResult(std::size_t)>& fn) {
  std::vector<CaseResult> results(n);
  parallel_for(n, parallel, [&](std::size_t i) { results[i] = fn(i); });
  report.cases += n;
  for (auto& r : results)
    if (r) report.failures.push_back(std::move(*r));
}

Json ej(const GradedAlgebra& alg, const Element& x) { return element_to_json(alg, x); }

Json matrix_json(const Matrix<Rational>& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(format_rational(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Json params_json(const AutoParams& p) {
  return {{"a1", to_json(p.a1)}, {"a2", to_json(p.a2)}, {"b", to_json(p.b)}, {"tau", p.conjugated}};
}

std::vector<GradedAlgebra> algebras_or(const SuiteConfig& config, std::vector<GradedAlgebra> defaults,
                                       const std::function<bool(const GradedAlgebra&)>& supported) {
  if (!config.algebra) return defaults;
  if (!supported(*config.algebra)) {
    throw std::invalid_argument("suite does not support algebra " + config.algebra->label());
  }
  return {*config.algebra};
}

bool any_algebra(const GradedAlgebra&) { return true; }
bool filiform_n3(const GradedAlgebra& a) { return a.is_filiform() && a.parameter() >= 3; }

std::uint64_t case_seed(const SuiteConfig& config, std::size_t group, std::size_t index) {
  return derive_seed(derive_seed(config.seed, group), index);
}

Element random_ideal_element(const GradedAlgebra& alg, Rng& rng) {
  Element y = random_element(alg, rng);
  for (std::size_t i = alg.layer(1).lo; i < alg.layer(1).lo + (alg.complex_structure() ? 2 : 1); ++i) y.coords[i] = 0;
  return y;
}

SuiteReport group_axioms(const SuiteConfig& config) {
  SuiteReport report("group-axioms");
  std::vector<GradedAlgebra> defaults;
  for (int n = 2; n <= 6; ++n) defaults.push_back(GradedAlgebra::filiform_real(n));
  defaults.push_back(GradedAlgebra::filiform_complex_as_real(3));
  defaults.push_back(GradedAlgebra::complex_heisenberg_as_real(1));
  const auto algebras = algebras_or(config, defaults, any_algebra);
  const std::size_t per = config.cases.value_or(500);
  Json labels = Json::array();
  for (std::size_t a = 0; a < algebras.size(); ++a) {
    const auto& alg = algebras[a];
    labels.push_back(alg.label());
    run_cases(report, per, config.parallel, [&](std::size_t i) -> CaseResult {
      Rng rng(case_seed(config, a, i));
      const Element x = random_element(alg, rng), y = random_element(alg, rng), z = random_element(alg, rng);
      const Json input{{"algebra", alg.label()}, {"x", ej(alg, x)}, {"y", ej(alg, y)}, {"z", ej(alg, z)}};
      const Element o = alg.zero();
      if (!(dynkin_product(alg, x, o) == x) || !(dynkin_product(alg, o, x) == x)) {
        return SuiteFailure{input, "x * o = o * x = x", ej(alg, dynkin_product(alg, x, o))};
      }
      if (!dynkin_product(alg, x, inverse(x)).is_zero() || !dynkin_product(alg, inverse(x), x).is_zero()) {
        return SuiteFailure{input, "x * (-x) = o", ej(alg, dynkin_product(alg, x, inverse(x)))};
      }
      const Element left = dynkin_product(alg, dynkin_product(alg, x, y), z);
      const Element right = dynkin_product(alg, x, dynkin_product(alg, y, z));
      if (!(left == right)) return SuiteFailure{input, ej(alg, right), ej(alg, left)};
      return std::nullopt;
    });
  }
  report.details["algebras"] = labels;
  report.details["triples_per_algebra"] = per;
  return report;
}

SuiteReport bch_coeffs(const SuiteConfig& config) {
  SuiteReport report("bch-coeffs");
  constexpr int max_n = 8;
  const auto reference = reference_tail_coefficients(max_n);
  const auto& extracted = bch_coefficients(max_n);
  Json coeffs = Json::object();
  for (int j = 2; j <= max_n - 1; ++j) {
    coeffs[std::to_string(j)] = format_rational(extracted.at(j));
    ++report.cases;
    if (extracted.at(j) != reference[static_cast<std::size_t>(j)]) {
      report.failures.push_back({{{"coefficient", j}}, format_rational(reference[static_cast<std::size_t>(j)]),
                                 format_rational(extracted.at(j))});
    }
  }
  report.details["c"] = coeffs;

  std::vector<GradedAlgebra> defaults;
  for (int n = 3; n <= 6; ++n) defaults.push_back(GradedAlgebra::filiform_real(n));
  defaults.push_back(GradedAlgebra::filiform_complex_as_real(3));
  const auto algebras = algebras_or(config, defaults, [](const GradedAlgebra& a) { return a.is_filiform(); });
  const std::size_t per = config.cases.value_or(500);
  for (std::size_t a = 0; a < algebras.size(); ++a) {
    const auto& alg = algebras[a];
    run_cases(report, per, config.parallel, [&](std::size_t i) -> CaseResult {
      Rng rng(case_seed(config, a, i));
      const Element x = random_element(alg, rng);
      const Element y = random_ideal_element(alg, rng);
      const Json input{{"algebra", alg.label()}, {"x", ej(alg, x)}, {"y", ej(alg, y)}};
      const Element forward = dynkin_product(alg, x, y);
      const Element tail = abelian_tail_product(alg, x, y);
      if (!(forward == tail)) return SuiteFailure{input, ej(alg, forward), ej(alg, tail)};
      const Element backward = dynkin_product(alg, y, x);
      const Element reversed = abelian_tail_product_reversed(alg, y, x);
      if (!(backward == reversed)) return SuiteFailure{input, ej(alg, backward), ej(alg, reversed)};
      return std::nullopt;
    });
  }
  return report;
}

// exp(-t ad e_1) y as a finite sum.
Element exp_minus_t_ad_e1(const GradedAlgebra& alg, const Rational& t, const Element& y) {
  Element term = y, sum = y;
  for (int k = 1; k <= alg.step(); ++k) {
    term = bracket(alg, alg.basis(0), term);
    term *= Rational(-t) / Rational(k);
    sum += term;
  }
  return sum;
}

SuiteReport conjugation(const SuiteConfig& config) {
  SuiteReport report("conjugation");
  const auto algebras = algebras_or(
      config, {GradedAlgebra::filiform_real(3), GradedAlgebra::filiform_real(4), GradedAlgebra::filiform_real(5)},
      [](const GradedAlgebra& a) { return a.kind() == AlgebraKind::FiliformReal && a.parameter() >= 2; });
  const std::size_t per = config.cases.value_or(100);
  for (std::size_t a = 0; a < algebras.size(); ++a) {
    const auto& alg = algebras[a];
    const int n = alg.parameter();
    run_cases(report, per, config.parallel, [&](std::size_t i) -> CaseResult {
      Rng rng(case_seed(config, a, i));
      const Element y = random_ideal_element(alg, rng);
      const Rational t = random_rational(rng);
      const Json input{{"algebra", alg.label()}, {"y", ej(alg, y)}, {"t", format_rational(t)}};
      const Element conj = conjugate_by_horizontal(alg, Gaussian(t), y);
      const Element oracle = exp_minus_t_ad_e1(alg, t, y);
      if (!(conj == oracle)) return SuiteFailure{input, ej(alg, oracle), ej(alg, conj)};
      // coordinate j is a polynomial in t of degree <= j - 2; interpolate it on n + 1 nodes
      std::vector<Element> samples;
      for (int s = 0; s <= n; ++s) samples.push_back(conjugate_by_horizontal(alg, Gaussian(Rational(s)), y));
      for (int j = 2; j <= n + 1; ++j) {
        std::vector<std::pair<Rational, Rational>> pts;
        for (int s = 0; s <= n; ++s) pts.emplace_back(Rational(s), samples[static_cast<std::size_t>(s)][static_cast<std::size_t>(j - 1)]);
        const Polynomial p = Polynomial::interpolate(pts);
        const Rational constant = y[static_cast<std::size_t>(j - 1)];
        const Rational linear = -y[static_cast<std::size_t>(j - 2)];
        if (p.coefficient(0) != constant || p.coefficient(1) != linear || p.degree() > j - 2) {
          return SuiteFailure{Json{{"input", input}, {"coordinate", j}},
                              Json{{"constant", format_rational(constant)}, {"linear", format_rational(linear)},
                                   {"max_degree", j - 2}},
                              Json{{"constant", format_rational(p.coefficient(0))},
                                   {"linear", format_rational(p.coefficient(1))}, {"degree", p.degree()}}};
        }
      }
      if (n == 3) {
        const Rational x2 = y[1], x3 = y[2], x4 = y[3];
        const Rational closed = x4 - t * x3 + t * t * x2 / 2;
        if (conj[3] != closed) return SuiteFailure{input, format_rational(closed), format_rational(conj[3])};
      }
      return std::nullopt;
    });
  }
  return report;
}

SuiteReport rank_suite(const SuiteConfig& config) {
  SuiteReport report("rank");
  std::vector<GradedAlgebra> defaults;
  for (int n = 3; n <= 5; ++n) defaults.push_back(GradedAlgebra::filiform_real(n));
  for (int n = 3; n <= 5; ++n) defaults.push_back(GradedAlgebra::filiform_complex_as_real(n));
  const auto algebras = algebras_or(config, defaults, filiform_n3);
  const std::size_t per = config.cases.value_or(200);
  for (std::size_t a = 0; a < algebras.size(); ++a) {
    const auto& alg = algebras[a];
    // rank 1 over the scalars: 1 real dimension, or 2 for the complex algebras
    const std::size_t low_rank = alg.complex_structure() ? 2 : 1;
    const std::size_t width = alg.complex_structure() ? 2 : 1;
    run_cases(report, per, config.parallel, [&](std::size_t i) -> CaseResult {
      Rng rng(case_seed(config, a, i));
      Element x;
      do {
        x = random_horizontal(alg, rng);
        if (i % 4 == 0)
          for (std::size_t c = 0; c < width; ++c) x.coords[c] = 0;
      } while (x.is_zero());
      bool a_zero = true;
      for (std::size_t c = 0; c < width; ++c) a_zero = a_zero && sgn(x[c]) == 0;
      const std::size_t r = rank(alg, x);
      if ((r == low_rank) != a_zero) {
        return SuiteFailure{{{"algebra", alg.label()}, {"x", ej(alg, x)}},
                            Json{{"a_is_zero", a_zero}, {"low_rank", low_rank}}, Json{{"rank", r}}};
      }
      return std::nullopt;
    });
  }
  return report;
}

SuiteReport dilation(const SuiteConfig& config) {
  SuiteReport report("dilation");
  const GradedAlgebra alg = config.algebra.value_or(GradedAlgebra::filiform_real(4));
  const std::size_t per = config.cases.value_or(1000);
  const std::vector<Rational> factors{Rational(1, 4), Rational(1, 2), Rational(2), Rational(4)};
  report.details["algebra"] = alg.label();
  run_cases(report, per, config.parallel, [&](std::size_t i) -> CaseResult {
    Rng rng(case_seed(config, 0, i));
    const Element p = random_element(alg, rng), q = random_element(alg, rng);
    const double d = homogeneous_distance(alg, p, q);
    for (const auto& t : factors) {
      const double dt = homogeneous_distance(alg, dilate(alg, t, p), dilate(alg, t, q));
      const double expected = t.get_d() * d;
      if (std::abs(dt - expected) > 1e-12 * expected) {
        return SuiteFailure{{{"p", ej(alg, p)}, {"q", ej(alg, q)}, {"t", format_rational(t)}}, expected, dt};
      }
    }
    return std::nullopt;
  });
  return report;
}

AutoParams random_params(Rng& rng, bool complex) {
  auto draw = [&] { return complex ? Gaussian(random_rational(rng), random_rational(rng)) : Gaussian(random_rational(rng)); };
  AutoParams p;
  do p.a1 = draw(); while (p.a1.is_zero());
  do p.a2 = draw(); while (p.a2.is_zero());
  p.b = draw();
  p.conjugated = complex && (rng() & 1U);
  return p;
}

SuiteReport automorphisms(const SuiteConfig& config) {
  SuiteReport report("automorphisms");
  const auto algebras = algebras_or(config,
                                    {GradedAlgebra::filiform_real(3), GradedAlgebra::filiform_real(4),
                                     GradedAlgebra::filiform_real(5), GradedAlgebra::filiform_complex_as_real(3)},
                                    filiform_n3);
  const std::size_t total = config.cases.value_or(1000);
  std::size_t accepted = 0, rejected = 0;
  std::map<std::string, std::size_t> reasons;
  std::mutex tally;
  for (std::size_t a = 0; a < algebras.size(); ++a) {
    const auto& alg = algebras[a];
    const std::size_t per = total / algebras.size() + (a < total % algebras.size() ? 1 : 0);
    run_cases(report, per, config.parallel, [&](std::size_t i) -> CaseResult {
      Rng rng(case_seed(config, a, i));
      const AutoParams params = random_params(rng, alg.complex_structure());
      Matrix<Rational> m = graded_auto_matrix(alg, params);
      const bool perturb = i % 2 == 1;
      Json input{{"algebra", alg.label()}, {"params", params_json(params)}};
      if (perturb) {
        // Off the family: every single-entry change except the real b entry breaks some condition.
        std::uniform_int_distribution<std::size_t> idx(0, alg.dim() - 1);
        std::size_t r, c;
        do {
          r = idx(rng);
          c = idx(rng);
        } while (!alg.complex_structure() && r == 1 && c == 0);
        const Rational delta = random_nonzero_rational(rng);
        m(r, c) += delta;
        input["perturbed"] = {{"row", r}, {"col", c}, {"delta", format_rational(delta)}};
      }
      const auto cls = classify_graded_automorphism(alg, m);
      std::lock_guard lock(tally);
      if (const auto* rej = std::get_if<Rejection>(&cls)) {
        ++rejected;
        ++reasons[rej->condition];
        if (!perturb) return SuiteFailure{input, params_json(params), Json{{"rejected", rej->condition}, {"detail", rej->detail}}};
      } else {
        ++accepted;
        const auto& got = std::get<AutoParams>(cls);
        if (perturb) return SuiteFailure{input, "reject", params_json(got)};
        if (!(got == params)) return SuiteFailure{input, params_json(params), params_json(got)};
      }
      return std::nullopt;
    });
  }
  report.details["accepted"] = accepted;
  report.details["rejected"] = rejected;
  Json r = Json::object();
  for (const auto& [k, v] : reasons) r[k] = v;
  report.details["rejection_reasons"] = r;
  return report;
}

SuiteReport shear_roundtrip(const SuiteConfig& config) {
  SuiteReport report("shear-roundtrip");
  std::vector<GradedAlgebra> defaults{GradedAlgebra::filiform_real(3), GradedAlgebra::filiform_real(4),
                                      GradedAlgebra::filiform_real(5)};
  const auto algebras = algebras_or(config, defaults, [](const GradedAlgebra& a) {
    return a.kind() == AlgebraKind::FiliformReal && a.parameter() + 1 <= ShearSpec::kMaxIndex;
  });
  constexpr std::size_t profiles = 20;
  const std::size_t per = config.cases.value_or(1000);
  for (std::size_t k = 0; k < profiles; ++k) {
    const auto& alg = algebras[k % algebras.size()];
    Rng profile_rng(case_seed(config, 1000 + k, 0));
    const auto spec = std::make_shared<const ShearSpec>(random_piecewise_polynomial(profile_rng));
    const MapExpr forward{{Shear{spec}}};
    const MapExpr backward = invert(forward);
    run_cases(report, per, config.parallel, [&](std::size_t i) -> CaseResult {
      Rng rng(case_seed(config, k, i));
      const Element p = random_element(alg, rng);
      const Element image = apply(alg, forward, p);
      const Element back = apply(alg, backward, image);
      if (!(back == p)) {
        return SuiteFailure{{{"algebra", alg.label()}, {"map", map_to_json(alg, forward)}, {"p", ej(alg, p)}},
                            ej(alg, p), ej(alg, back)};
      }
      return std::nullopt;
    });
  }
  report.details["profiles"] = profiles;
  report.details["points_per_profile"] = per;
  return report;
}

double max_entry_error(const Matrix<double>& a, const Matrix<double>& b) {
  double err = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) err = std::max(err, std::abs(a(r, c) - b(r, c)));
  return err;
}

SuiteReport pansu(const SuiteConfig& config) {
  SuiteReport report("pansu");
  const auto alg = GradedAlgebra::filiform_real(3);
  {
    ++report.cases;
    const auto spec = std::make_shared<const ShearSpec>(PiecewisePolynomial(Polynomial({Rational(0), Rational(1)})), Rational(1));
    const MapExpr shear{{Shear{spec}}};
    const auto est = pansu_differential_estimate(alg, shear, alg.zero());
    const auto expected = graded_auto_matrix(alg, AutoParams{1, 1, 1, false});
    const double err = max_entry_error(to_double(est.differential), to_double(expected));
    Json residuals = Json::array();
    for (const auto& row : est.residuals) residuals.push_back(row);
    report.details["identity_profile"] = {{"max_entry_error", err}, {"monotone", est.monotone}, {"residuals", residuals},
                                          {"classified", std::holds_alternative<AutoParamsF>(est.classification)}};
    if (err > 1e-4 || !est.monotone || !std::holds_alternative<AutoParamsF>(est.classification)) {
      report.failures.push_back({{{"map", map_to_json(alg, shear)}, {"p", ej(alg, alg.zero())}}, matrix_json(expected),
                                 Json{{"differential", matrix_json(est.differential)}, {"monotone", est.monotone}}});
    }
  }
  const std::size_t per = config.cases.value_or(20);
  std::atomic<std::size_t> skipped{0};
  double worst = 0.0;
  std::mutex worst_mutex;
  run_cases(report, per, config.parallel, [&](std::size_t i) -> CaseResult {
    Rng rng(case_seed(config, 1, i));
    MapExpr m;
    m.atoms.push_back(LeftTranslation{random_element(alg, rng, 3, 3)});
    m.atoms.push_back(Shear{std::make_shared<const ShearSpec>(random_piecewise_polynomial(rng))});
    AutoParams params;
    params.a1 = random_nonzero_rational(rng, 3, 3);
    params.a2 = random_nonzero_rational(rng, 3, 3);
    params.b = random_rational(rng, 3, 3);
    m.atoms.push_back(GradedAuto{params});
    const Element p = random_element(alg, rng, 3, 3);
    const auto known = known_differential(alg, m, p);
    PansuOptions opts;
    opts.scales = {Rational(1, 10), Rational(1, 100), Rational(1, 1000)};
    const auto est = pansu_differential_estimate(alg, m, p, opts);
    if (!known || est.at_breakpoint) {
      ++skipped;
      return std::nullopt;
    }
    const double err = max_entry_error(to_double(*known), to_double(est.differential));
    {
      std::lock_guard lock(worst_mutex);
      worst = std::max(worst, err);
    }
    if (err > 1e-4) {
      return SuiteFailure{{{"map", map_to_json(alg, m)}, {"p", ej(alg, p)}}, matrix_json(*known),
                          Json{{"differential", matrix_json(est.differential)}, {"max_entry_error", err}}};
    }
    return std::nullopt;
  });
  report.details["chain_rule"] = {{"cases", per}, {"skipped_at_breakpoints", skipped.load()}, {"max_entry_error", worst}};
  return report;
}

Element horizontal(const GradedAlgebra& alg, std::initializer_list<long> c) {
  Element x(alg.dim());
  std::size_t i = alg.layer(1).lo;
  for (long v : c) x.coords[i++] = v;
  return x;
}

SuiteReport lift_criterion(const SuiteConfig& config) {
  SuiteReport report("lift-criterion");
  const GradedAlgebra alg = config.algebra.value_or(GradedAlgebra::complex_heisenberg_as_real(1));
  if (alg.step() != 2) throw std::invalid_argument("lift-criterion needs a step-2 algebra");
  const std::size_t per = config.cases.value_or(100);
  run_cases(report, per, config.parallel, [&](std::size_t i) -> CaseResult {
    Rng rng(case_seed(config, 0, i));
    Polyline c;
    c.closed = true;
    const int corners = 3 + static_cast<int>(i % 6);
    for (int k = 0; k < corners; ++k) c.vertices.push_back(random_horizontal(alg, rng));
    c.vertices.push_back(c.vertices.front());
    const Json input{{"algebra", alg.label()}, {"vertices", static_cast<int>(c.vertices.size())}, {"case", i}};
    const Element alpha = alpha_integral(alg, c);
    const auto lift = horizontal_lift(alg, c, alg.zero());
    if (!(lift.defect == Rational(1, 2) * alpha)) return SuiteFailure{input, ej(alg, Rational(1, 2) * alpha), ej(alg, lift.defect)};
    Polyline loop{c.vertices, true};
    loop.vertices.pop_back();
    for (auto it = c.vertices.rbegin(); it != c.vertices.rend(); ++it) loop.vertices.push_back(*it);
    const auto back_and_forth = horizontal_lift(alg, loop, alg.zero());
    if (!back_and_forth.defect.is_zero()) return SuiteFailure{input, "zero defect for a back-and-forth loop", ej(alg, back_and_forth.defect)};
    return std::nullopt;
  });

  const auto heis = GradedAlgebra::filiform_real(2);
  const Polyline square{{horizontal(heis, {0, 0}), horizontal(heis, {1, 0}), horizontal(heis, {1, 1}),
                         horizontal(heis, {0, 1}), horizontal(heis, {0, 0})},
                        true};
  ++report.cases;
  const Element defect = horizontal_lift(heis, square, heis.zero()).defect;
  if (!(defect == heis.basis(2))) report.failures.push_back({"unit square in " + heis.label(), ej(heis, heis.basis(2)), ej(heis, defect)});

  const std::vector<Gaussian> w_square{Gaussian(0), Gaussian(1), Gaussian(1, 1), Gaussian(0, 1), Gaussian(0)};
  const std::vector<std::pair<std::string, std::pair<ConjugatePolynomial, Gaussian>>> morera{
      {"conj(w)", {ConjugatePolynomial{{{0, 1, Gaussian(1)}}}, Gaussian(0, 2)}},
      {"w^2", {ConjugatePolynomial{{{2, 0, Gaussian(1)}}}, Gaussian(0)}},
      {"(2-i) w + 3", {ConjugatePolynomial{{{1, 0, Gaussian(2, -1)}, {0, 0, Gaussian(3)}}}, Gaussian(0)}},
  };
  for (const auto& [name, entry] : morera) {
    ++report.cases;
    const Gaussian got = morera_defect(entry.first, w_square);
    if (!(got == entry.second)) report.failures.push_back({"morera " + name + " on the unit square", to_json(entry.second), to_json(got)});
  }
  report.details["unit_square_defect"] = ej(heis, defect);
  report.details["morera_conj_w_unit_square"] = to_json(morera_defect(morera[0].second.first, w_square));
  return report;
}

SuiteReport geodesic(const SuiteConfig& config) {
  SuiteReport report("geodesic");
  const auto alg = GradedAlgebra::filiform_real(2);
  CarnotOptions opts;
  opts.seed = config.seed;
  opts.parallel = config.parallel;
  if (config.cases) opts.segments = *config.cases;
  const double target = 2.0 * std::sqrt(M_PI);
  ++report.cases;
  try {
    const auto est = carnot_distance_upper(alg, alg.zero(), alg.basis(2), opts);
    report.details = {{"segments", opts.segments}, {"length", est.length}, {"reference", target},
                      {"endpoint_error", est.endpoint_error}};
    if (!(est.length >= target - 1e-9) || est.length - target > 5e-3) {
      report.failures.push_back({{{"target", ej(alg, alg.basis(2))}, {"segments", opts.segments}},
                                 "within 5e-3 of 2 sqrt(pi), from above", est.length});
    }
  } catch (const InfeasiblePath& e) {
    report.failures.push_back({{{"target", ej(alg, alg.basis(2))}}, "feasible path", e.what()});
  }
  return report;
}

SuiteReport distortion(const SuiteConfig& config) {
  SuiteReport report("distortion");
  const auto alg = GradedAlgebra::filiform_real(3);
  const auto spec = std::make_shared<const ShearSpec>(PiecewisePolynomial(Polynomial({Rational(0), Rational(1)})), Rational(1));
  DistortionOptions opts;
  opts.pairs = config.cases.value_or(100000);
  opts.seed = config.seed;
  opts.parallel = config.parallel;
  const auto stats = distortion_sample(alg, MapExpr{{Shear{spec}}}, opts);
  const std::size_t calibration = std::min<std::size_t>(1000, opts.pairs);
  const auto first = summarize({stats.pairs.begin(), stats.pairs.begin() + static_cast<long>(calibration)}, 1);
  const double spread_all = stats.max_ratio / stats.min_ratio;
  const double spread_first = first.max_ratio / first.min_ratio;
  const double bound = 1.5 * first.max_ratio;
  report.cases += 2;
  report.details["shear"] = {{"pairs", opts.pairs}, {"min_ratio", stats.min_ratio}, {"max_ratio", stats.max_ratio},
                             {"spread", spread_all}, {"calibration_spread", spread_first},
                             {"calibrated_bound", bound}, {"histogram", stats.histogram}};
  if (!(spread_all / spread_first < 1.5)) {
    report.failures.push_back({"max/min ratio over all pairs vs first 1000", Json{{"below", 1.5 * spread_first}}, spread_all});
  }
  if (stats.max_ratio > bound) report.failures.push_back({"max ratio vs calibrated bound", bound, stats.max_ratio});

  DistortionOptions small = opts;
  small.pairs = calibration;
  std::vector<std::pair<std::string, std::pair<MapExpr, double>>> similarities{
      {"dilation 1/4", {MapExpr{{GradedAuto{dilation_params(Rational(1, 4))}}}, 0.25}},
      {"dilation 3", {MapExpr{{GradedAuto{dilation_params(Rational(3))}}}, 3.0}},
      {"translation", {MapExpr{{LeftTranslation{horizontal(alg, {2, -1}) + alg.basis(3)}}}, 1.0}},
  };
  for (const auto& [name, entry] : similarities) {
    const auto s = distortion_sample(alg, entry.first, small);
    report.cases += 1;
    const double worst = std::max(std::abs(s.max_ratio - entry.second), std::abs(s.min_ratio - entry.second));
    report.details[name] = {{"min_ratio", s.min_ratio}, {"max_ratio", s.max_ratio}};
    if (worst > 1e-12 * entry.second) report.failures.push_back({name, entry.second, Json{{"min", s.min_ratio}, {"max", s.max_ratio}}});
  }
  return report;
}

}  // namespace

std::vector<Rational> reference_tail_coefficients(int degree) {
  // 1 - e^{-z} = z * D(z) with D_k = (-1)^k / (k + 1)!; the series is 1 / D.
  std::vector<Rational> d(static_cast<std::size_t>(degree) + 1);
  mpz_class factorial = 1;
  for (int k = 0; k <= degree; ++k) {
    factorial *= k + 1;
    d[static_cast<std::size_t>(k)] = Rational(k % 2 == 0 ? 1 : -1) / Rational(factorial);
  }
  std::vector<Rational> a(static_cast<std::size_t>(degree) + 1);
  a[0] = 1;
  for (int m = 1; m <= degree; ++m) {
    Rational s = 0;
    for (int k = 1; k <= m; ++k) s += d[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(m - k)];
    a[static_cast<std::size_t>(m)] = -s;
  }
  return a;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"group-axioms", "bch-coeffs",      "conjugation", "rank",
                                              "dilation",     "automorphisms",   "shear-roundtrip",
                                              "pansu",        "lift-criterion", "distortion",  "geodesic"};
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
  static const std::map<std::string, std::function<SuiteReport(const SuiteConfig&)>> suites{
      {"group-axioms", group_axioms}, {"bch-coeffs", bch_coeffs},       {"conjugation", conjugation},
      {"rank", rank_suite},           {"dilation", dilation},           {"automorphisms", automorphisms},
      {"shear-roundtrip", shear_roundtrip}, {"pansu", pansu},          {"lift-criterion", lift_criterion},
      {"distortion", distortion},     {"geodesic", geodesic}};
  const auto it = suites.find(name);
  if (it == suites.end()) throw std::invalid_argument("unknown suite \"" + name + "\"");
  return it->second(config);
}

Json report_to_json(const SuiteReport& report, const std::string& invocation, std::uint64_t seed) {
  Json failures = Json::array();
  for (const auto& f : report.failures) failures.push_back({{"input", f.input}, {"expected", f.expected}, {"got", f.got}});
  return {{"suite", report.suite},      {"invocation", invocation}, {"seed", seed},
          {"cases", report.cases},      {"passed", report.passed()}, {"failures", failures},
          {"details", report.details}};
}

}  // namespace carnot
