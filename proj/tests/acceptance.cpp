#include "carnot/verify.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>

using namespace carnot;

namespace {

struct Outcome {
  bool pass;
  std::string summary;
};

int failures = 0;

void criterion(int number, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.pass) ++failures;
  std::printf("%s %2d %-34s %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", number, title, out.summary.c_str(), elapsed);
  std::fflush(stdout);
}

// Single-threaded so runtime limits are measured on one core.
SuiteConfig serial() {
  SuiteConfig c;
  c.parallel = false;
  return c;
}

Outcome suite_within(const std::string& name, double limit_seconds, const std::string& extra = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport r = run_suite(name, serial());
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool fast = limit_seconds <= 0 || elapsed < limit_seconds;
  std::string s = std::to_string(r.cases) + " cases, " + std::to_string(r.failures.size()) + " failures";
  if (limit_seconds > 0) s += ", limit " + std::to_string(static_cast<int>(limit_seconds)) + " s";
  if (!r.failures.empty()) s += ", first: " + Json{{"input", r.failures[0].input}, {"got", r.failures[0].got}}.dump();
  return {r.passed() && fast, s + extra};
}

}  // namespace

int main() {
  criterion(1, "exact algebra (group axioms)", [] { return suite_within("group-axioms", 30); });

  criterion(2, "closed BCH form and c_2 = 1/12", [] {
    const auto out = suite_within("bch-coeffs", 10);
    const bool c2 = bch_coefficients(3).at(2) == Rational(1, 12);
    return Outcome{out.pass && c2, out.summary + ", c_2 = " + format_rational(bch_coefficients(3).at(2))};
  });

  criterion(3, "conjugation polynomial structure", [] { return suite_within("conjugation", 0); });

  criterion(4, "rank lemmas", [] { return suite_within("rank", 5); });

  criterion(5, "dilation similarity", [] { return suite_within("dilation", 0); });

  criterion(6, "automorphism classification", [] { return suite_within("automorphisms", 0); });

  criterion(7, "shear round trip", [] { return suite_within("shear-roundtrip", 0); });

  criterion(8, "Pansu differential of F_h, h(x)=x", [] {
    const SuiteReport r = run_suite("pansu", serial());
    const auto& d = r.details["identity_profile"];
    char buf[160];
    std::snprintf(buf, sizeof buf, "max entry error %.3g, monotone %s, chain-rule worst %.3g, %zu failures",
                  d["max_entry_error"].get<double>(), d["monotone"].get<bool>() ? "yes" : "no",
                  r.details["chain_rule"]["max_entry_error"].get<double>(), r.failures.size());
    return Outcome{r.passed(), buf};
  });

  criterion(9, "lift criterion", [] { return suite_within("lift-criterion", 0); });

  criterion(10, "Morera defect", [] {
    const std::vector<Gaussian> square{Gaussian(0), Gaussian(1), Gaussian(1, 1), Gaussian(0, 1), Gaussian(0)};
    const ConjugatePolynomial wbar{{{0, 1, Gaussian(1)}}};
    const ConjugatePolynomial w2{{{2, 0, Gaussian(1)}}};
    const ConjugatePolynomial affine{{{1, 0, Gaussian(Rational(3, 2), Rational(-1))}, {0, 0, Gaussian(2, 5)}}};
    const Gaussian exact = morera_defect(wbar, square);
    bool ok = exact == Gaussian(0, 2) && morera_defect(w2, square).is_zero() && morera_defect(affine, square).is_zero();
    // Riemann sum of conj(w) dw, midpoint rule per side
    std::complex<double> sum = 0.0;
    constexpr int samples = 100000;
    for (std::size_t k = 0; k + 1 < square.size(); ++k) {
      const auto a = square[k].to_complex(), b = square[k + 1].to_complex() - a;
      for (int s = 0; s < samples; ++s) sum += std::conj(a + (s + 0.5) / samples * b) * b / double(samples);
    }
    const double gap = std::abs(sum - exact.to_complex());
    ok = ok && gap <= 1e-8;
    char buf[120];
    std::snprintf(buf, sizeof buf, "value %s, Riemann gap %.2g", format_gaussian(exact).c_str(), gap);
    return Outcome{ok, buf};
  });

  criterion(11, "geodesic upper bound d_c(o, e_3)", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport r = run_suite("geodesic", serial());
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double length = r.details.contains("length") ? r.details["length"].get<double>() : NAN;
    char buf[160];
    std::snprintf(buf, sizeof buf, "length %.7f, 2 sqrt(pi) %.7f, gap %+.2e, limit 60 s", length, 2 * std::sqrt(M_PI),
                  length - 2 * std::sqrt(M_PI));
    return Outcome{r.passed() && elapsed < 60.0, buf};
  });

  criterion(12, "distortion boundedness", [] {
    const SuiteReport r = run_suite("distortion", serial());
    const auto& s = r.details["shear"];
    char buf[200];
    std::snprintf(buf, sizeof buf, "spread %.4f vs first-1000 %.4f, max %.4f <= bound %.4f, %zu failures",
                  s["spread"].get<double>(), s["calibration_spread"].get<double>(), s["max_ratio"].get<double>(),
                  s["calibrated_bound"].get<double>(), r.failures.size());
    return Outcome{r.passed(), buf};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
