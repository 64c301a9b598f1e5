#pragma once

#include "carnot/json_io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace carnot {

struct SuiteConfig {
  /// Restricts suites that range over several algebras to this one.
  std::optional<GradedAlgebra> algebra;
  std::uint64_t seed = 1;
  /// Overrides the default number of random cases per algebra (or pairs, for distortion).
  std::optional<std::size_t> cases;
  bool parallel = true;
};

struct SuiteFailure {
  Json input;
  Json expected;
  Json got;
};

struct SuiteReport {
  explicit SuiteReport(std::string name = {}) : suite(std::move(name)) {}

  std::string suite;
  std::size_t cases = 0;
  std::vector<SuiteFailure> failures;
  Json details = Json::object();

  bool passed() const { return failures.empty(); }
};

const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for an unknown suite.
SuiteReport run_suite(const std::string& name, const SuiteConfig& config = {});
Json report_to_json(const SuiteReport& report, const std::string& invocation, std::uint64_t seed);

/// Taylor coefficients of z / (1 - e^{-z}) up to z^degree, by exact power series division.
std::vector<Rational> reference_tail_coefficients(int degree);

}  // namespace carnot
