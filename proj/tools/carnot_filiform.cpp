#include "carnot/bch.hpp"
#include "carnot/json_io.hpp"
#include "carnot/metric.hpp"
#include "carnot/qc_maps.hpp"
#include "carnot/two_step.hpp"
#include "carnot/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace carnot;

namespace {

enum Exit { kOk = 0, kVerificationFailed = 1, kUsage = 2, kInfeasible = 3 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  std::string algebra = "FiliformReal(3)";
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw UsageError("cannot write " + g.out);
  f << text;
}

void emit_json(const Globals& g, const Json& j) { emit(g, j.dump(2) + "\n"); }

void require_json(const Globals& g, const char* command) {
  if (g.format != "json") throw UsageError(std::string(command) + " only supports --format json");
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_rational(item));
  return out;
}

std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations on filiform and complex Heisenberg Carnot groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--algebra", g.algebra, "Algebra label such as FiliformReal(3), or a JSON algebra file")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--out", g.out, "Write output to this file instead of stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  std::string x_text, y_text, p_text, q_text, map_path, curve_path, g_path, start_text = "0", scales_text,
      metric = "homogeneous", csv_path, sampler = "scale-sweep", suite, matrix_path;
  int coeff_n = 8;
  std::size_t segments = 64, pairs = 1000, bins = 20;
  int starts = 4;
  std::optional<std::size_t> cases;
  bool invert_map = false, timing = false, serial = false;

  auto* mul = app.add_subcommand("mul", "Group product x * y");
  mul->add_option("--x", x_text, "Left factor")->required();
  mul->add_option("--y", y_text, "Right factor")->required();

  auto* coeffs = app.add_subcommand("bch-coeffs", "Coefficients c_j of the closed product formula");
  coeffs->add_option("--n", coeff_n, "Filiform index n; reports c_2..c_{n-1}")->check(CLI::Range(3, kDefaultMaxBchStep))->capture_default_str();

  auto* dist = app.add_subcommand("dist", "Distance between two points");
  dist->add_option("--p", p_text, "First point")->required();
  dist->add_option("--q", q_text, "Second point")->required();
  dist->add_option("--metric", metric, "homogeneous or carnot-upper")
      ->check(CLI::IsMember({"homogeneous", "carnot-upper"}))
      ->capture_default_str();

  auto* geo = app.add_subcommand("geodesic", "Short horizontal path between two points");
  geo->add_option("--p", p_text, "Start")->default_str("0");
  geo->add_option("--q", q_text, "End")->required();
  geo->add_option("--csv", csv_path, "Also write the vertex trace as CSV");
  for (auto* sub : {dist, geo}) {
    sub->add_option("--segments", segments, "Piecewise-constant control segments")->check(CLI::PositiveNumber);
    sub->add_option("--starts", starts, "Optimizer starts")->check(CLI::PositiveNumber);
    sub->add_flag("--serial", serial, "Run starts sequentially");
  }

  auto* apply_cmd = app.add_subcommand("apply-map", "Evaluate a map expression at a point");
  apply_cmd->add_option("--map", map_path, "Map JSON file")->required();
  apply_cmd->add_option("--p", p_text, "Point")->required();
  apply_cmd->add_flag("--invert", invert_map, "Apply the inverse map");

  auto* classify_cmd = app.add_subcommand("classify", "Classify a matrix as a graded automorphism");
  classify_cmd->add_option("--matrix", matrix_path, "JSON file with a square matrix (rows of rationals)")->required();

  auto* pansu_cmd = app.add_subcommand("pansu", "Estimate the Pansu differential of a map");
  pansu_cmd->add_option("--map", map_path, "Map JSON file")->required();
  pansu_cmd->add_option("--p", p_text, "Base point")->default_str("0");
  pansu_cmd->add_option("--scales", scales_text, "Comma separated decreasing scales")->default_str("1/10,1/100,1/1000,1/10000");

  auto* dist_cmd = app.add_subcommand("distortion", "Sample distance ratios of a map");
  dist_cmd->add_option("--map", map_path, "Map JSON file")->required();
  dist_cmd->add_option("--n", pairs, "Number of pairs")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))->capture_default_str();
  dist_cmd->add_option("--sampler", sampler, "scale-sweep or box")->check(CLI::IsMember({"scale-sweep", "box"}))->capture_default_str();
  dist_cmd->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber)->capture_default_str();
  dist_cmd->add_option("--csv", csv_path, "Also write per-pair rows as CSV");

  auto* lift = app.add_subcommand("lift", "Horizontal lift of a polygonal curve");
  lift->add_option("--curve", curve_path, "Curve JSON file")->required();
  lift->add_option("--start", start_text, "Initial V_2 component (comma separated, or 0)")->capture_default_str();

  auto* alpha = app.add_subcommand("alpha", "Integral of the V_2-valued form alpha along a curve");
  alpha->add_option("--curve", curve_path, "Curve JSON file")->required();

  auto* morera = app.add_subcommand("morera", "Contour integral of g(w) dw");
  morera->add_option("--g", g_path, "Integrand JSON file")->required();
  morera->add_option("--curve", curve_path, "Closed polygon JSON file with [re, im] vertices")->required();

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "Suite name")->required();
  verify->add_option("--cases", cases, "Override the number of random cases");
  verify->add_flag("--timing", timing, "Include elapsed time in the report");
  verify->add_flag("--serial", serial, "Run cases sequentially");
  bool algebra_given = false;

  try {
    app.parse(argc, argv);
    algebra_given = app.get_option("--algebra")->count() > 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::string invocation = "carnot-filiform";
  // --out only names the destination, so it is left out to keep reports comparable.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out") {
      ++i;
      continue;
    }
    if (arg.rfind("--out=", 0) == 0) continue;
    invocation += " " + arg;
  }

  try {
    const GradedAlgebra alg = load_algebra(g.algebra);
    if (*mul) {
      require_json(g, "mul");
      emit_json(g, element_to_json(alg, dynkin_product(alg, parse_element(alg, x_text), parse_element(alg, y_text))));
    } else if (*coeffs) {
      require_json(g, "bch-coeffs");
      const auto& c = bch_coefficients(coeff_n);
      Json out = Json::object();
      for (int j = 2; j <= coeff_n - 1; ++j) out[std::to_string(j)] = format_rational(c.at(j));
      emit_json(g, {{"n", coeff_n}, {"c", out}});
    } else if (*dist || *geo) {
      const Element p = p_text.empty() || p_text == "0" ? alg.zero() : parse_element(alg, p_text);
      const Element q = parse_element(alg, q_text);
      if (*dist && metric == "homogeneous") {
        require_json(g, "dist");
        emit_json(g, {{"metric", metric}, {"distance", homogeneous_distance(alg, p, q)}});
        return kOk;
      }
      CarnotOptions opts;
      opts.segments = segments;
      opts.starts = starts;
      opts.seed = g.seed;
      opts.parallel = !serial;
      const auto est = carnot_distance_upper(alg, p, q, opts);
      std::string csv = "index";
      for (std::size_t i = 0; i < alg.dim(); ++i) csv += "," + alg.basis_name(i);
      csv += "\n";
      const auto vertices = path_vertices(alg, p, est.path);
      for (std::size_t k = 0; k < vertices.size(); ++k) {
        csv += std::to_string(k);
        for (const auto& c : vertices[k].coords) csv += "," + csv_number(c.get_d());
        csv += "\n";
      }
      if (*dist) {
        require_json(g, "dist");
        emit_json(g, {{"metric", metric}, {"distance", est.length}, {"endpoint_error", est.endpoint_error}});
      } else if (g.format == "csv") {
        emit(g, csv);
      } else {
        emit_json(g, path_to_json(alg, est));
      }
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw UsageError("cannot write " + csv_path);
        f << csv;
      }
    } else if (*apply_cmd) {
      require_json(g, "apply-map");
      MapExpr m = map_from_json(alg, read_json_file(map_path));
      if (invert_map) m = invert(m);
      emit_json(g, element_to_json(alg, apply(alg, m, parse_element(alg, p_text))));
    } else if (*classify_cmd) {
      require_json(g, "classify");
      const Json rows = read_json_file(matrix_path);
      if (!rows.is_array() || rows.size() != alg.dim()) throw UsageError("matrix must have " + std::to_string(alg.dim()) + " rows");
      Matrix<Rational> m(alg.dim(), alg.dim());
      for (std::size_t r = 0; r < alg.dim(); ++r) {
        if (!rows[r].is_array() || rows[r].size() != alg.dim()) throw UsageError("matrix must be square");
        for (std::size_t c = 0; c < alg.dim(); ++c) m(r, c) = rational_from_json(rows[r][c]);
      }
      const auto cls = classify_graded_automorphism(alg, m);
      if (const auto* rej = std::get_if<Rejection>(&cls)) {
        emit_json(g, {{"accepted", false}, {"condition", rej->condition}, {"detail", rej->detail}});
      } else {
        const auto& p = std::get<AutoParams>(cls);
        Json out{{"accepted", true}, {"a1", to_json(p.a1)}, {"a2", to_json(p.a2)}, {"b", to_json(p.b)}};
        if (alg.complex_structure()) out["kind"] = p.conjugated ? "anti-linear" : "linear";
        emit_json(g, out);
      }
    } else if (*pansu_cmd) {
      require_json(g, "pansu");
      const MapExpr m = map_from_json(alg, read_json_file(map_path));
      const Element p = p_text.empty() || p_text == "0" ? alg.zero() : parse_element(alg, p_text);
      PansuOptions opts;
      if (!scales_text.empty()) opts.scales = parse_rational_list(scales_text);
      const auto est = pansu_differential_estimate(alg, m, p, opts);
      Json matrix = Json::array();
      for (std::size_t r = 0; r < alg.dim(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < alg.dim(); ++c) row.push_back(format_rational(est.differential(r, c)));
        matrix.push_back(row);
      }
      Json cls;
      if (const auto* rej = std::get_if<Rejection>(&est.classification)) {
        cls = {{"accepted", false}, {"condition", rej->condition}, {"detail", rej->detail}};
      } else {
        const auto& f = std::get<AutoParamsF>(est.classification);
        cls = {{"accepted", true}, {"a1", {f.a1.real(), f.a1.imag()}}, {"a2", {f.a2.real(), f.a2.imag()}},
               {"b", {f.b.real(), f.b.imag()}}, {"tau", f.conjugated}};
      }
      Json scales = Json::array();
      for (const auto& t : opts.scales) scales.push_back(format_rational(t));
      emit_json(g, {{"differential", matrix}, {"scales", scales}, {"residuals", est.residuals},
                    {"monotone", est.monotone}, {"at_breakpoint", est.at_breakpoint}, {"classification", cls}});
      if (!est.monotone) std::cerr << "warning: residuals did not decrease monotonically\n";
    } else if (*dist_cmd) {
      const MapExpr m = map_from_json(alg, read_json_file(map_path));
      DistortionOptions opts;
      opts.pairs = pairs;
      opts.seed = g.seed;
      opts.histogram_bins = bins;
      opts.sampler = sampler == "box" ? PairSampler::Box : PairSampler::ScaleSweep;
      const auto stats = distortion_sample(alg, m, opts);
      std::string csv = "scale,d(p,q),d(F(p),F(q)),ratio\n";
      for (const auto& r : stats.pairs) {
        csv += csv_number(r.scale) + "," + csv_number(r.distance) + "," + csv_number(r.image_distance) + "," +
               csv_number(r.ratio) + "\n";
      }
      if (g.format == "csv") {
        emit(g, csv);
      } else {
        emit_json(g, {{"pairs", stats.pairs.size()}, {"seed", g.seed}, {"min_ratio", stats.min_ratio},
                      {"max_ratio", stats.max_ratio}, {"histogram_lo", stats.histogram_lo},
                      {"histogram_hi", stats.histogram_hi}, {"histogram", stats.histogram}, {"redraws", stats.redraws}});
      }
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw UsageError("cannot write " + csv_path);
        f << csv;
      }
    } else if (*lift || *alpha) {
      const Polyline c = polyline_from_json(alg, read_json_file(curve_path));
      if (*alpha) {
        require_json(g, "alpha");
        emit_json(g, element_to_json(alg, alpha_integral(alg, c)));
        return kOk;
      }
      Element start = alg.zero();
      if (start_text != "0") {
        const auto coords = parse_rational_list(start_text);
        const auto& v2 = alg.layer(2);
        if (coords.size() != v2.size()) throw UsageError("--start needs " + std::to_string(v2.size()) + " V_2 coordinates");
        for (std::size_t i = 0; i < coords.size(); ++i) start.coords[v2.lo + i] = coords[i];
      }
      const auto result = horizontal_lift(alg, c, start);
      if (g.format == "csv") {
        std::string csv = "index";
        for (std::size_t i = 0; i < alg.dim(); ++i) csv += "," + alg.basis_name(i);
        csv += "\n";
        for (std::size_t k = 0; k < c.vertices.size(); ++k) {
          csv += std::to_string(k);
          const Element point = c.vertices[k] + result.centers[k];
          for (const auto& x : point.coords) csv += "," + format_rational(x);
          csv += "\n";
        }
        emit(g, csv);
      } else {
        Json centers = Json::array();
        for (const auto& x : result.centers) centers.push_back(element_to_json(alg, x)["coords"]);
        emit_json(g, {{"algebra_label", alg.label()}, {"centers", centers},
                      {"defect", element_to_json(alg, result.defect)}, {"closes", result.defect.is_zero()}});
      }
    } else if (*morera) {
      require_json(g, "morera");
      bool closed = false;
      const auto polygon = complex_polygon_from_json(read_json_file(curve_path), closed);
      const auto value = morera_defect(conjugate_polynomial_from_json(read_json_file(g_path)), polygon, closed);
      emit_json(g, {{"value", to_json(value)}});
    } else if (*verify) {
      require_json(g, "verify");
      SuiteConfig config;
      if (algebra_given) config.algebra = alg;
      config.seed = g.seed;
      config.cases = cases;
      config.parallel = !serial;
      const auto& names = suite_names();
      if (std::find(names.begin(), names.end(), suite) == names.end()) throw UsageError("unknown suite \"" + suite + "\"");
      const auto t0 = std::chrono::steady_clock::now();
      const SuiteReport report = run_suite(suite, config);
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      Json j = report_to_json(report, invocation, g.seed);
      if (timing) j["elapsed_seconds"] = elapsed;
      emit_json(g, j);
      std::cerr << suite << ": " << report.cases << " cases, " << report.failures.size() << " failures, " << elapsed
                << " s\n";
      return report.passed() ? kOk : kVerificationFailed;
    }
    return kOk;
  } catch (const InfeasiblePath& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerificationFailed;
  }
}
