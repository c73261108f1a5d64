#pragma once

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "uvsamp/io.hpp"
#include "uvsamp/scenario.hpp"
#include "uvsamp/tensor.hpp"

namespace uvsamp {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  exit_ok = 0,
  exit_input_error = 1,
  exit_frame_condition = 2,
  exit_tolerance_exceeded = 3,
};

struct CliOptions {
  std::string scenario_path;
  std::string out_dir = ".";
  std::string format = "csv";
  std::optional<double> tolerance;
  std::optional<unsigned long long> seed;
};

namespace detail {

struct LoadedScenario {
  Scenario scenario;
  std::string digest;
};

inline LoadedScenario load_scenario(const CliOptions& opts) {
  const std::string text = read_file(opts.scenario_path);
  return LoadedScenario{parse_scenario(text), fnv1a64(text)};
}

inline double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

/// Frame verdicts straight from the module outputs; the reported alpha/beta
/// are the factor's optimal frame bounds, tensor bounds their products.
inline RunReport analyze_report(const LoadedScenario& loaded, const TensorScheme& scheme) {
  RunReport report;
  report.scenario_digest = loaded.digest;
  report.case_tag = to_string(scheme.kind);
  auto fill = [](FactorVerdict& v, const TensorScheme& scheme, int which) {
    const ContinuousScheme* cont = which == 1 ? (scheme.cont1 ? &*scheme.cont1 : nullptr)
                                              : (scheme.cont2 ? &*scheme.cont2 : nullptr);
    if (cont) {
      v.type = "continuous";
      const FrameConstants fc = frame_constants(*cont);
      v.ok = fc.alpha > 1e-10;
      v.alpha = fc.alpha / double(cont->r);
      v.beta = fc.beta / double(cont->r);
      if (!v.ok) v.note = "lower frame constant is not strictly positive";
    } else {
      const PeriodicScheme& per = which == 1 ? *scheme.per1 : *scheme.per2;
      v.type = "periodic";
      const PeriodicFrameResult ft = frame_test(per);
      v.ok = ft.is_frame;
      v.rank = ft.rank;
      v.required = per.period();
      v.alpha = ft.bounds.lambda_min;
      v.beta = ft.bounds.lambda_max;
      if (!v.ok)
        v.note = "covariance matrix rank " + std::to_string(ft.rank) + " < " +
                 std::to_string(per.period()) + ", sampling systems do not span";
    }
  };
  fill(report.factor1, scheme, 1);
  fill(report.factor2, scheme, 2);
  report.tensor_alpha = report.factor1.alpha * report.factor2.alpha;
  report.tensor_beta = report.factor1.beta * report.factor2.beta;
  return report;
}

inline void print_verdict_lines(std::ostream& out, const RunReport& r) {
  auto line = [&](const char* name, const FactorVerdict& v) {
    out << name << ": " << (v.ok ? "pass" : "FAIL") << " (" << v.type;
    if (v.rank >= 0) out << ", rank " << v.rank << "/" << v.required;
    out << ", bounds [" << fmt_double(v.alpha) << ", " << fmt_double(v.beta) << "]";
    if (!v.note.empty()) out << ", " << v.note;
    out << ")\n";
  };
  line("factor1", r.factor1);
  line("factor2", r.factor2);
  out << "tensor bounds: [" << fmt_double(r.tensor_alpha) << ", " << fmt_double(r.tensor_beta)
      << "]\n";
}

inline void emit_report_stdout(const CliOptions& opts, const RunReport& report) {
  if (opts.format == "json") {
    std::cout << report_to_json(report);
  } else {
    print_verdict_lines(std::cout, report);
  }
}

inline void print_timings(const RunReport& report) {
  if (report.timings_ms.empty()) return;
  std::cerr << "timings:";
  for (const auto& [name, ms] : report.timings_ms) std::cerr << " " << name << "=" << ms << "ms";
  std::cerr << "\n";
}

}  // namespace detail

/// Runs the factor frame tests and the tensor bound computation.
/// Exit 0 when every frame condition holds, 2 otherwise.
inline int cmd_analyze(const CliOptions& opts, RunReport* out_report = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  const detail::LoadedScenario loaded = detail::load_scenario(opts);
  const TensorScheme scheme = build_tensor_scheme(loaded.scenario);
  RunReport report = detail::analyze_report(loaded, scheme);
  report.timings_ms["analyze"] = detail::ms_since(t0);
  detail::emit_report_stdout(opts, report);
  detail::print_timings(report);
  if (out_report) *out_report = report;
  return report.frame_ok() ? exit_ok : exit_frame_condition;
}

/// Designs the reconstruction kit and writes kit.json; requires the analyze
/// stage to pass.
inline int cmd_design(const CliOptions& opts, ReconstructionKit* out_kit = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  const detail::LoadedScenario loaded = detail::load_scenario(opts);
  const TensorScheme scheme = build_tensor_scheme(loaded.scenario);
  RunReport report = detail::analyze_report(loaded, scheme);
  if (!report.frame_ok()) {
    std::cerr << "design: frame conditions fail\n";
    detail::print_verdict_lines(std::cerr, report);
    return exit_frame_condition;
  }
  const ReconstructionKit kit = design_kit(scheme, kit_options(loaded.scenario, scheme));
  const std::filesystem::path path = std::filesystem::path(opts.out_dir) / "kit.json";
  emit_results(kit, EmitFormat::json, path);
  report.timings_ms["design"] = detail::ms_since(t0);
  if (opts.format == "json")
    std::cout << report_to_json(report);
  else
    std::cout << "kit written to " << path.string() << "\n";
  detail::print_timings(report);
  if (out_kit) *out_kit = kit;
  return exit_ok;
}

/// Samples the scenario's signal and writes samples.csv plus samples.json.
inline int cmd_sample(const CliOptions& opts, SampleGrid* out_grid = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  const detail::LoadedScenario loaded = detail::load_scenario(opts);
  const TensorScheme scheme = build_tensor_scheme(loaded.scenario);
  const TensorCoefficients signal = build_signal(loaded.scenario, scheme, opts.seed);
  const SampleGrid grid = sample_tensor(scheme, signal);
  const std::filesystem::path dir(opts.out_dir);
  emit_results(grid, EmitFormat::csv, dir / "samples.csv");
  emit_results(grid, EmitFormat::json, dir / "samples.json");
  RunReport report;
  report.timings_ms["sample"] = detail::ms_since(t0);
  if (opts.format == "json")
    std::cout << grid_to_json(grid);
  else
    std::cout << "samples written to " << (dir / "samples.csv").string() << " ("
              << grid.s * grid.sprime * grid.cells() << " values)\n";
  detail::print_timings(report);
  if (out_grid) *out_grid = grid;
  return exit_ok;
}

/// Reads kit.json and samples from the output directory, reconstructs, and
/// reports the maximum error against the scenario's known signal.
/// Exit 3 when the error exceeds the tolerance.
inline int cmd_reconstruct(const CliOptions& opts, double* out_error = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  const detail::LoadedScenario loaded = detail::load_scenario(opts);
  const TensorScheme scheme = build_tensor_scheme(loaded.scenario);
  const std::filesystem::path dir(opts.out_dir);
  const ReconstructionKit kit = kit_from_json(read_file(dir / "kit.json"));
  SampleGrid grid;
  if (std::filesystem::exists(dir / "samples.json"))
    grid = grid_from_json(read_file(dir / "samples.json"));
  else
    grid = grid_from_csv(read_file(dir / "samples.csv"));
  const TensorCoefficients recon = reconstruct_tensor(scheme, grid, kit);
  const TensorCoefficients known = build_signal(loaded.scenario, scheme, opts.seed);
  const double error = max_diff(recon, known);
  emit_results(recon, EmitFormat::csv, dir / "coefficients.csv");
  emit_results(recon, EmitFormat::json, dir / "coefficients.json");
  const double tol = opts.tolerance.value_or(loaded.scenario.tolerance);
  RunReport report;
  report.timings_ms["reconstruct"] = detail::ms_since(t0);
  if (opts.format == "json")
    std::cout << "{\n  \"max_reconstruction_error\": " << fmt_double(error)
              << ",\n  \"tolerance\": " << fmt_double(tol) << "\n}\n";
  else
    std::cout << "max reconstruction error: " << fmt_double(error) << " (tolerance "
              << fmt_double(tol) << ")\n";
  detail::print_timings(report);
  if (out_error) *out_error = error;
  return error <= tol ? exit_ok : exit_tolerance_exceeded;
}

/// Runs the interpolation and brute-force checks plus a signal round trip,
/// writes report.json. Exit 2 on frame failure, 3 on tolerance breach.
inline int cmd_verify(const CliOptions& opts, RunReport* out_report = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  const detail::LoadedScenario loaded = detail::load_scenario(opts);
  const TensorScheme scheme = build_tensor_scheme(loaded.scenario);
  RunReport report = detail::analyze_report(loaded, scheme);
  const std::filesystem::path dir(opts.out_dir);
  if (!report.frame_ok()) {
    report.timings_ms["verify"] = detail::ms_since(t0);
    emit_results(report, EmitFormat::json, dir / "report.json");
    detail::emit_report_stdout(opts, report);
    detail::print_timings(report);
    if (out_report) *out_report = report;
    return exit_frame_condition;
  }
  const ReconstructionKit kit = design_kit(scheme, kit_options(loaded.scenario, scheme));
  double worst = -1.0;
  if (scheme.s() == scheme.step1() && scheme.sprime() == scheme.step2()) {
    const InterpolationReport ir = verify_interpolation(scheme, kit);
    report.interpolation_deviation = ir.max_deviation;
  } else {
    report.interpolation_note = "not square: interpolation stage skipped";
  }
  if (scheme.kind == TensorCase::finite_finite) {
    const BruteForceReport br = brute_force_check(scheme, kit);
    worst = std::max(worst, br.max_error);
  }
  if (loaded.scenario.signal) {
    const TensorCoefficients signal = build_signal(loaded.scenario, scheme, opts.seed);
    const TensorCoefficients recon =
        reconstruct_tensor(scheme, sample_tensor(scheme, signal), kit);
    worst = std::max(worst, max_diff(recon, signal));
  }
  if (worst >= 0.0) report.max_reconstruction_error = worst;
  report.timings_ms["verify"] = detail::ms_since(t0);
  emit_results(report, EmitFormat::json, dir / "report.json");
  detail::emit_report_stdout(opts, report);
  detail::print_timings(report);
  if (out_report) *out_report = report;
  const double tol = opts.tolerance.value_or(loaded.scenario.tolerance);
  const bool breached = (report.max_reconstruction_error && *report.max_reconstruction_error > tol) ||
                        (report.interpolation_deviation && *report.interpolation_deviation > tol);
  return breached ? exit_tolerance_exceeded : exit_ok;
}

/// Dispatch with the documented exit-code mapping for errors.
inline int run_command(const std::string& command, const CliOptions& opts) {
  try {
    if (command == "analyze") return cmd_analyze(opts);
    if (command == "design") return cmd_design(opts);
    if (command == "sample") return cmd_sample(opts);
    if (command == "reconstruct") return cmd_reconstruct(opts);
    if (command == "verify") return cmd_verify(opts);
    std::cerr << "unknown command: " << command << "\n";
    return exit_input_error;
  } catch (const NotAFrame& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_frame_condition;
  } catch (const FactorNotAFrame& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_frame_condition;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input_error;
  }
}

}  // namespace uvsamp
