#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "render.hpp"
#include "tvspec/adaptive.hpp"
#include "tvspec/config.hpp"
#include "tvspec/error.hpp"
#include "tvspec/eval.hpp"
#include "tvspec/io.hpp"
#include "tvspec/raw.hpp"
#include "tvspec/sim.hpp"
#include "tvspec/smoother.hpp"
#include "tvspec/version.hpp"

namespace tvspec::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Raised when --strict turns configuration warnings into a failure.
class StrictWarning : public Error {
public:
  using Error::Error;
};

std::string version_string() {
  return std::string("tvspec ") + kVersion + " (container TVSPEC01 v" +
         std::to_string(kContainerVersion) + ")";
}

std::string parent_dir(const std::string& path) {
  const fs::path p = fs::path(path).parent_path();
  return p.empty() ? std::string(".") : p.string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_json(const std::string& path, const Json& j) {
  io::write_file(path, j.dump(2) + "\n");
}

Json report_json(const ErrorReport& r) {
  Json j;
  j["mse"] = r.mse;
  j["se_quantiles"] = {{"q0", r.se_quantiles[0]},
                       {"q25", r.se_quantiles[1]},
                       {"q50", r.se_quantiles[2]},
                       {"q75", r.se_quantiles[3]},
                       {"q100", r.se_quantiles[4]}};
  j["n_points"] = r.n_points;
  return j;
}

Json diagnostics_json(const IterationDiagnostics& d) {
  Json j;
  j["k"] = d.k;
  j["mean_growth"] = d.mean_growth;
  j["growth_q25"] = d.growth_q25;
  j["growth_q75"] = d.growth_q75;
  j["b_eff_min"] = d.b_eff_min;
  j["b_eff_q25"] = d.b_eff_q25;
  j["b_eff_q75"] = d.b_eff_q75;
  j["count_negative"] = d.count_negative;
  j["count_full_memory"] = d.count_full_memory;
  j["count_separated"] = d.count_separated;
  j["stop_reason"] = std::string(to_string(d.stop_reason));
  return j;
}

/// Options shared by the commands that name a simulation model.
struct ModelOptions {
  std::string model = "tvma2";
  std::size_t T = 512;
  std::size_t t0 = 0;  // 0: model default
  double sigma = 1.0;
  double sigma1 = 1.0;
  double sigma2 = 3.1622776601683795;

  void add_to(CLI::App& app, bool with_length) {
    app.add_option("--model", model,
                   "Model: white-noise, wn-break, tvma2 or tvma2-break")
        ->capture_default_str();
    if (with_length)
      app.add_option("--T", T, "Series length")->check(CLI::Range(std::size_t{4}, std::size_t{1} << 24))
          ->capture_default_str();
    app.add_option("--t0", t0,
                   "Break index; default 0.5625 T for wn-break and 0.4 T for tvma2-break");
    app.add_option("--sigma", sigma, "Pre-break standard deviation (tvma2-break) or level (white-noise)")
        ->capture_default_str();
    app.add_option("--sigma1", sigma1, "Pre-break standard deviation (wn-break)")->capture_default_str();
    app.add_option("--sigma2", sigma2, "Post-break standard deviation (wn-break)")->capture_default_str();
  }

  sim::ModelSpec spec(std::size_t length) const {
    if (model == "white-noise" || model == "white_noise") return sim::white_noise(length, sigma);
    const sim::ModelKind kind = sim::parse_model_kind(model);
    const auto default_t0 = [&](double frac) {
      return t0 != 0 ? t0
                     : static_cast<std::size_t>(std::lround(frac * static_cast<double>(length)));
    };
    sim::ModelSpec s;
    switch (kind) {
      case sim::ModelKind::white_noise_break:
        s = sim::white_noise_break(length, default_t0(576.0 / 1024.0), sigma1, sigma2);
        break;
      case sim::ModelKind::tvma2:
        s = sim::tvma2(length);
        break;
      case sim::ModelKind::break_tvma2:
        s = sim::break_tvma2(length, default_t0(410.0 / 1024.0), sigma);
        break;
      case sim::ModelKind::custom_csv:
        throw ParameterError("model 'csv' has no closed form; supply data files instead");
    }
    s.validate();
    return s;
  }
};

EstimatorConfig load_config(const std::string& path, std::size_t T, bool strict, std::ostream& err) {
  EstimatorConfig cfg = path.empty() ? EstimatorConfig{} : EstimatorConfig::load(path);
  cfg.validate();
  const auto warnings = cfg.warnings(T);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  if (strict && !warnings.empty())
    throw StrictWarning(std::to_string(warnings.size()) + " configuration warning(s) with --strict");
  return cfg.resolved(T);
}

/// Pre-periodogram of a series read from a file; a series the transform
/// rejects is a data problem, not a usage one.
RawPlane raw_from_series_file(const std::string& path) {
  const std::vector<double> x = io::read_series_csv(path);
  try {
    return preperiodogram_modified(x);
  } catch (const ParameterError& e) {
    throw DataError("'" + path + "': " + e.what());
  }
}

RawPlane load_raw(const std::string& path) {
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".csv") return raw_from_series_file(path);
  return io::read_raw(path);
}

void log_iterations(const RunResult& result, std::ostream& err) {
  for (const auto& d : result.diagnostics) {
    err << "iter " << d.k << " mean_growth=" << d.mean_growth << " b_eff_min=" << d.b_eff_min
        << " negative=" << d.count_negative << " full_memory=" << d.count_full_memory
        << " separated=" << d.count_separated;
    if (d.stop_reason != StopReason::none) err << " stop=" << to_string(d.stop_reason);
    err << '\n';
  }
}

Plane matrix_plane(const EstimationGrid& grid, const Matrix& m, std::string provenance) {
  return Plane{grid, m, std::move(provenance)};
}

/// Writes every artifact of an adaptive run into dir.
void write_run(const std::string& dir, const RunResult& result, RunManifest& manifest) {
  io::write_plane_csv(join(dir, "plane.csv"), result.final);
  const EstimationGrid& g = result.final.grid;
  io::Container state;
  state.kind = io::ContainerKind::estimate_plane;
  state.T = g.raw.T;
  state.rows = g.n_time();
  state.cols = g.n_freq();
  state.d_t = g.d_t;
  state.d_f = g.d_f;
  state.scale = 1.0;
  state.planes = {result.final.values, result.final_theta, result.final_n_hat, result.final_search_bt,
                  result.final_search_bf};
  io::write_container(join(dir, "state.bin"), state);
  io::write_plane_csv(join(dir, "theta.csv"), matrix_plane(g, result.final_theta, "theta"));
  io::write_plane_csv(join(dir, "n_hat.csv"), matrix_plane(g, result.final_n_hat, "n_hat"));

  std::ostringstream diag;
  for (const auto& d : result.diagnostics) {
    diag << diagnostics_json(d).dump() << '\n';
    manifest.add_iteration_seconds(d.seconds);
  }
  io::write_file(join(dir, "diagnostics.jsonl"), diag.str());
  io::write_file(join(dir, "config.txt"), result.config.to_text());
  manifest.set_config(result.config.to_text());
  for (const char* name : {"plane.csv", "state.bin", "theta.csv", "n_hat.csv", "diagnostics.jsonl",
                           "config.txt"})
    manifest.add_output(join(dir, name));
  if (!result.history.empty()) {
    io::write_history(join(dir, "history.bin"), result);
    manifest.add_output(join(dir, "history.bin"));
  }
}

struct Context {
  std::vector<std::string> args;
  std::ostream& out;
  std::ostream& err;
};

// --- subcommands -----------------------------------------------------------

struct SimulateCmd {
  ModelOptions model;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string truth_path;

  void add(CLI::App& app) {
    model.add_to(app, true);
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    app.add_option("--out", out_path, "Series CSV (t,value)")->required();
    app.add_option("--truth", truth_path, "Also write the true density on the estimation grid (CSV)");
  }

  int run(const Context& ctx) {
    const sim::ModelSpec spec = model.spec(model.T);
    const sim::TimeSeries series = sim::generate(spec, model.T, seed);
    const std::string dir = parent_dir(out_path);
    ensure_dir(dir);
    RunManifest manifest("simulate", ctx.args);
    manifest.set_seed(seed);
    io::write_series_csv(out_path, series.values);
    manifest.add_output(out_path);
    if (!truth_path.empty()) {
      ensure_dir(parent_dir(truth_path));
      const EstimationGrid grid = EstimationGrid::automatic(RawGrid{model.T});
      io::write_plane_csv(truth_path, truth_plane(spec, grid));
      manifest.add_output(truth_path);
      if (parent_dir(truth_path) != dir) manifest.write(parent_dir(truth_path));
    }
    manifest.write(dir);
    return kOk;
  }
};

struct PreperiodogramCmd {
  std::string in_path;
  std::string out_path;
  std::string format = "bin";

  void add(CLI::App& app) {
    app.add_option("--in", in_path, "Series CSV")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "Output file")->required();
    app.add_option("--format", format, "bin (TVSPEC01 container) or csv (tau,j,value)")
        ->check(CLI::IsMember({"bin", "csv"}))
        ->capture_default_str();
  }

  int run(const Context& ctx) {
    const RawPlane raw = raw_from_series_file(in_path);
    const std::string dir = parent_dir(out_path);
    ensure_dir(dir);
    RunManifest manifest("preperiodogram", ctx.args);
    manifest.add_input(in_path);
    if (format == "csv")
      io::write_raw_csv(out_path, raw);
    else
      io::write_raw(out_path, raw);
    manifest.add_output(out_path);
    manifest.write(dir);
    return kOk;
  }
};

struct BaselineCmd {
  std::string raw_path;
  double bt = 0.12;
  double bf_norm = 0.12;
  std::size_t d_t = 0;
  std::size_t d_f = 0;
  std::string out_path;

  void add(CLI::App& app) {
    app.add_option("--raw", raw_path, "Raw plane (.bin) or series (.csv)")->required()->check(CLI::ExistingFile);
    app.add_option("--bt", bt, "Time bandwidth (rescaled time)")->capture_default_str();
    app.add_option("--bf", bf_norm, "Frequency bandwidth as a fraction of 2 pi")->capture_default_str();
    app.add_option("--dt", d_t, "Time decimation (0: automatic)");
    app.add_option("--df", d_f, "Frequency decimation (0: automatic)");
    app.add_option("--out", out_path, "Plane CSV")->required();
  }

  int run(const Context& ctx) {
    if (!(bt > 0.0) || !(bf_norm > 0.0)) throw ParameterError("bandwidths must be positive");
    const RawPlane raw = load_raw(raw_path);
    EstimatorConfig cfg;
    cfg.d_t = d_t;
    cfg.d_f = d_f;
    const EstimationGrid grid = cfg.estimation_grid(raw.grid);
    const Plane plane = smooth_nonadaptive(raw, bt, bf_norm * kTwoPi, grid);
    const std::string dir = parent_dir(out_path);
    ensure_dir(dir);
    RunManifest manifest("baseline", ctx.args);
    manifest.add_input(raw_path);
    io::write_plane_csv(out_path, plane);
    manifest.add_output(out_path);
    manifest.write(dir);
    return kOk;
  }
};

struct EstimateCmd {
  std::string raw_path;
  std::string config_path;
  std::string out_dir;
  bool strict = false;

  void add(CLI::App& app) {
    app.add_option("--raw", raw_path, "Raw plane (.bin) or series (.csv)")->required()->check(CLI::ExistingFile);
    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory")->required();
    app.add_flag("--strict", strict, "Treat configuration warnings as errors (exit 4)");
  }

  int run(const Context& ctx) {
    const RawPlane raw = load_raw(raw_path);
    const EstimatorConfig cfg = load_config(config_path, raw.grid.T, strict, ctx.err);
    ensure_dir(out_dir);
    RunManifest manifest("estimate", ctx.args);
    manifest.add_input(raw_path);
    if (!config_path.empty()) manifest.add_input(config_path);
    const RunResult result = run_adaptive(raw, cfg);
    log_iterations(result, ctx.err);
    write_run(out_dir, result, manifest);
    manifest.write(out_dir);
    return kOk;
  }
};

struct EvaluateCmd {
  std::string est_path;
  std::string truth_path;
  ModelOptions model;
  bool has_model = false;
  double margin_t = 0.0;
  double margin_f = 0.0;
  std::string report_path;

  void add(CLI::App& app) {
    app.add_option("--est", est_path, "Estimated plane CSV")->required()->check(CLI::ExistingFile);
    app.add_option("--truth", truth_path, "True density as a plane CSV")->check(CLI::ExistingFile);
    app.add_option("--truth-model", model.model, "Closed-form truth: white-noise, wn-break, tvma2, tvma2-break");
    app.add_option("--t0", model.t0, "Break index of the truth model");
    app.add_option("--sigma", model.sigma, "Standard deviation parameter of the truth model");
    app.add_option("--sigma1", model.sigma1, "Pre-break standard deviation (wn-break)");
    app.add_option("--sigma2", model.sigma2, "Post-break standard deviation (wn-break)");
    app.add_option("--margin-t", margin_t, "Exclude points closer than this to the time edges");
    app.add_option("--margin-f", margin_f, "Exclude points closer than this (radians) to 0 and pi");
    app.add_option("--report", report_path, "Write the report JSON here (also printed to stdout)");
  }

  int run(const Context& ctx, const CLI::App& app) {
    has_model = app.count("--truth-model") > 0;
    if (has_model == !truth_path.empty())
      throw ParameterError("exactly one of --truth and --truth-model is required");
    const Plane est = io::read_plane_csv(est_path);
    const Margin margin{margin_t, margin_f};
    SquaredError se;
    if (has_model) {
      const sim::ModelSpec spec = model.spec(est.grid.raw.T);
      se = squared_error(est, [&](double u, double l) { return sim::true_spectrum(spec, u, l); }, margin);
    } else {
      se = squared_error(est, io::read_plane_csv(truth_path), margin);
    }
    Json j = report_json(se.report);
    const BreakEstimate br = detect_break(freq_average(est), time_axis(est.grid));
    j["break_location"] = br.u_hat;
    j["break_low_confidence"] = br.low_confidence;
    ctx.out << j.dump(2) << '\n';
    if (!report_path.empty()) {
      const std::string dir = parent_dir(report_path);
      ensure_dir(dir);
      RunManifest manifest("evaluate", ctx.args);
      manifest.add_input(est_path);
      if (!truth_path.empty()) manifest.add_input(truth_path);
      write_json(report_path, j);
      manifest.add_output(report_path);
      manifest.write(dir);
    }
    return kOk;
  }
};

struct KernelCmd {
  std::string result_dir;
  std::string raw_path;
  double u = 0.5;
  double lambda = 1.0;
  std::string out_path;

  void add(CLI::App& app) {
    app.add_option("--result", result_dir, "Directory written by 'estimate'")->required()->check(CLI::ExistingDirectory);
    app.add_option("--u", u, "Rescaled time of the probe point")->required();
    app.add_option("--lambda", lambda, "Frequency (radians) of the probe point")->required();
    app.add_option("--raw", raw_path, "Raw plane; when given the weights are reapplied to it")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "Kernel CSV (tau,j,weight,penalty)")->required();
  }

  int run(const Context& ctx) {
    RunResult result;
    result.config = EstimatorConfig::load(join(result_dir, "config.txt"));
    const std::string history = join(result_dir, "history.bin");
    if (!fs::exists(history)) throw UnavailableError("no history.bin in '" + result_dir + "'");
    io::read_history(history, result);
    const KernelMap map = reconstruct_kernel(result, u, lambda);

    const std::string dir = parent_dir(out_path);
    ensure_dir(dir);
    RunManifest manifest("kernel", ctx.args);
    manifest.add_input(join(result_dir, "config.txt"));
    manifest.add_input(history);
    io::write_kernel_csv(out_path, map, result.raw_grid);
    manifest.add_output(out_path);

    Json j;
    j["u"] = map.u;
    j["lambda"] = map.lambda;
    j["weight_sum"] = map.weights.sum();
    j["n_hat"] = result.final_n_hat(static_cast<Eigen::Index>(map.i), static_cast<Eigen::Index>(map.l));
    j["f_hat"] = result.final.values(static_cast<Eigen::Index>(map.i), static_cast<Eigen::Index>(map.l));
    if (!raw_path.empty()) {
      const RawPlane raw = load_raw(raw_path);
      if (raw.grid != result.raw_grid) throw GridMismatchError("raw plane does not match the result");
      manifest.add_input(raw_path);
      j["f_reapplied"] = raw.scale * (map.weights.cwiseProduct(raw.normalized)).sum() / map.weights.sum();
    }
    ctx.out << j.dump(2) << '\n';
    manifest.write(dir);
    return kOk;
  }
};

struct RenderCmd {
  std::string in_path;
  std::string out_path;

  void add(CLI::App& app) {
    app.add_option("--in", in_path, "Plane CSV")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "PPM image; a <out>.json sidecar records the colour scale")->required();
  }

  int run(const Context& ctx) {
    const Plane plane = io::read_plane_csv(in_path);
    const std::string dir = parent_dir(out_path);
    ensure_dir(dir);
    RunManifest manifest("render", ctx.args);
    manifest.add_input(in_path);
    render_plane(plane, out_path);
    manifest.add_output(out_path);
    manifest.add_output(out_path + ".json");
    manifest.write(dir);
    return kOk;
  }
};

struct DemoCmd {
  std::string example = "wn-break";
  std::size_t T = 512;
  std::uint64_t seed = 1;
  std::string config_path;
  std::string out_dir = "demo-out";
  bool strict = false;

  void add(CLI::App& app) {
    app.add_option("--example", example, "wn-break, tvma2 or tvma2-break")
        ->check(CLI::IsMember({"wn-break", "tvma2", "tvma2-break"}))
        ->capture_default_str();
    app.add_option("--T", T, "Series length")->check(CLI::Range(std::size_t{16}, std::size_t{1} << 16))
        ->capture_default_str();
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_flag("--strict", strict, "Treat configuration warnings as errors (exit 4)");
  }

  int run(const Context& ctx) {
    ModelOptions opts;
    opts.model = example;
    const sim::ModelSpec spec = opts.spec(T);
    const EstimatorConfig cfg = load_config(config_path, T, strict, ctx.err);
    ensure_dir(out_dir);
    RunManifest manifest("demo", ctx.args);
    manifest.set_seed(seed);
    if (!config_path.empty()) manifest.add_input(config_path);

    const sim::TimeSeries series = sim::generate(spec, T, seed);
    io::write_series_csv(join(out_dir, "series.csv"), series.values);
    manifest.add_output(join(out_dir, "series.csv"));
    const RawPlane raw = preperiodogram_modified(series);
    io::write_raw(join(out_dir, "raw.bin"), raw);
    manifest.add_output(join(out_dir, "raw.bin"));

    const RunResult result = run_adaptive(raw, cfg);
    log_iterations(result, ctx.err);
    write_run(out_dir, result, manifest);

    const EstimationGrid& grid = result.final.grid;
    const TruthFunction truth = [&](double u, double l) { return sim::true_spectrum(spec, u, l); };
    const Plane same = smooth_nonadaptive(raw, result.final_search_bt, result.final_search_bf, grid);
    const OracleResult oracle = optimal_global_bandwidth(raw, truth, grid, default_bandwidth_grid());
    io::write_plane_csv(join(out_dir, "truth.csv"), truth_plane(spec, grid));
    io::write_plane_csv(join(out_dir, "na_same_window.csv"), same);
    io::write_plane_csv(join(out_dir, "na_opt.csv"), oracle.plane);
    for (const char* name : {"truth.csv", "na_same_window.csv", "na_opt.csv"})
      manifest.add_output(join(out_dir, name));

    const ErrorReport ad = squared_error(result.final, truth).report;
    const ErrorReport na = squared_error(same, truth).report;
    const BreakEstimate br = detect_break(freq_average(result.final), time_axis(grid));

    Json j;
    j["example"] = example;
    j["T"] = T;
    j["seed"] = seed;
    j["iterations"] = result.diagnostics.size();
    j["stop_reason"] = result.diagnostics.empty()
                           ? std::string("none")
                           : std::string(to_string(result.diagnostics.back().stop_reason));
    j["mse_adaptive"] = ad.mse;
    j["mse_na_same_window"] = na.mse;
    j["mse_na_opt"] = oracle.report.mse;
    j["na_opt_bandwidth"] = {{"bt", oracle.bt}, {"bf", oracle.bf}};
    j["break_location"] = br.u_hat;
    j["break_low_confidence"] = br.low_confidence;
    if (spec.kind != sim::ModelKind::tvma2) j["true_break_location"] = spec.break_u();
    j["adaptive"] = report_json(ad);
    j["na_same_window"] = report_json(na);
    j["na_opt"] = report_json(oracle.report);
    write_json(join(out_dir, "summary.json"), j);
    manifest.add_output(join(out_dir, "summary.json"));
    manifest.write(out_dir);
    ctx.out << j.dump(2) << '\n';
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tvspec: adaptive estimation of time-varying spectral densities", "tvspec"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  app.fallthrough(false);

  SimulateCmd simulate;
  PreperiodogramCmd prep;
  BaselineCmd baseline;
  EstimateCmd estimate;
  EvaluateCmd evaluate;
  KernelCmd kernel;
  RenderCmd render;
  DemoCmd demo;

  auto* sc_sim = app.add_subcommand("simulate", "Simulate one of the example processes");
  simulate.add(*sc_sim);
  auto* sc_prep = app.add_subcommand("preperiodogram", "Compute the modified pre-periodogram of a series");
  prep.add(*sc_prep);
  auto* sc_base = app.add_subcommand("baseline", "Nonadaptive kernel estimate with fixed bandwidths");
  baseline.add(*sc_base);
  auto* sc_est = app.add_subcommand("estimate", "Adaptive propagation-separation estimate");
  estimate.add(*sc_est);
  auto* sc_eval = app.add_subcommand("evaluate", "Squared-error report against a known density");
  evaluate.add(*sc_eval);
  auto* sc_kern = app.add_subcommand("kernel", "Reconstruct the final adaptive kernel at a point");
  kernel.add(*sc_kern);
  auto* sc_render = app.add_subcommand("render", "Render a plane CSV as a PPM heat map");
  render.add(*sc_render);
  auto* sc_demo = app.add_subcommand("demo", "Simulate, estimate and compare against nonadaptive baselines");
  demo.add(*sc_demo);

  std::vector<std::string> reversed;
  if (args.size() > 1) reversed.assign(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    if (code == 0) return kOk;
    const CLI::App* failing = &app;
    for (const CLI::App* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return kUsage;
  }

  const Context ctx{args, out, err};
  try {
    if (sc_sim->parsed()) return simulate.run(ctx);
    if (sc_prep->parsed()) return prep.run(ctx);
    if (sc_base->parsed()) return baseline.run(ctx);
    if (sc_est->parsed()) return estimate.run(ctx);
    if (sc_eval->parsed()) return evaluate.run(ctx, *sc_eval);
    if (sc_kern->parsed()) return kernel.run(ctx);
    if (sc_render->parsed()) return render.run(ctx);
    if (sc_demo->parsed()) return demo.run(ctx);
  } catch (const StrictWarning& e) {
    err << "error: " << e.what() << '\n';
    return kWarning;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const UnavailableError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const GridMismatchError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kFailure;
  }
  err << app.help();
  return kUsage;
}

}  // namespace tvspec::cli
