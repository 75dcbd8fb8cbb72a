#include "flipblur/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "flipblur/cli/verify.hpp"
#include "flipblur/error.hpp"
#include "flipblur/krylov.hpp"
#include "flipblur/spectral.hpp"

namespace flipblur::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  auto guarded = [&](std::size_t i) {
    try {
      task(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min(count, std::max<std::size_t>(threads, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) guarded(i);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

constexpr unsigned kPgmMaxval = 65535;

std::string text_grid(const Image& img) {
  std::ostringstream os;
  write_text_grid(os, img.rows(), img.cols(), img.data());
  return os.str();
}

Image read_grid(const std::string& path, const Shape& shape) {
  const TextGrid grid = parse_text_grid(read_file(path));
  if (grid.rows * grid.cols != shape.size())
    throw Error(ErrorKind::FormatError, "'" + path + "' does not hold a " +
                                            format_size(shape) + " grid");
  return Image(shape, grid.values);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// JSON has no infinity; an exact reconstruction reports psnr as null.
ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<BcKind> selected_bcs(const ExperimentConfig& config,
                                 std::initializer_list<BcKind> fallback) {
  if (config.bc) return {*config.bc};
  return fallback;
}

std::vector<bool> selected_flips(const ExperimentConfig& config) {
  if (config.flip) return {*config.flip};
  return {false, true};
}

Psf load_configured_psf(const std::optional<std::string>& spec, const char* fallback,
                        std::ostream& log) {
  LoadedPsf loaded = resolve_psf(spec ? *spec : fallback);
  if (loaded.renormalized) log << "warning: PSF coefficients renormalized to unit sum\n";
  return loaded.psf;
}

Image load_truth(const ExperimentConfig& config) {
  if (config.image_path) return read_pgm(read_file(*config.image_path));
  const Shape shape = config.sizes.empty() ? Shape::grid(64, 64) : config.sizes.front();
  return synth_image(config.synth, shape);
}

struct RunRow {
  BcKind bc;
  bool flip;
  SolverKind solver;
  IterationHistory history;
  std::optional<Metrics> best;
  std::optional<Metrics> discrepancy;
};

std::string run_name(BcKind bc, bool flip, SolverKind solver) {
  return std::string(to_string(bc)) + (flip ? "-flip-" : "-noflip-") + std::string(to_string(solver));
}

ordered_json metrics_entry(const std::optional<Metrics>& m, const std::optional<std::size_t>& iter) {
  if (!m || !iter) return ordered_json();
  ordered_json j;
  j["rre"] = m->rre;
  j["psnr"] = finite_or_null(m->psnr);
  j["iter"] = *iter;
  return j;
}

// Solves one (bc, flip) system and writes its run directory.
RunRow restore_run(const BlurOperator& op, const Image& data, const std::optional<Image>& truth,
                   double delta, bool flip, const ExperimentConfig& config, const fs::path& dir) {
  RestoreOptions options;
  options.solver = config.solver;
  options.flip = flip;
  options.rule.max_iter = config.max_iter;
  options.rule.discrepancy = Discrepancy{delta, config.tau};
  options.rule.stop_at_discrepancy = config.stop_at_discrepancy;
  Restoration result = restore(op, data, options, truth);

  RunRow row{op.bc(), flip, config.solver, result.history, std::nullopt, std::nullopt};
  if (truth && result.at_best) row.best = measure(*result.at_best, *truth, config.psnr);
  if (truth && result.at_discrepancy)
    row.discrepancy = measure(*result.at_discrepancy, *truth, config.psnr);

  fs::create_directories(dir);
  std::ostringstream history;
  write_history_csv(history, result.history);
  write_file((dir / "history.csv").string(), history.str());

  ordered_json metrics;
  metrics["best"] = metrics_entry(row.best, result.history.best_iter);
  metrics["discrepancy"] = metrics_entry(row.discrepancy, result.history.discrepancy_iter);
  write_file((dir / "metrics.json").string(), dump(metrics));

  const IterationHistory& h = result.history;
  ordered_json solve;
  solve["solver"] = std::string(to_string(config.solver));
  solve["bc"] = std::string(to_string(op.bc()));
  solve["flip"] = flip;
  solve["shape"] = format_size(op.shape());
  solve["iterations"] = h.iterations();
  solve["stopped_by"] = std::string(to_string(h.stopped_by));
  solve["breakdown"] = std::string(to_string(h.breakdown));
  solve["delta"] = delta;
  solve["tau"] = config.tau;
  solve["max_iter"] = config.max_iter;
  solve["stop_at_discrepancy"] = config.stop_at_discrepancy;
  solve["discrepancy_iter"] = h.discrepancy_iter ? ordered_json(*h.discrepancy_iter) : ordered_json();
  solve["best_iter"] = h.best_iter ? ordered_json(*h.best_iter) : ordered_json();
  solve["initial_residual"] = h.residual_norms.front();
  solve["final_residual"] = h.residual_norms.back();
  solve["psnr_convention"] = std::string(to_string(config.psnr));
  write_file((dir / "solve.json").string(), dump(solve));

  write_file((dir / "restored_final.pgm").string(), write_pgm(result.solution, kPgmMaxval));
  if (result.at_best)
    write_file((dir / "restored_best.pgm").string(), write_pgm(*result.at_best, kPgmMaxval));
  if (result.at_discrepancy)
    write_file((dir / "restored_discrepancy.pgm").string(),
               write_pgm(*result.at_discrepancy, kPgmMaxval));
  return row;
}

void write_summary(const fs::path& out, const std::vector<RunRow>& rows, std::ostream& log) {
  std::ostringstream csv;
  csv << "bc,flip,solver,best_rre,best_psnr,best_iter,disc_rre,disc_psnr,disc_iter,stopped_by,"
         "iterations\n";
  auto cell = [](const std::optional<Metrics>& m, const std::optional<std::size_t>& it) {
    if (!m || !it) return std::string(",,");
    return fmt(m->rre, "%.17g") + "," + (std::isfinite(m->psnr) ? fmt(m->psnr, "%.17g") : "inf") +
           "," + std::to_string(*it);
  };
  for (const RunRow& r : rows)
    csv << to_string(r.bc) << ',' << (r.flip ? 1 : 0) << ',' << to_string(r.solver) << ','
        << cell(r.best, r.history.best_iter) << ',' << cell(r.discrepancy, r.history.discrepancy_iter)
        << ',' << to_string(r.history.stopped_by) << ',' << r.history.iterations() << '\n';
  write_file((out / "summary.csv").string(), csv.str());

  log << std::left << std::setw(16) << "bc" << std::setw(6) << "flip" << std::setw(24)
      << "best rre/psnr/iter" << "discrepancy rre/psnr/iter\n";
  auto text = [](const std::optional<Metrics>& m, const std::optional<std::size_t>& it) {
    if (!m || !it) return std::string("-");
    return fmt(m->rre, "%.4f") + " " + fmt(m->psnr, "%.2f") + " " + std::to_string(*it);
  };
  for (const RunRow& r : rows)
    log << std::left << std::setw(16) << to_string(r.bc) << std::setw(6) << (r.flip ? "yes" : "no")
        << std::setw(24) << text(r.best, r.history.best_iter)
        << text(r.discrepancy, r.history.discrepancy_iter) << '\n';
}


std::vector<RunRow> run_grid(const std::vector<BcKind>& bcs, const std::vector<bool>& flips,
                             const std::function<RunRow(BcKind, bool)>& one) {
  std::vector<std::pair<BcKind, bool>> jobs;
  for (BcKind bc : bcs)
    for (bool flip : flips) jobs.emplace_back(bc, flip);
  std::vector<std::optional<RunRow>> rows(jobs.size());
  parallel_for(jobs.size(), worker_threads(),
               [&](std::size_t i) { rows[i] = one(jobs[i].first, jobs[i].second); });
  std::vector<RunRow> out;
  for (auto& r : rows) out.push_back(std::move(*r));
  return out;
}

}  // namespace

int cmd_blur(const ExperimentConfig& config, std::ostream& log) {
  const Psf psf = load_configured_psf(config.psf, "builtin:motion:6", log);
  const Image truth = load_truth(config);
  const BcKind bc = config.bc.value_or(BcKind::Reflective);
  const BlurOperator op(psf, bc, truth.shape());
  const Image blurred = op.apply(truth);
  const Image data = add_noise(blurred, {config.gamma, config.seed});

  double noise_sq = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) noise_sq += (data[i] - blurred[i]) * (data[i] - blurred[i]);

  const fs::path out(config.out);
  fs::create_directories(out);
  write_file((out / "blurred.pgm").string(), write_pgm(data, kPgmMaxval));
  write_file((out / "blurred.txt").string(), text_grid(data));
  write_file((out / "truth.txt").string(), text_grid(truth));
  {
    std::ostringstream os;
    write_text_grid(os, psf.rows(), psf.cols(), psf.coeffs());
    write_file((out / "psf.txt").string(), os.str());
  }

  ordered_json side;
  side["shape"] = format_size(truth.shape());
  side["bc"] = std::string(to_string(bc));
  side["gamma"] = config.gamma;
  side["seed"] = config.seed;
  side["blurred_norm"] = blurred.norm();
  side["delta"] = discrepancy_delta(config.gamma, blurred.norm());
  side["noise_norm"] = std::sqrt(noise_sq);
  side["config"] = describe(config);
  write_file((out / "blurred.json").string(), dump(side));

  log << "blurred " << format_size(truth.shape()) << " under " << to_string(bc)
      << " boundary, ||Af|| = " << fmt(blurred.norm()) << ", delta = "
      << fmt(discrepancy_delta(config.gamma, blurred.norm())) << "\n";
  return kExitOk;
}

int cmd_deblur(const ExperimentConfig& config, std::ostream& log) {
  if (!config.input) throw Error(ErrorKind::UsageError, "input: directory written by 'blur' is required");
  const fs::path in(*config.input);
  ordered_json side;
  try {
    side = ordered_json::parse(read_file((in / "blurred.json").string()));
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorKind::FormatError, std::string("blurred.json: ") + e.what());
  }
  if (!side.contains("shape") || !side["shape"].is_string() || !side.contains("delta") ||
      !side["delta"].is_number())
    throw Error(ErrorKind::FormatError, "blurred.json: missing shape or delta");
  const Shape shape = parse_size(side["shape"].get<std::string>());
  const double delta = side["delta"].get<double>();

  const Image data = read_grid((in / "blurred.txt").string(), shape);
  std::optional<Image> truth;
  if (fs::is_regular_file(in / "truth.txt")) {
    truth = read_grid((in / "truth.txt").string(), shape);
    if (truth->norm() == 0.0) truth.reset();
  }
  const Psf psf = config.psf ? load_configured_psf(config.psf, "", log)
                             : load_psf(read_file((in / "psf.txt").string())).psf;

  const fs::path out(config.out);
  const auto rows = run_grid(
      selected_bcs(config, {BcKind::Zero, BcKind::Periodic, BcKind::Reflective, BcKind::AntiReflective}),
      selected_flips(config), [&](BcKind bc, bool flip) {
        const BlurOperator op(psf, bc, shape);
        return restore_run(op, data, truth, delta, flip, config, out / run_name(bc, flip, config.solver));
      });
  write_summary(out, rows, log);
  return kExitOk;
}

int cmd_grid(const ExperimentConfig& config, std::ostream& log) {
  const Psf psf = load_configured_psf(config.psf, "builtin:motion:6", log);
  const Image truth = load_truth(config);
  const std::optional<Image> reference =
      truth.norm() > 0.0 ? std::optional<Image>(truth) : std::nullopt;

  const fs::path out(config.out);
  const auto rows = run_grid(
      selected_bcs(config, {BcKind::Zero, BcKind::Periodic, BcKind::Reflective, BcKind::AntiReflective}),
      selected_flips(config), [&](BcKind bc, bool flip) {
        const BlurOperator op(psf, bc, truth.shape());
        const Image blurred = op.apply(truth);
        const Image data = add_noise(blurred, {config.gamma, config.seed});
        const double delta = discrepancy_delta(config.gamma, blurred.norm());
        return restore_run(op, data, reference, delta, flip, config, out / run_name(bc, flip, config.solver));
      });
  write_summary(out, rows, log);
  return kExitOk;
}

namespace {

struct SpectrumRow {
  BcKind bc;
  Shape shape;
  SpectrumReport noflip;
  SpectrumReport flip;
  std::optional<SymbolComparison> comparison;
  double trace_norm = 0.0;
  double spectral_norm = 0.0;
};

ordered_json spectrum_stats(const SpectrumReport& s) {
  ordered_json j;
  j["nonreal_count"] = s.nonreal_count;
  j["max_abs_imag"] = s.max_abs_imag;
  j["tol"] = s.tol;
  return j;
}

SpectrumRow analyze(const Psf& psf, BcKind bc, const Shape& shape, std::size_t cap,
                    const fs::path& dir) {
  const BlurOperator op(psf, bc, shape);
  const DenseMatrix a = op.assemble_dense(cap);
  SpectrumRow row{bc, shape, eigen_dense(a, 1e-10, cap), eigen_dense(flip_dense(a), 1e-10, cap),
                  std::nullopt, 0.0, 0.0};

  const bool dims_match = (psf.dims() == 1) == (shape.rank == 1);
  if (dims_match && (shape.cols % 2 == 0 || (shape.rank == 2 && shape.rows % 2 == 0))) {
    const auto nodes = psi_nodes_for(shape);
    row.comparison = compare_to_psi(row.flip, sample_psi(psf, nodes));
  }

  const std::vector<double> sv = singular_values_dense(a - op.toeplitz_part(cap), cap);
  row.trace_norm = schatten_norm(sv, 1.0);
  row.spectral_norm = schatten_norm(sv, kSchattenInf);

  fs::create_directories(dir);
  std::ostringstream os;
  write_spectrum_csv(os, row.noflip);
  write_file((dir / "eig_noflip.csv").string(), os.str());
  os.str("");
  write_spectrum_csv(os, row.flip);
  write_file((dir / "eig_flip.csv").string(), os.str());
  if (row.comparison) {
    os.str("");
    write_comparison_csv(os, *row.comparison);
    write_file((dir / "psi_comparison.csv").string(), os.str());
  }
  return row;
}

}  // namespace

int cmd_spectrum(const ExperimentConfig& config, std::ostream& log) {
  const Psf psf = load_configured_psf(config.psf, "builtin:speckle:2:7", log);
  const std::vector<Shape> sizes =
      config.sizes.empty() ? std::vector<Shape>{Shape::grid(12, 12), Shape::grid(20, 20)} : config.sizes;
  const auto bcs = selected_bcs(config, {BcKind::Zero, BcKind::Periodic, BcKind::Reflective,
                                         BcKind::AntiReflective});
  for (const Shape& s : sizes)
    if (s.size() > config.dense_cap)
      throw Error(ErrorKind::SizeCapExceeded, format_size(s) + " has " + std::to_string(s.size()) +
                                                  " unknowns, above the dense cap of " +
                                                  std::to_string(config.dense_cap));

  std::vector<std::pair<BcKind, Shape>> jobs;
  for (BcKind bc : bcs)
    for (const Shape& s : sizes) jobs.emplace_back(bc, s);
  const fs::path out(config.out);
  std::vector<std::optional<SpectrumRow>> rows(jobs.size());
  parallel_for(jobs.size(), worker_threads(), [&](std::size_t i) {
    const auto& [bc, shape] = jobs[i];
    rows[i] = analyze(psf, bc, shape, config.dense_cap,
                      out / std::string(to_string(bc)) / format_size(shape));
  });

  ordered_json entries = ordered_json::array();
  std::ostringstream w_norms;
  w_norms << "bc,size,n,trace_norm,spectral_norm\n";
  log << std::left << std::setw(16) << "bc" << std::setw(8) << "size" << std::setw(18)
      << "nonreal no/flip" << std::setw(22) << "max|Im| no/flip" << "mean|dev|\n";
  for (const auto& r : rows) {
    ordered_json e;
    e["bc"] = std::string(to_string(r->bc));
    e["size"] = format_size(r->shape);
    e["n"] = r->shape.size();
    e["noflip"] = spectrum_stats(r->noflip);
    e["flip"] = spectrum_stats(r->flip);
    if (r->comparison) {
      ordered_json c;
      c["max_abs_dev"] = r->comparison->max_abs_dev;
      c["mean_abs_dev"] = r->comparison->mean_abs_dev;
      e["psi_comparison"] = c;
    } else {
      e["psi_comparison"] = nullptr;
    }
    e["w_trace_norm"] = r->trace_norm;
    e["w_spectral_norm"] = r->spectral_norm;
    entries.push_back(e);

    w_norms << to_string(r->bc) << ',' << format_size(r->shape) << ',' << r->shape.size() << ','
            << fmt(r->trace_norm, "%.17g") << ',' << fmt(r->spectral_norm, "%.17g") << '\n';
    log << std::left << std::setw(16) << to_string(r->bc) << std::setw(8) << format_size(r->shape)
        << std::setw(18)
        << (std::to_string(r->noflip.nonreal_count) + " / " + std::to_string(r->flip.nonreal_count))
        << std::setw(22) << (fmt(r->noflip.max_abs_imag, "%.2e") + " / " + fmt(r->flip.max_abs_imag, "%.2e"))
        << (r->comparison ? fmt(r->comparison->mean_abs_dev, "%.4g") : std::string("-")) << '\n';
  }
  ordered_json doc;
  doc["config"] = describe(config);
  doc["entries"] = entries;
  write_file((out / "spectrum.json").string(), dump(doc));
  write_file((out / "w_norms.csv").string(), w_norms.str());
  return kExitOk;
}

namespace {

struct Flags {
  std::string config_path;
  std::string psf;
  std::string image;
  std::string synth;
  std::vector<std::string> sizes;
  std::string bc;
  std::string solver;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  double tau = 1.0;
  std::size_t max_iter = 0;
  std::size_t dense_cap = 0;
  std::string psnr;
  std::string out;
  std::string input;
};

void add_experiment_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "flat JSON configuration; flags override it");
  cmd->add_option("--psf", f.psf, "PSF text file or builtin:motion[:m], builtin:speckle[:m[:seed]], "
                                  "builtin:gaussian[:m[:sigma]]");
  cmd->add_option("--image", f.image, "PGM image (P2 or P5) used as the true image");
  cmd->add_option("--synth", f.synth, "synthetic true image: ramp, checker or blob");
  cmd->add_option("--size", f.sizes, "N for a 1D signal or RxC for an image; repeatable");
  cmd->add_option("--bc", f.bc, "zero, periodic, reflective or antireflective");
  cmd->add_flag("--flip,!--no-flip", "solve the flipped system (both when neither is given)");
  cmd->add_option("--solver", f.solver, "gmres or minres");
  cmd->add_option("--gamma", f.gamma, "relative noise level");
  cmd->add_option("--seed", f.seed, "noise seed");
  cmd->add_option("--tau", f.tau, "discrepancy safety factor (>= 1)");
  cmd->add_option("--max-iter", f.max_iter, "iteration budget");
  cmd->add_flag("--stop-at-discrepancy", "halt as soon as the discrepancy principle is met");
  cmd->add_option("--psnr", f.psnr, "pixel-count or root-pixel-count");
  cmd->add_option("--dense-cap", f.dense_cap, "largest dense operator size");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--input", f.input, "directory written by 'blur' (deblur only)");
}

bool given(const CLI::App* cmd, const char* name) {
  const CLI::Option* opt = cmd->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

ExperimentConfig build_config(const CLI::App* cmd, const Flags& f) {
  ExperimentConfig config;
  if (given(cmd, "--config")) apply_json(config, read_file(f.config_path));
  auto require = [](auto parsed, const char* field, const char* expected) {
    if (!parsed) throw Error(ErrorKind::UsageError, std::string(field) + ": expected " + expected);
    return *parsed;
  };
  if (given(cmd, "--psf")) config.psf = f.psf;
  if (given(cmd, "--image")) config.image_path = f.image;
  if (given(cmd, "--synth")) config.synth = require(parse_synth(f.synth), "synth", "ramp, checker or blob");
  if (given(cmd, "--size")) {
    config.sizes.clear();
    for (const auto& s : f.sizes) config.sizes.push_back(parse_size(s));
  }
  if (given(cmd, "--bc"))
    config.bc = require(parse_bc(f.bc), "bc", "zero, periodic, reflective or antireflective");
  if (given(cmd, "--flip")) config.flip = cmd->get_option("--flip")->as<bool>();
  if (given(cmd, "--solver")) config.solver = require(parse_solver(f.solver), "solver", "gmres or minres");
  if (given(cmd, "--gamma")) config.gamma = f.gamma;
  if (given(cmd, "--seed")) config.seed = f.seed;
  if (given(cmd, "--tau")) config.tau = f.tau;
  if (given(cmd, "--max-iter")) config.max_iter = f.max_iter;
  if (given(cmd, "--stop-at-discrepancy")) config.stop_at_discrepancy = true;
  if (given(cmd, "--psnr"))
    config.psnr = require(parse_psnr_convention(f.psnr), "psnr", "pixel-count or root-pixel-count");
  if (given(cmd, "--dense-cap")) config.dense_cap = f.dense_cap;
  if (given(cmd, "--out")) config.out = f.out;
  if (given(cmd, "--input")) config.input = f.input;
  validate(config);
  return config;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NumericalFailure:
    case ErrorKind::EigensolverFailure:
    case ErrorKind::NotSymmetric:
      return kExitNumerical;
    default:
      return kExitUsage;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deblurring experiments with structured boundary conditions and the flip "
               "preconditioner",
               "flipblur"};
  app.require_subcommand(1);
  Flags flags;
  CLI::App* blur = app.add_subcommand("blur", "blur and add noise to a true image");
  CLI::App* deblur = app.add_subcommand("deblur", "restore the output of 'blur' over a BC/flip grid");
  CLI::App* grid = app.add_subcommand("grid", "blur under each BC and restore, flipped and not");
  CLI::App* spectrum = app.add_subcommand("spectrum", "dense eigenvalue and symbol analysis");
  CLI::App* verify = app.add_subcommand("verify", "run the built-in operator oracle suite");
  for (CLI::App* cmd : {blur, deblur, grid, spectrum}) add_experiment_flags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(out);
    for (auto [cmd, fn] : {std::pair{blur, &cmd_blur}, std::pair{deblur, &cmd_deblur},
                           std::pair{grid, &cmd_grid}, std::pair{spectrum, &cmd_spectrum}})
      if (cmd->parsed()) return fn(build_config(cmd, flags), out);
  } catch (const Error& e) {
    err << "flipblur: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "flipblur: io-error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::bad_alloc&) {
    err << "flipblur: out of memory\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace flipblur::cli
