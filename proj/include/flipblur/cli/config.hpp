#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "flipblur/boundary.hpp"
#include "flipblur/image.hpp"
#include "flipblur/imaging.hpp"
#include "flipblur/psf.hpp"
#include "flipblur/restore.hpp"

namespace flipblur::cli {

// One experiment description. An unset bc or flip means "every value" for the
// commands that sweep a grid; an unset psf selects the command's default.
struct ExperimentConfig {
  std::optional<std::string> psf;
  std::optional<std::string> image_path;
  SynthKind synth = SynthKind::Blob;
  std::vector<Shape> sizes;
  std::optional<BcKind> bc;
  std::optional<bool> flip;
  SolverKind solver = SolverKind::Gmres;
  double gamma = 0.01;
  std::uint64_t seed = 42;
  double tau = 1.0;
  std::size_t max_iter = 100;
  bool stop_at_discrepancy = false;
  PsnrConvention psnr = PsnrConvention::PixelCount;
  std::size_t dense_cap = kDefaultDenseCap;
  std::string out = "flipblur-out";
  std::optional<std::string> input;
};

/// "N" is a 1D signal of length N, "RxC" a grid.
Shape parse_size(std::string_view text);
std::string format_size(const Shape& shape);

/// Resolves a PSF specification:
///   builtin:motion[:m]            default m = 6
///   builtin:speckle[:m[:seed]]    default m = 2, seed = 7
///   builtin:gaussian[:m[:sigma]]  default m = 2, sigma = 1
///   anything else                 path to a PSF text file
LoadedPsf resolve_psf(const std::string& spec);

/// Overlays the keys of a flat JSON object onto `config`. Unknown keys and
/// ill-typed values raise usage-error naming the field.
void apply_json(ExperimentConfig& config, std::string_view json_text);

/// Range and existence checks; usage-error names the offending field.
void validate(const ExperimentConfig& config);

/// Deterministic JSON rendering of the fields that define the experiment
/// (output and input locations are excluded).
nlohmann::ordered_json describe(const ExperimentConfig& config);

std::string_view to_string(PsnrConvention convention);
std::optional<PsnrConvention> parse_psnr_convention(std::string_view name);

/// Whole-file read and write; failures raise io-error with the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

/// FLIPBLUR_THREADS when set to a positive integer, else the hardware count,
/// never below one.
std::size_t worker_threads();

}  // namespace flipblur::cli
