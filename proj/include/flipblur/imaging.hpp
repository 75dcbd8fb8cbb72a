#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "flipblur/image.hpp"

namespace flipblur {

struct NoiseSpec {
  double gamma = 0.0;  // relative noise level
  std::uint64_t seed = 0;
};

/// g + zeta / ||zeta|| * gamma * ||g|| with zeta seeded Gaussian white noise,
/// so the perturbation has 2-norm exactly gamma * ||g||.
Image add_noise(const Image& g, const NoiseSpec& spec);

/// ||candidate - truth|| / ||truth||.
double rre(const Image& candidate, const Image& truth);

enum class PsnrConvention {
  PixelCount,      // 20 log10(N max(f) / ||e||), N the number of pixels
  RootPixelCount,  // 20 log10(sqrt(N) max(f) / ||e||) = 20 log10(max(f) / RMSE)
};

/// Returns +infinity when candidate equals truth.
double psnr(const Image& candidate, const Image& truth,
            PsnrConvention convention = PsnrConvention::PixelCount);

struct Metrics {
  double rre = 0.0;
  double psnr = 0.0;
};

Metrics measure(const Image& candidate, const Image& truth,
                PsnrConvention convention = PsnrConvention::PixelCount);

/// P2 (ASCII) or P5 (binary, 8 or 16 bit big-endian) graymap, scaled to [0, 1].
Image read_pgm(std::string_view bytes);

enum class PgmEncoding { Ascii, Binary };

/// Clamps to [0, 1] and quantizes to round(v * maxval), maxval in [1, 65535].
std::string write_pgm(const Image& img, unsigned maxval = 255,
                      PgmEncoding encoding = PgmEncoding::Binary);

enum class SynthKind { Ramp, Checker, Blob };

std::optional<SynthKind> parse_synth(std::string_view name);
std::string_view to_string(SynthKind kind);

/// Deterministic test images with values in [0, 1].
///   ramp     linear from 0 at the first pixel to 1 at the last corner
///   checker  alternating 0/1 blocks of side max(1, min extent / 8)
///   blob     background 0.1 plus two Gaussians; nonzero on the boundary
Image synth_image(SynthKind kind, const Shape& shape);

}  // namespace flipblur
