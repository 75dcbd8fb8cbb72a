#include "flipblur/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "flipblur/error.hpp"
#include "flipblur/random.hpp"

namespace flipblur {

namespace {

void check_same_shape(const Image& a, const Image& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionError, "image shapes differ");
}

double diff_norm(const Image& a, const Image& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

Image add_noise(const Image& g, const NoiseSpec& spec) {
  if (!std::isfinite(spec.gamma)) throw Error(ErrorKind::InvalidNoise, "gamma must be finite");
  if (spec.gamma < 0.0) throw Error(ErrorKind::InvalidNoise, "gamma must be >= 0");
  const double scale = spec.gamma * g.norm();
  if (scale == 0.0) return g;

  GaussianStream gauss(spec.seed);
  std::vector<double> zeta(g.size());
  double zeta_sq = 0.0;
  for (double& z : zeta) {
    z = gauss.next();
    zeta_sq += z * z;
  }
  const double factor = scale / std::sqrt(zeta_sq);
  std::vector<double> out(g.values());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += factor * zeta[i];
  return Image(g.shape(), std::move(out));
}

double rre(const Image& candidate, const Image& truth) {
  check_same_shape(candidate, truth);
  const double truth_norm = truth.norm();
  if (truth_norm == 0.0) throw Error(ErrorKind::UndefinedRre, "truth has zero norm");
  return diff_norm(candidate, truth) / truth_norm;
}

double psnr(const Image& candidate, const Image& truth, PsnrConvention convention) {
  check_same_shape(candidate, truth);
  const double err = diff_norm(candidate, truth);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  const auto pixels = static_cast<double>(truth.size());
  const double count = convention == PsnrConvention::PixelCount ? pixels : std::sqrt(pixels);
  return 20.0 * std::log10(count * truth.max() / err);
}

Metrics measure(const Image& candidate, const Image& truth, PsnrConvention convention) {
  return {rre(candidate, truth), psnr(candidate, truth, convention)};
}

namespace {

class PgmCursor {
 public:
  explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      if (value > 1'000'000'000ul) throw Error(ErrorKind::FormatError, std::string(what) + " too large");
      ++pos_;
    }
    if (pos_ == start) throw Error(ErrorKind::FormatError, std::string("expected ") + what);
    return value;
  }

  // Exactly one whitespace byte separates the header from binary data.
  void single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
      throw Error(ErrorKind::FormatError, "missing whitespace after header");
    ++pos_;
  }

  std::string_view rest() const { return bytes_.substr(pos_); }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Image read_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw Error(ErrorKind::FormatError, "bad PGM magic number");
  const bool binary = bytes[1] == '5';
  PgmCursor cur(bytes.substr(2));
  const unsigned long width = cur.number("width");
  const unsigned long height = cur.number("height");
  const unsigned long maxval = cur.number("maxval");
  if (width == 0 || height == 0) throw Error(ErrorKind::FormatError, "zero image dimension");
  if (maxval == 0 || maxval > 65535) throw Error(ErrorKind::FormatError, "maxval out of range");

  const std::size_t count = width * height;
  std::vector<double> data(count);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    cur.single_space();
    const std::string_view raw = cur.rest();
    const std::size_t bytes_per = maxval < 256 ? 1 : 2;
    if (raw.size() < count * bytes_per) throw Error(ErrorKind::FormatError, "truncated raster");
    for (std::size_t i = 0; i < count; ++i) {
      unsigned long v = static_cast<unsigned char>(raw[i * bytes_per]);
      if (bytes_per == 2) v = (v << 8) | static_cast<unsigned char>(raw[i * 2 + 1]);
      if (v > maxval) throw Error(ErrorKind::FormatError, "sample exceeds maxval");
      data[i] = static_cast<double>(v) * scale;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const unsigned long v = cur.number("sample");
      if (v > maxval) throw Error(ErrorKind::FormatError, "sample exceeds maxval");
      data[i] = static_cast<double>(v) * scale;
    }
  }
  return Image(Shape::grid(height, width), std::move(data));
}

std::string write_pgm(const Image& img, unsigned maxval, PgmEncoding encoding) {
  if (maxval == 0 || maxval > 65535) throw Error(ErrorKind::FormatError, "maxval out of range");
  std::string out = encoding == PgmEncoding::Binary ? "P5\n" : "P2\n";
  out += std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n" +
         std::to_string(maxval) + "\n";
  auto quantize = [&](double v) {
    return static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * maxval));
  };
  if (encoding == PgmEncoding::Binary) {
    for (double v : img.data()) {
      const unsigned q = quantize(v);
      if (maxval >= 256) out.push_back(static_cast<char>(q >> 8));
      out.push_back(static_cast<char>(q & 0xff));
    }
  } else {
    for (std::size_t r = 0; r < img.rows(); ++r) {
      for (std::size_t c = 0; c < img.cols(); ++c) {
        if (c) out.push_back(' ');
        out += std::to_string(quantize(img(r, c)));
      }
      out.push_back('\n');
    }
  }
  return out;
}

std::optional<SynthKind> parse_synth(std::string_view name) {
  if (name == "ramp") return SynthKind::Ramp;
  if (name == "checker") return SynthKind::Checker;
  if (name == "blob") return SynthKind::Blob;
  return std::nullopt;
}

std::string_view to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::Ramp: return "ramp";
    case SynthKind::Checker: return "checker";
    case SynthKind::Blob: return "blob";
  }
  return "unknown";
}

Image synth_image(SynthKind kind, const Shape& shape) {
  Image img(shape);
  const std::size_t rows = shape.rows, cols = shape.cols;
  auto unit = [](std::size_t i, std::size_t n) {
    return n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
  };
  switch (kind) {
    case SynthKind::Ramp: {
      const std::size_t span = rows + cols - 2;
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
          img(r, c) = span ? static_cast<double>(r + c) / static_cast<double>(span) : 0.0;
      break;
    }
    case SynthKind::Checker: {
      const std::size_t extent = shape.rank == 1 ? cols : std::min(rows, cols);
      const std::size_t block = std::max<std::size_t>(1, extent / 8);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) img(r, c) = static_cast<double>((r / block + c / block) % 2);
      break;
    }
    case SynthKind::Blob: {
      auto bump = [](double x, double y, double cx, double cy, double s) {
        return std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (2.0 * s * s));
      };
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          const double x = unit(c, cols);
          const double y = shape.rank == 1 ? 0.5 : unit(r, rows);
          img(r, c) = 0.1 + 0.55 * bump(x, y, 0.35, 0.4, 0.18) + 0.35 * bump(x, y, 0.7, 0.68, 0.1);
        }
      break;
    }
  }
  return img;
}

}  // namespace flipblur
