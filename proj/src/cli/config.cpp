#include "flipblur/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "flipblur/error.hpp"

namespace flipblur::cli {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void usage(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::UsageError, field + ": " + what);
}

template <typename T>
T parse_number(std::string_view text, const std::string& field) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) usage(field, "not a number: '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto pos = text.find(sep);
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) return parts;
    text.remove_prefix(pos + 1);
  }
}

}  // namespace

Shape parse_size(std::string_view text) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) {
    const auto n = parse_number<std::size_t>(text, "size");
    if (n == 0) usage("size", "extent must be positive");
    return Shape::line(n);
  }
  const auto rows = parse_number<std::size_t>(text.substr(0, x), "size");
  const auto cols = parse_number<std::size_t>(text.substr(x + 1), "size");
  if (rows == 0 || cols == 0) usage("size", "extents must be positive");
  return Shape::grid(rows, cols);
}

std::string format_size(const Shape& shape) {
  if (shape.rank == 1) return std::to_string(shape.cols);
  return std::to_string(shape.rows) + "x" + std::to_string(shape.cols);
}

LoadedPsf resolve_psf(const std::string& spec) {
  constexpr std::string_view prefix = "builtin:";
  if (!spec.starts_with(prefix)) return load_psf(read_file(spec));

  const auto parts = split(std::string_view(spec).substr(prefix.size()), ':');
  const std::string_view name = parts[0];
  auto arg = [&](std::size_t i) -> std::optional<std::string_view> {
    if (i < parts.size()) return parts[i];
    return std::nullopt;
  };
  auto size_arg = [&](std::size_t i, std::size_t fallback) {
    auto a = arg(i);
    return a ? parse_number<std::size_t>(*a, "psf") : fallback;
  };
  if (name == "motion") {
    if (parts.size() > 2) usage("psf", "builtin:motion takes at most one parameter");
    return {motion_psf(size_arg(1, 6)), false};
  }
  if (name == "speckle") {
    if (parts.size() > 3) usage("psf", "builtin:speckle takes at most two parameters");
    const auto seed = arg(2) ? parse_number<std::uint64_t>(*arg(2), "psf") : 7;
    return {speckle_psf(size_arg(1, 2), seed), false};
  }
  if (name == "gaussian") {
    if (parts.size() > 3) usage("psf", "builtin:gaussian takes at most two parameters");
    const double sigma = arg(2) ? parse_number<double>(*arg(2), "psf") : 1.0;
    if (!(sigma > 0.0)) usage("psf", "gaussian sigma must be positive");
    return {gaussian_psf(size_arg(1, 2), sigma), false};
  }
  usage("psf", "unknown builtin '" + std::string(name) + "'");
}

std::string_view to_string(PsnrConvention convention) {
  return convention == PsnrConvention::PixelCount ? "pixel-count" : "root-pixel-count";
}

std::optional<PsnrConvention> parse_psnr_convention(std::string_view name) {
  if (name == "pixel-count") return PsnrConvention::PixelCount;
  if (name == "root-pixel-count") return PsnrConvention::RootPixelCount;
  return std::nullopt;
}

void apply_json(ExperimentConfig& config, std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    usage("config", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) usage("config", "top level must be an object");

  for (const auto& [key, value] : doc.items()) {
    auto need = [&](bool ok, const char* type) {
      if (!ok) usage(key, std::string("expected ") + type);
    };
    auto text = [&] {
      need(value.is_string(), "a string");
      return value.get<std::string>();
    };
    auto count = [&] {
      need(value.is_number_unsigned(), "a nonnegative integer");
      return value.get<std::uint64_t>();
    };
    auto real = [&] {
      need(value.is_number(), "a number");
      return value.get<double>();
    };

    if (key == "psf") {
      config.psf = text();
    } else if (key == "image") {
      config.image_path = text();
    } else if (key == "synth") {
      auto kind = parse_synth(text());
      if (!kind) usage(key, "expected ramp, checker or blob");
      config.synth = *kind;
    } else if (key == "size") {
      config.sizes.clear();
      if (value.is_array()) {
        for (const auto& item : value) {
          if (!item.is_string()) usage(key, "expected strings such as \"64x64\"");
          config.sizes.push_back(parse_size(item.get<std::string>()));
        }
      } else {
        config.sizes.push_back(parse_size(text()));
      }
    } else if (key == "bc") {
      auto bc = parse_bc(text());
      if (!bc) usage(key, "expected zero, periodic, reflective or antireflective");
      config.bc = *bc;
    } else if (key == "flip") {
      need(value.is_boolean(), "a boolean");
      config.flip = value.get<bool>();
    } else if (key == "solver") {
      auto solver = parse_solver(text());
      if (!solver) usage(key, "expected gmres or minres");
      config.solver = *solver;
    } else if (key == "gamma") {
      config.gamma = real();
    } else if (key == "seed") {
      config.seed = count();
    } else if (key == "tau") {
      config.tau = real();
    } else if (key == "max_iter") {
      config.max_iter = count();
    } else if (key == "stop_at_discrepancy") {
      need(value.is_boolean(), "a boolean");
      config.stop_at_discrepancy = value.get<bool>();
    } else if (key == "psnr") {
      auto convention = parse_psnr_convention(text());
      if (!convention) usage(key, "expected pixel-count or root-pixel-count");
      config.psnr = *convention;
    } else if (key == "dense_cap") {
      config.dense_cap = count();
    } else if (key == "out") {
      config.out = text();
    } else if (key == "input") {
      config.input = text();
    } else {
      usage(key, "unknown configuration key");
    }
  }
}

void validate(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  if (!std::isfinite(config.gamma) || config.gamma < 0.0) usage("gamma", "must be finite and >= 0");
  if (!std::isfinite(config.tau) || config.tau < 1.0) usage("tau", "must be finite and >= 1");
  if (config.max_iter < 1) usage("max_iter", "must be >= 1");
  if (config.dense_cap < 1) usage("dense_cap", "must be >= 1");
  if (config.out.empty()) usage("out", "must not be empty");
  if (config.psf && !config.psf->starts_with("builtin:") && !fs::is_regular_file(*config.psf))
    usage("psf", "no such file '" + *config.psf + "'");
  if (config.image_path && !fs::is_regular_file(*config.image_path))
    usage("image", "no such file '" + *config.image_path + "'");
  if (config.input && !fs::is_directory(*config.input))
    usage("input", "no such directory '" + *config.input + "'");
}

ordered_json describe(const ExperimentConfig& config) {
  ordered_json j;
  j["psf"] = config.psf ? ordered_json(*config.psf) : ordered_json();
  if (config.image_path)
    j["image"] = *config.image_path;
  else
    j["synth"] = std::string(to_string(config.synth));
  ordered_json sizes = ordered_json::array();
  for (const Shape& s : config.sizes) sizes.push_back(format_size(s));
  j["size"] = sizes;
  j["bc"] = config.bc ? ordered_json(std::string(to_string(*config.bc))) : ordered_json();
  j["flip"] = config.flip ? ordered_json(*config.flip) : ordered_json();
  j["solver"] = std::string(to_string(config.solver));
  j["gamma"] = config.gamma;
  j["seed"] = config.seed;
  j["tau"] = config.tau;
  j["max_iter"] = config.max_iter;
  j["stop_at_discrepancy"] = config.stop_at_discrepancy;
  j["psnr"] = std::string(to_string(config.psnr));
  j["dense_cap"] = config.dense_cap;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot create '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

std::size_t worker_threads() {
  std::size_t n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("FLIPBLUR_THREADS")) {
    std::size_t cap = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
    if (ec == std::errc() && ptr == text.data() + text.size() && cap > 0)
      n = n == 0 ? cap : std::min(n, cap);
  }
  return std::max<std::size_t>(n, 1);
}

}  // namespace flipblur::cli
