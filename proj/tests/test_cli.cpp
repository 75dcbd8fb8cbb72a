#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "doctest.h"
#include "support.hpp"

#include "flipblur/boundary.hpp"
#include "flipblur/cli/commands.hpp"
#include "flipblur/cli/config.hpp"
#include "flipblur/cli/verify.hpp"
#include "flipblur/image.hpp"

using namespace flipblur;
using namespace flipblur::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("flipblur-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  fs::path operator/(const std::string& name) const { return path_ / name; }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "flipblur");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json load_json(const fs::path& p) { return json::parse(read_file(p.string())); }

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = read_file(e.path().string());
  return files;
}

std::vector<double> grid_values(const fs::path& p) { return parse_text_grid(read_file(p.string())).values; }

}  // namespace

TEST_CASE("size and PSF specifications") {
  CHECK(parse_size("8") == Shape::line(8));
  CHECK(parse_size("12x20") == Shape::grid(12, 20));
  CHECK(format_size(Shape::grid(12, 20)) == "12x20");
  CHECK(format_size(Shape::line(8)) == "8");
  for (const char* bad : {"0", "x", "3x", "-1", "12x0", "4y4", "", "1.5"}) {
    CAPTURE(bad);
    CHECK_ERROR(parse_size(bad), ErrorKind::UsageError);
  }

  CHECK(resolve_psf("builtin:motion").psf.cols() == 13);
  CHECK(resolve_psf("builtin:motion:2").psf.cols() == 5);
  CHECK(resolve_psf("builtin:speckle").psf.rows() == 5);
  CHECK(resolve_psf("builtin:gaussian:1:0.5").psf.is_centrosymmetric(1e-15));
  CHECK_ERROR(resolve_psf("builtin:blurry"), ErrorKind::UsageError);
  CHECK_ERROR(resolve_psf("builtin:motion:2:3"), ErrorKind::UsageError);
  CHECK_ERROR(resolve_psf("builtin:gaussian:2:-1"), ErrorKind::UsageError);
  CHECK_ERROR(resolve_psf("/no/such/psf.txt"), ErrorKind::IoError);

  TempDir dir;
  write_file((dir / "psf.txt").string(), "1 2 1\n");
  const LoadedPsf loaded = resolve_psf((dir / "psf.txt").string());
  CHECK(loaded.renormalized);
  CHECK(loaded.psf.at(0) == doctest::Approx(0.5));
}

TEST_CASE("JSON configuration") {
  ExperimentConfig c;
  apply_json(c, R"({"bc": "antireflective", "flip": true, "size": ["8x8", "12"], "gamma": 0.02,
                   "seed": 9, "solver": "minres", "psnr": "root-pixel-count", "max_iter": 7})");
  CHECK(c.bc == BcKind::AntiReflective);
  CHECK(c.flip == true);
  CHECK(c.sizes == std::vector<Shape>{Shape::grid(8, 8), Shape::line(12)});
  CHECK(c.gamma == 0.02);
  CHECK(c.seed == 9);
  CHECK(c.solver == SolverKind::Minres);
  CHECK(c.psnr == PsnrConvention::RootPixelCount);
  CHECK(c.max_iter == 7);
  apply_json(c, R"({"size": "16x16"})");
  CHECK(c.sizes == std::vector<Shape>{Shape::grid(16, 16)});

  const auto message = [](const char* text) {
    ExperimentConfig cc;
    try {
      apply_json(cc, text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UsageError);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"colour": 1})").find("colour") != std::string::npos);
  CHECK(message(R"({"gamma": "big"})").find("gamma") != std::string::npos);
  CHECK(message(R"({"bc": "mirror"})").find("bc") != std::string::npos);
  CHECK(message(R"([1, 2])").find("config") != std::string::npos);
  CHECK(message(R"({"gamma": )").find("config") != std::string::npos);

  const auto d = describe(c);
  CHECK_FALSE(d.contains("out"));
  CHECK_FALSE(d.contains("input"));
  CHECK(d.at("bc") == "antireflective");
  CHECK(describe(c).dump() == d.dump());
}

TEST_CASE("validation names the field") {
  const auto field_of = [](auto mutate) {
    ExperimentConfig c;
    mutate(c);
    try {
      validate(c);
    } catch (const Error& e) {
      const std::string w = e.what();  // "usage-error: field: what"
      const std::size_t start = w.find(": ") + 2;
      return w.substr(start, w.find(':', start) - start);
    }
    return std::string();
  };
  CHECK(field_of([](ExperimentConfig&) {}).empty());
  CHECK(field_of([](ExperimentConfig& c) { c.gamma = -1; }) == "gamma");
  CHECK(field_of([](ExperimentConfig& c) { c.tau = 0.5; }) == "tau");
  CHECK(field_of([](ExperimentConfig& c) { c.max_iter = 0; }) == "max_iter");
  CHECK(field_of([](ExperimentConfig& c) { c.psf = "/missing.txt"; }) == "psf");
  CHECK(field_of([](ExperimentConfig& c) { c.image_path = "/missing.pgm"; }) == "image");
  CHECK(field_of([](ExperimentConfig& c) { c.input = "/missing-dir"; }) == "input");
}

TEST_CASE("exit codes") {
  CHECK(invoke({"--help"}).code == kExitOk);
  CHECK(invoke({}).code == kExitUsage);
  CHECK(invoke({"paint"}).code == kExitUsage);
  CHECK(invoke({"blur", "--gamma", "-1"}).code == kExitUsage);
  CHECK(invoke({"blur", "--bc", "sideways"}).code == kExitUsage);
  CHECK(invoke({"blur", "--tau", "0.5"}).code == kExitUsage);
  CHECK(invoke({"deblur"}).code == kExitUsage);
  CHECK(invoke({"blur", "--config", "/no/such/config.json"}).code == kExitUsage);

  TempDir dir;
  const Outcome cap = invoke({"spectrum", "--size", "20x20", "--dense-cap", "100", "--out", dir.str()});
  CHECK(cap.code == kExitUsage);
  CHECK(cap.err.find("size-cap") != std::string::npos);

  const Outcome v = invoke({"verify"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("FAIL") == std::string::npos);
}

TEST_CASE("blur") {
  SUBCASE("sidecar records the noise norm") {
    TempDir dir;
    REQUIRE(invoke({"blur", "--size", "64x64", "--out", dir.str()}).code == kExitOk);
    const json side = load_json(dir / "blurred.json");
    CHECK(side.at("gamma") == 0.01);
    CHECK(side.at("seed") == 42);
    CHECK(side.at("shape") == "64x64");
    const double anorm = side.at("blurred_norm");
    CHECK(side.at("delta").get<double>() == doctest::Approx(0.01 * anorm).epsilon(1e-15));
    CHECK(side.at("noise_norm").get<double>() == doctest::Approx(0.01 * anorm).epsilon(1e-12));
    const Image pgm = read_pgm(read_file((dir / "blurred.pgm").string()));
    CHECK(pgm.rows() == 64);
    for (const char* f : {"truth.txt", "blurred.txt", "psf.txt"}) CHECK(fs::exists(dir / f));
  }
  SUBCASE("constant image is a fixed point of the reflective rule without noise") {
    TempDir dir;
    std::string pgm = "P2\n9 7\n255\n";
    for (int i = 0; i < 63; ++i) pgm += "128 ";
    write_file((dir / "flat.pgm").string(), pgm);
    REQUIRE(invoke({"blur", "--image", (dir / "flat.pgm").string(), "--gamma", "0", "--bc", "reflective",
                    "--psf", "builtin:speckle:2:5", "--out", (dir / "run").string()})
                .code == kExitOk);
    const auto blurred = grid_values(dir / "run" / "blurred.txt");
    REQUIRE(blurred.size() == 63);
    for (double v : blurred) CHECK(v == doctest::Approx(128.0 / 255.0).epsilon(1e-14));
  }
}

TEST_CASE("deblur") {
  SUBCASE("identity kernel without noise restores at the first iteration") {
    TempDir dir;
    write_file((dir / "delta.txt").string(), "1\n");
    REQUIRE(invoke({"blur", "--psf", (dir / "delta.txt").string(), "--gamma", "0", "--size", "16x16",
                    "--out", (dir / "in").string()})
                .code == kExitOk);
    REQUIRE(invoke({"deblur", "--input", (dir / "in").string(), "--bc", "reflective", "--no-flip",
                    "--out", (dir / "out").string()})
                .code == kExitOk);
    const json m = load_json(dir / "out" / "reflective-noflip-gmres" / "metrics.json");
    CHECK(m.size() == 2);
    CHECK(m.at("best").at("iter") == 1);
    CHECK(m.at("best").at("rre").get<double>() < 1e-12);
    const json s = load_json(dir / "out" / "reflective-noflip-gmres" / "solve.json");
    CHECK(s.at("iterations") == 1);
    CHECK(s.at("breakdown") == "lucky");
  }
  SUBCASE("grid of runs with metrics and histories") {
    TempDir dir;
    REQUIRE(invoke({"blur", "--size", "32x32", "--out", (dir / "in").string()}).code == kExitOk);
    REQUIRE(invoke({"deblur", "--input", (dir / "in").string(), "--max-iter", "25", "--out",
                    (dir / "out").string()})
                .code == kExitOk);
    std::size_t runs = 0;
    for (BcKind bc : kAllBcs)
      for (const char* flip : {"flip", "noflip"}) {
        const fs::path run_dir = dir / "out" / (std::string(to_string(bc)) + "-" + flip + "-gmres");
        REQUIRE(fs::exists(run_dir / "metrics.json"));
        const json m = load_json(run_dir / "metrics.json");
        CHECK(std::vector<std::string>{m.items().begin().key(), std::next(m.items().begin()).key()} ==
              std::vector<std::string>{"best", "discrepancy"});
        CHECK(m.at("best").at("rre").get<double>() > 0.0);
        const json s = load_json(run_dir / "solve.json");
        CHECK(s.at("iterations") == 25);
        const std::string hist = read_file((run_dir / "history.csv").string());
        CHECK(std::count(hist.begin(), hist.end(), '\n') == 27);
        CHECK(fs::exists(run_dir / "restored_best.pgm"));
        ++runs;
      }
    CHECK(runs == 8);
    CHECK(fs::exists(dir / "out" / "summary.csv"));
  }
  SUBCASE("stop at discrepancy") {
    TempDir dir;
    REQUIRE(invoke({"blur", "--size", "32x32", "--bc", "antireflective", "--out", (dir / "in").string()}).code ==
            kExitOk);
    REQUIRE(invoke({"deblur", "--input", (dir / "in").string(), "--bc", "antireflective", "--flip",
                    "--stop-at-discrepancy", "--out", (dir / "out").string()})
                .code == kExitOk);
    const json s = load_json(dir / "out" / "antireflective-flip-gmres" / "solve.json");
    CHECK(s.at("stopped_by") == "discrepancy");
    CHECK(s.at("iterations") == s.at("discrepancy_iter"));
  }
}

TEST_CASE("runs are byte-identical") {
  TempDir a, b;
  for (const TempDir* d : {&a, &b}) {
    REQUIRE(invoke({"blur", "--size", "24x24", "--psf", "builtin:speckle", "--out", (*d / "in").string()}).code ==
            kExitOk);
    REQUIRE(invoke({"deblur", "--input", (*d / "in").string(), "--max-iter", "12", "--out", (*d / "out").string()})
                .code == kExitOk);
    REQUIRE(invoke({"grid", "--size", "16x16", "--max-iter", "8", "--out", (*d / "grid").string()}).code == kExitOk);
    REQUIRE(invoke({"spectrum", "--size", "8x8", "--size", "10x10", "--out", (*d / "spec").string()}).code ==
            kExitOk);
  }
  const auto sa = snapshot(fs::path(a.str()));
  const auto sb = snapshot(fs::path(b.str()));
  CHECK(sa.size() == sb.size());
  CHECK(sa.size() > 50);
  for (const auto& [name, bytes] : sa) {
    CAPTURE(name);
    REQUIRE(sb.count(name) == 1);
    CHECK(sb.at(name) == bytes);
  }
}

TEST_CASE("spectrum") {
  TempDir dir;
  ExperimentConfig c;
  c.sizes = {Shape::grid(8, 8), Shape::grid(10, 10)};
  c.out = dir.str();
  std::ostringstream log;
  REQUIRE(cmd_spectrum(c, log) == kExitOk);
  const json s = load_json(dir / "spectrum.json");
  CHECK(s.at("entries").size() == 8);
  for (const json& e : s.at("entries")) {
    const std::string bc = e.at("bc");
    if (bc == "zero" || bc == "periodic") CHECK(e.at("flip").at("nonreal_count") == 0);
    CHECK(e.at("noflip").at("nonreal_count").get<int>() % 2 == 0);
    CHECK(fs::exists(dir / bc / e.at("size").get<std::string>() / "eig_flip.csv"));
  }
  const std::string norms = read_file((dir / "w_norms.csv").string());
  CHECK(norms.rfind("bc,size,n,trace_norm,spectral_norm\n", 0) == 0);
  CHECK(std::count(norms.begin(), norms.end(), '\n') == 9);
}

TEST_CASE("verification suite") {
  const auto results = run_verification();
  CHECK(results.size() >= 10);
  for (const CheckResult& r : results) {
    CAPTURE(r.name);
    CAPTURE(r.detail);
    CHECK(r.passed);
  }
  CHECK(std::any_of(results.begin(), results.end(),
                    [](const CheckResult& r) { return r.name == "minimal-size-n5-m2"; }));

  SUBCASE("a corrupted anti-reflective corner rule is caught") {
    // Replaces the corner ghosts by the nearest image pixel.
    const ExtendFn broken = [](const Image& img, Padding pad, BcKind bc) {
      Image out = extend(img, pad, bc);
      if (bc != BcKind::AntiReflective || img.shape().rank != 2) return out;
      const std::size_t r0 = pad.rows, c0 = pad.cols;
      for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c) {
          const bool row_ghost = r < r0 || r >= r0 + img.rows();
          const bool col_ghost = c < c0 || c >= c0 + img.cols();
          if (row_ghost && col_ghost)
            out(r, c) = img(std::clamp(r, r0, r0 + img.rows() - 1) - r0, std::clamp(c, c0, c0 + img.cols() - 1) - c0);
        }
      return out;
    };
    const auto mutated = run_verification(broken);
    const auto corner = std::find_if(mutated.begin(), mutated.end(),
                                     [](const CheckResult& r) { return r.name == "ar-corner-formula"; });
    REQUIRE(corner != mutated.end());
    CHECK_FALSE(corner->passed);
    std::ostringstream log;
    CHECK(cmd_verify(log, broken) == kExitVerification);
    CHECK(log.str().find("ar-corner-formula") != std::string::npos);
  }
}

TEST_CASE("parallel_for") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += static_cast<int>(i); });
  for (std::size_t i = 0; i < hits.size(); ++i) CHECK(hits[i] == static_cast<int>(i));
  parallel_for(0, 4, [](std::size_t) { throw std::logic_error("never called"); });

  try {
    parallel_for(20, 3, [](std::size_t i) {
      if (i == 7 || i == 13) throw std::runtime_error("task " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "task 7");
  }

  ::setenv("FLIPBLUR_THREADS", "1", 1);
  CHECK(worker_threads() == 1);
  ::setenv("FLIPBLUR_THREADS", "zero", 1);
  CHECK(worker_threads() >= 1);
  ::unsetenv("FLIPBLUR_THREADS");
  CHECK(worker_threads() >= 1);
}
