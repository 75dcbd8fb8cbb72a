#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "flipblur/image.hpp"
#include "flipblur/imaging.hpp"
#include "flipblur/random.hpp"

using namespace flipblur;

namespace {

double norm2(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += static_cast<long double>(x) * x;
  return static_cast<double>(std::sqrt(s));
}

std::vector<double> diff(const Image& a, const Image& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

Image random_image(const Shape& s, std::uint64_t seed) {
  GaussianStream rng(seed);
  std::vector<double> v(s.size());
  for (double& x : v) x = rng.uniform_open();
  return Image(s, std::move(v));
}

}  // namespace

TEST_CASE("add_noise") {
  const Image g = random_image(Shape::grid(9, 7), 1);

  SUBCASE("zero level is the identity") {
    CHECK(add_noise(g, {0.0, 5}).values() == g.values());
  }
  SUBCASE("perturbation norm equals gamma times the data norm") {
    std::vector<double> v(100, 5.0);  // ||g|| = 50
    const Image fifty(Shape::grid(10, 10), v);
    CHECK(norm2(diff(add_noise(fifty, {0.01, 3}), fifty)) == doctest::Approx(0.5).epsilon(1e-12));
    for (std::uint64_t seed = 0; seed < 40; ++seed)
      for (double gamma : {1e-4, 0.01, 0.3, 2.0}) {
        const double want = gamma * norm2(g.values());
        CHECK(std::abs(norm2(diff(add_noise(g, {gamma, seed}), g)) - want) <= 1e-12 * want);
      }
  }
  SUBCASE("seeded regression fixture") {
    const Image four(Shape::grid(2, 2), {0.25, 0.5, 0.75, 1.0});
    const Image out = add_noise(four, {0.1, 42});
    CHECK(out[0] == 0x1.811fac2c59b95p-3);
    CHECK(out[1] == 0x1.b4427ec5c4474p-2);
    CHECK(out[2] == 0x1.a0999f6ee00c3p-1);
    CHECK(out[3] == 0x1.12ca1fc2a1154p+0);
    CHECK(add_noise(four, {0.1, 42}).values() == out.values());
    CHECK(add_noise(four, {0.1, 43}).values() != out.values());
  }
  SUBCASE("invalid levels") {
    CHECK_ERROR(add_noise(g, {-0.1, 1}), ErrorKind::InvalidNoise);
    CHECK_ERROR(add_noise(g, {std::numeric_limits<double>::quiet_NaN(), 1}), ErrorKind::InvalidNoise);
  }
}

TEST_CASE("rre") {
  const Image t = random_image(Shape::grid(5, 6), 2);
  CHECK(rre(t, t) == 0.0);
  CHECK(rre(Image(t.shape()), t) == doctest::Approx(1.0).epsilon(1e-15));
  std::vector<double> scaled(t.values());
  for (double& v : scaled) v *= 1.1;
  CHECK(std::abs(rre(Image(t.shape(), scaled), t) - 0.1) < 1e-14);
  CHECK_ERROR(rre(t, Image(t.shape())), ErrorKind::UndefinedRre);
  CHECK_ERROR(rre(t, Image(Shape::grid(6, 5))), ErrorKind::DimensionError);
}

TEST_CASE("psnr") {
  SUBCASE("zero dB example") {
    // 64 x 64 truth with max 1 and an error of norm 4096.
    Image truth(Shape::grid(64, 64), 0.5);
    truth(0, 0) = 1.0;
    Image cand = truth;
    for (double& v : cand.data()) v += 4096.0 / 64.0;
    CHECK(psnr(cand, truth) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(psnr(cand, truth)) < 1e-12);
    CHECK(psnr(cand, truth, PsnrConvention::RootPixelCount) == doctest::Approx(-20.0 * std::log10(64.0)));
  }
  SUBCASE("halving the error adds 20 log10 2") {
    const Image t = random_image(Shape::grid(8, 8), 3);
    const Image e = random_image(Shape::grid(8, 8), 4);
    Image a = t, b = t;
    for (std::size_t i = 0; i < t.size(); ++i) {
      a[i] += e[i];
      b[i] += 0.5 * e[i];
    }
    CHECK(psnr(b, t) - psnr(a, t) == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
  }
  SUBCASE("exact reconstruction gives +inf") {
    const Image t = random_image(Shape::grid(3, 3), 5);
    CHECK(std::isinf(psnr(t, t)));
    CHECK(psnr(t, t) > 0);
    const Metrics m = measure(t, t);
    CHECK(m.rre == 0.0);
    CHECK(std::isinf(m.psnr));
  }
  SUBCASE("conventions differ by 10 log10 N") {
    const Image t = random_image(Shape::grid(6, 9), 6);
    const Image c = random_image(Shape::grid(6, 9), 7);
    CHECK(psnr(c, t) - psnr(c, t, PsnrConvention::RootPixelCount) ==
          doctest::Approx(10.0 * std::log10(54.0)).epsilon(1e-12));
  }
}

TEST_CASE("rre and psnr order candidates identically") {
  const Image t = random_image(Shape::grid(7, 7), 8);
  std::vector<Image> cands;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Image e = random_image(t.shape(), 100 + s);
    const double scale = 0.01 * static_cast<double>(s + 1);
    Image c = t;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += scale * (e[i] - 0.5);
    cands.push_back(c);
  }
  for (const Image& a : cands)
    for (const Image& b : cands) {
      const double dr = rre(a, t) - rre(b, t);
      const double dp = psnr(a, t) - psnr(b, t);
      if (std::abs(dr) > 1e-12) CHECK((dr < 0) == (dp > 0));
    }
}

TEST_CASE("PGM") {
  SUBCASE("ASCII example") {
    const Image img = read_pgm("P2\n2 2\n255\n0 255\n255 0\n");
    CHECK(img.rows() == 2);
    CHECK(img.values() == std::vector<double>{0, 1, 1, 0});
  }
  SUBCASE("comments and binary encodings") {
    const Image ascii = read_pgm("P2 # c\n3 1 # width height\n4\n0 2 4\n");
    CHECK(ascii.values() == std::vector<double>{0, 0.5, 1});
    const std::string p5_8 = std::string("P5\n3 1\n4\n") + std::string("\x00\x02\x04", 3);
    CHECK(read_pgm(p5_8).values() == ascii.values());
    const std::string p5_16 = std::string("P5\n3 1\n1000\n") + std::string("\x00\x00\x01\xf4\x03\xe8", 6);
    CHECK(read_pgm(p5_16).values() == std::vector<double>{0, 0.5, 1});
  }
  SUBCASE("round trip on quantized data, both encodings and depths") {
    for (unsigned maxval : {1u, 255u, 1000u, 65535u}) {
      GaussianStream rng(maxval);
      std::vector<double> v(35);
      for (double& x : v) x = std::floor(rng.uniform_open() * (maxval + 1)) / maxval;
      const Image img(Shape::grid(5, 7), v);
      for (PgmEncoding enc : {PgmEncoding::Ascii, PgmEncoding::Binary}) {
        const std::string bytes = write_pgm(img, maxval, enc);
        const Image back = read_pgm(bytes);
        CHECK(back.rows() == 5);
        CHECK(back.cols() == 7);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(back[i] == doctest::Approx(v[i]).epsilon(1e-15));
        CHECK(write_pgm(back, maxval, enc) == bytes);
      }
    }
  }
  SUBCASE("clamping and idempotence after first quantization") {
    const Image img(Shape::grid(1, 4), {-0.5, 0.3337, 0.999, 2.0});
    const Image once = read_pgm(write_pgm(img, 255));
    CHECK(once[0] == 0.0);
    CHECK(once[3] == 1.0);
    CHECK(once[1] == 85.0 / 255.0);
    CHECK(read_pgm(write_pgm(once, 255)).values() == once.values());
  }
  SUBCASE("malformed input") {
    CHECK_ERROR(read_pgm("P3\n1 1\n255\n0\n"), ErrorKind::FormatError);
    CHECK_ERROR(read_pgm("P2\n0 1\n255\n"), ErrorKind::FormatError);
    CHECK_ERROR(read_pgm("P2\n2 2\n255\n0 1 2\n"), ErrorKind::FormatError);
    CHECK_ERROR(read_pgm("P2\n1 1\n255\n256\n"), ErrorKind::FormatError);
    CHECK_ERROR(read_pgm("P2\n1 1\n70000\n0\n"), ErrorKind::FormatError);
    CHECK_ERROR(read_pgm(std::string("P5\n2 1\n255\n") + "a"), ErrorKind::FormatError);
    CHECK_ERROR(read_pgm(""), ErrorKind::FormatError);
    CHECK_ERROR(write_pgm(Image(Shape::grid(1, 1)), 0), ErrorKind::FormatError);
  }
}

TEST_CASE("synthetic images") {
  const Image ramp = synth_image(SynthKind::Ramp, Shape::line(4));
  CHECK(ramp[0] == 0.0);
  CHECK(ramp[1] == doctest::Approx(1.0 / 3));
  CHECK(ramp[2] == doctest::Approx(2.0 / 3));
  CHECK(ramp[3] == 1.0);
  CHECK(synth_image(SynthKind::Checker, Shape::grid(2, 2)).values() == std::vector<double>{0, 1, 1, 0});

  const Image blob = synth_image(SynthKind::Blob, Shape::grid(8, 8));
  CHECK(blob(0, 0) > 0.0);
  CHECK(blob(7, 7) > 0.0);

  for (SynthKind k : {SynthKind::Ramp, SynthKind::Checker, SynthKind::Blob})
    for (Shape s : {Shape::line(17), Shape::grid(13, 21), Shape::grid(64, 64)}) {
      const Image a = synth_image(k, s);
      CHECK(a.values() == synth_image(k, s).values());
      for (double v : a.data()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  CHECK(parse_synth("blob") == SynthKind::Blob);
  CHECK(to_string(SynthKind::Checker) == "checker");
  CHECK_FALSE(parse_synth("photo").has_value());
}

TEST_CASE("text grids") {
  const TextGrid g = parse_text_grid("1 2.5 -3\n\n4e-1\t5 6\n");
  CHECK(g.rows == 2);
  CHECK(g.cols == 3);
  CHECK(g.values == std::vector<double>{1, 2.5, -3, 0.4, 5, 6});
  CHECK_ERROR(parse_text_grid("1 2\n3\n"), ErrorKind::ParseError);
  CHECK_ERROR(parse_text_grid("1 x\n"), ErrorKind::ParseError);
  CHECK_ERROR(parse_text_grid("1 nan\n"), ErrorKind::ParseError);

  const std::vector<double> v{0.1, 1.0 / 3, -2e-300, 7};
  std::ostringstream os;
  write_text_grid(os, 2, 2, v);
  CHECK(parse_text_grid(os.str()).values == v);
}
