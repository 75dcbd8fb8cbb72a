#include "flipblur/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>

#include "flipblur/cli/commands.hpp"
#include "flipblur/random.hpp"
#include "flipblur/reference.hpp"
#include "flipblur/spectral.hpp"

namespace flipblur::cli {

namespace {

constexpr double kExact = 1e-13;

struct Case {
  Psf psf;
  Shape shape;
};

Psf random_psf(std::size_t rows, std::size_t cols, GaussianStream& rng) {
  std::vector<double> h(rows * cols);
  for (double& v : h) v = rng.uniform_open();
  return normalize_psf(rows, cols, std::move(h)).psf;
}

Image random_image(const Shape& shape, GaussianStream& rng) {
  std::vector<double> v(shape.size());
  for (double& x : v) x = rng.next();
  return Image(shape, std::move(v));
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// Blur operator rebuilt on top of the injected padding rule.
class HookedOperator {
 public:
  HookedOperator(const ExtendFn& extend, Psf psf, BcKind bc, Shape shape)
      : extend_(extend), psf_(std::move(psf)), bc_(bc), shape_(shape) {}

  Image apply(const Image& img) const {
    const Padding pad{psf_.row_halfwidth(), psf_.col_halfwidth()};
    return convolve_valid(extend_(img, pad, bc_), psf_, shape_);
  }

  DenseMatrix dense() const {
    const std::size_t n = shape_.size();
    DenseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Image e(shape_, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = 1.0;
      const Image col = apply(e);
      for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
      e[j] = 0.0;
    }
    return m;
  }

 private:
  const ExtendFn& extend_;
  Psf psf_;
  BcKind bc_;
  Shape shape_;
};

std::vector<Case> oracle_cases(GaussianStream& rng) {
  std::vector<Case> cases;
  for (std::size_t m : {1u, 2u}) {
    for (std::size_t n : {5u, 6u, 8u}) cases.push_back({random_psf(1, 2 * m + 1, rng), Shape::line(n)});
    for (auto [r, c] : {std::pair<std::size_t, std::size_t>{5, 5}, {6, 7}, {8, 6}})
      cases.push_back({random_psf(2 * m + 1, 2 * m + 1, rng), Shape::grid(r, c)});
  }
  // Mixed half-widths per axis.
  cases.push_back({random_psf(3, 5, rng), Shape::grid(5, 6)});
  return cases;
}

CheckResult check_1d_rules(const ExtendFn& extend) {
  const Image f(Shape::line(3), {1.0, 2.0, 3.0});
  const std::pair<BcKind, std::vector<double>> expected[] = {
      {BcKind::Zero, {0, 1, 2, 3, 0}},
      {BcKind::Periodic, {3, 1, 2, 3, 1}},
      {BcKind::Reflective, {1, 1, 2, 3, 3}},
      {BcKind::AntiReflective, {0, 1, 2, 3, 4}},
  };
  for (const auto& [bc, want] : expected) {
    const Image got = extend(f, Padding{0, 1}, bc);
    if (got.values() != want)
      return {"extend-1d-rules", false, std::string(to_string(bc)) + " padding of [1,2,3] is wrong"};
  }
  return {"extend-1d-rules", true, "[1,2,3] with m = 1 under all four rules"};
}

// Ghost index p on a line of length n: the boundary sample it anti-reflects
// through and the interior sample it mirrors.
std::pair<std::ptrdiff_t, std::ptrdiff_t> anchor_mirror(std::ptrdiff_t p, std::ptrdiff_t n) {
  if (p < 0) return {0, -p};
  return {n - 1, 2 * (n - 1) - p};
}

CheckResult check_ar_edges_corners(const ExtendFn& extend, GaussianStream& rng) {
  {
    const Image small(Shape::grid(2, 2), {1.0, 2.0, 3.0, 4.0});
    const Image padded = extend(small, Padding{1, 1}, BcKind::AntiReflective);
    // 4*1 - 2*2 - 2*3 + 4
    if (std::abs(padded(0, 0) - (-2.0)) > kExact)
      return {"ar-corner-formula", false, "[[1,2],[3,4]] corner is " + sci(padded(0, 0)) + ", not -2"};
  }
  const Shape shape = Shape::grid(6, 7);
  const auto rows = static_cast<std::ptrdiff_t>(shape.rows);
  const auto cols = static_cast<std::ptrdiff_t>(shape.cols);
  const std::ptrdiff_t m = 2;
  const Image f = random_image(shape, rng);
  const Image padded = extend(f, Padding{2, 2}, BcKind::AntiReflective);
  auto at = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
    return f(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  double edge_err = 0.0;
  double corner_err = 0.0;
  for (std::ptrdiff_t r = -m; r < rows + m; ++r)
    for (std::ptrdiff_t c = -m; c < cols + m; ++c) {
      const bool row_out = r < 0 || r >= rows;
      const bool col_out = c < 0 || c >= cols;
      if (!row_out && !col_out) continue;
      const double got = padded(static_cast<std::size_t>(r + m), static_cast<std::size_t>(c + m));
      const auto [ar, mr] = anchor_mirror(r, rows);
      const auto [ac, mc] = anchor_mirror(c, cols);
      if (row_out && col_out) {
        const double want = 4 * at(ar, ac) - 2 * at(ar, mc) - 2 * at(mr, ac) + at(mr, mc);
        corner_err = std::max(corner_err, std::abs(got - want));
      } else if (row_out) {
        edge_err = std::max(edge_err, std::abs(got - (2 * at(ar, c) - at(mr, c))));
      } else {
        edge_err = std::max(edge_err, std::abs(got - (2 * at(r, ac) - at(r, mc))));
      }
    }
  if (corner_err > kExact)
    return {"ar-corner-formula", false, "corner deviation " + sci(corner_err)};
  if (edge_err > kExact) return {"ar-corner-formula", false, "edge deviation " + sci(edge_err)};
  return {"ar-corner-formula", true, "edges and four corners on 6x7, m = 2"};
}

CheckResult check_reference(const ExtendFn& extend, const std::vector<Case>& cases, const char* name) {
  double worst = 0.0;
  std::size_t count = 0;
  for (const Case& c : cases)
    for (BcKind bc : kAllBcs) {
      const DenseMatrix mine = HookedOperator(extend, c.psf, bc, c.shape).dense();
      const DenseMatrix oracle = reference::dense_operator(c.psf, bc, c.shape);
      const double dev = (mine - oracle).cwiseAbs().maxCoeff();
      ++count;
      if (!(dev <= kExact))
        return {name, false, std::string(to_string(bc)) + " deviates by " + sci(dev)};
      worst = std::max(worst, dev);
    }
  return {name, true, std::to_string(count) + " operators, max deviation " + sci(worst)};
}

CheckResult check_apply_vs_dense(const std::vector<Case>& cases, GaussianStream& rng) {
  double worst = 0.0;
  for (const Case& c : cases)
    for (BcKind bc : kAllBcs) {
      const BlurOperator op(c.psf, bc, c.shape);
      const Image x = random_image(c.shape, rng);
      const Image y = op.apply(x);
      const Eigen::VectorXd dense_y =
          op.assemble_dense() *
          Eigen::Map<const Eigen::VectorXd>(x.data().data(), static_cast<Eigen::Index>(x.size()));
      for (std::size_t i = 0; i < y.size(); ++i)
        worst = std::max(worst, std::abs(y[i] - dense_y(static_cast<Eigen::Index>(i))));
    }
  return {"apply-vs-dense", worst <= kExact, "max deviation " + sci(worst)};
}

CheckResult check_constants(const ExtendFn& extend, const std::vector<Case>& cases) {
  double worst = 0.0;
  for (const Case& c : cases)
    for (BcKind bc : {BcKind::Periodic, BcKind::Reflective, BcKind::AntiReflective}) {
      const Image out = HookedOperator(extend, c.psf, bc, c.shape).apply(Image(c.shape, 0.7));
      for (double v : out.data()) worst = std::max(worst, std::abs(v - 0.7));
    }
  return {"constant-preservation", worst <= kExact, "max deviation " + sci(worst)};
}

CheckResult check_affine(const ExtendFn& extend, GaussianStream& rng) {
  double worst = 0.0;
  {
    const Shape line = Shape::line(9);
    Image ramp(line);
    for (std::size_t i = 0; i < 9; ++i) ramp[i] = 0.3 + 1.7 * static_cast<double>(i);
    const Image out = HookedOperator(extend, random_psf(1, 5, rng), BcKind::AntiReflective, line).apply(ramp);
    for (std::size_t i = 1; i + 1 < 9; ++i)
      worst = std::max(worst, std::abs(out[i + 1] - 2 * out[i] + out[i - 1]));
    worst = std::max(worst, std::abs((out[1] - out[0]) - 1.7));
  }
  {
    const Shape grid = Shape::grid(7, 8);
    Image plane(grid);
    for (std::size_t r = 0; r < 7; ++r)
      for (std::size_t c = 0; c < 8; ++c)
        plane(r, c) = 0.2 + 0.9 * static_cast<double>(r) - 0.4 * static_cast<double>(c);
    const Image out = HookedOperator(extend, random_psf(5, 5, rng), BcKind::AntiReflective, grid).apply(plane);
    for (std::size_t r = 0; r + 1 < 7; ++r)
      for (std::size_t c = 0; c + 1 < 8; ++c) {
        worst = std::max(worst, std::abs(out(r + 1, c) - out(r, c) - 0.9));
        worst = std::max(worst, std::abs(out(r, c + 1) - out(r, c) + 0.4));
      }
  }
  return {"ar-affine-preservation", worst <= 1e-12, "max slope deviation " + sci(worst)};
}

CheckResult check_row_sums(const ExtendFn& extend, const std::vector<Case>& cases) {
  double worst = 0.0;
  for (const Case& c : cases)
    for (BcKind bc : {BcKind::Periodic, BcKind::Reflective, BcKind::AntiReflective}) {
      const DenseMatrix m = HookedOperator(extend, c.psf, bc, c.shape).dense();
      worst = std::max(worst, (m.rowwise().sum().array() - 1.0).abs().maxCoeff());
    }
  return {"unit-row-sums", worst <= kExact, "max deviation " + sci(worst)};
}

CheckResult check_flip_symmetry(const ExtendFn& extend, const std::vector<Case>& cases) {
  double worst = 0.0;
  for (const Case& c : cases)
    for (BcKind bc : {BcKind::Zero, BcKind::Periodic})
      worst = std::max(worst, asymmetry(flip_dense(HookedOperator(extend, c.psf, bc, c.shape).dense())));
  return {"flip-symmetry", worst <= kExact, "zero and periodic, max asymmetry " + sci(worst)};
}

CheckResult check_reflective_symmetry(const ExtendFn& extend) {
  const Psf sym(1, 5, {0.1, 0.2, 0.4, 0.2, 0.1});
  const Psf nonsym(1, 3, {0.2, 0.5, 0.3});
  const Psf quad = gaussian_psf(2, 1.0);
  const double a = asymmetry(HookedOperator(extend, sym, BcKind::Reflective, Shape::line(8)).dense());
  const double b = asymmetry(HookedOperator(extend, nonsym, BcKind::Reflective, Shape::line(8)).dense());
  const double c = asymmetry(HookedOperator(extend, quad, BcKind::Reflective, Shape::grid(6, 7)).dense());
  const bool ok = a <= kExact && b > 1e-3 && c <= kExact;
  return {"reflective-symmetry", ok,
          "symmetric " + sci(a) + ", nonsymmetric " + sci(b) + ", 2D gaussian " + sci(c)};
}

CheckResult check_correction_bounds(const ExtendFn& extend, const std::vector<Case>& cases) {
  double ratio = 0.0;
  auto bound = [&](const Psf& psf, BcKind bc, const Shape& shape) {
    const DenseMatrix w = HookedOperator(extend, psf, bc, shape).dense() -
                          HookedOperator(extend, psf, BcKind::Zero, shape).dense();
    ratio = std::max(ratio, schatten_norm(singular_values_dense(w), kSchattenInf) / psf.abs_sum());
  };
  for (const Case& c : cases)
    for (BcKind bc : {BcKind::Periodic, BcKind::Reflective}) bound(c.psf, bc, c.shape);
  const Psf h(1, 3, {0.2, 0.5, 0.3});
  for (std::size_t n : {5u, 16u, 32u}) bound(h, BcKind::AntiReflective, Shape::line(n));

  for (std::size_t m : {1u, 2u}) {
    const Psf psf(1, 2 * m + 1, std::vector<double>(2 * m + 1, 1.0 / static_cast<double>(2 * m + 1)));
    const DenseMatrix w = HookedOperator(extend, psf, BcKind::Reflective, Shape::line(12)).dense() -
                          HookedOperator(extend, psf, BcKind::Zero, Shape::line(12)).dense();
    std::size_t rank = 0;
    for (double s : singular_values_dense(w)) rank += s > 1e-12;
    if (rank > 2 * m) return {"correction-bounds", false, "reflective correction rank exceeds 2m"};
  }
  return {"correction-bounds", ratio <= 1.0 + 1e-12,
          "max ||W||_2 / sum|h| = " + sci(ratio) + ", reflective rank <= 2m"};
}

}  // namespace

std::vector<CheckResult> run_verification(const ExtendFn& extend_fn) {
  const ExtendFn extend =
      extend_fn ? extend_fn
                : ExtendFn([](const Image& img, Padding pad, BcKind bc) { return flipblur::extend(img, pad, bc); });
  GaussianStream rng(20240917);
  const std::vector<Case> cases = oracle_cases(rng);

  GaussianStream small_rng(5);
  const std::vector<Case> minimal = {
      {random_psf(1, 5, small_rng), Shape::line(5)},
      {random_psf(5, 5, small_rng), Shape::grid(5, 5)},
  };

  std::vector<CheckResult> results;
  auto guarded = [&](const char* name, auto&& check) {
    try {
      results.push_back(check());
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("extend-1d-rules", [&] { return check_1d_rules(extend); });
  guarded("ar-corner-formula", [&] { return check_ar_edges_corners(extend, rng); });
  guarded("reference-equivalence", [&] { return check_reference(extend, cases, "reference-equivalence"); });
  guarded("minimal-size-n5-m2", [&] { return check_reference(extend, minimal, "minimal-size-n5-m2"); });
  guarded("apply-vs-dense", [&] { return check_apply_vs_dense(cases, rng); });
  guarded("constant-preservation", [&] { return check_constants(extend, cases); });
  guarded("ar-affine-preservation", [&] { return check_affine(extend, rng); });
  guarded("unit-row-sums", [&] { return check_row_sums(extend, cases); });
  guarded("flip-symmetry", [&] { return check_flip_symmetry(extend, cases); });
  guarded("reflective-symmetry", [&] { return check_reflective_symmetry(extend); });
  guarded("correction-bounds", [&] { return check_correction_bounds(extend, cases); });
  return results;
}

void print_verification(std::ostream& os, const std::vector<CheckResult>& results) {
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  std::size_t failed = 0;
  for (const auto& r : results) {
    os << std::left << std::setw(static_cast<int>(width + 2)) << r.name << (r.passed ? "PASS  " : "FAIL  ")
       << r.detail << '\n';
    failed += !r.passed;
  }
  os << results.size() - failed << "/" << results.size() << " checks passed\n";
}

int cmd_verify(std::ostream& log, const ExtendFn& extend_fn) {
  const auto results = run_verification(extend_fn);
  print_verification(log, results);
  const bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
  return ok ? kExitOk : kExitVerification;
}

}  // namespace flipblur::cli
