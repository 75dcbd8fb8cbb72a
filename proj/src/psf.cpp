#include "flipblur/psf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "flipblur/error.hpp"
#include "flipblur/image.hpp"
#include "flipblur/random.hpp"

namespace flipblur {

namespace {

constexpr double kSumTolerance = 1e-12;

void check_grid(std::size_t rows, std::size_t cols, const std::vector<double>& coeffs) {
  if (rows == 0 || cols == 0 || rows % 2 == 0 || cols % 2 == 0)
    throw Error(ErrorKind::MalformedPsf, "PSF extents must be odd, got " + std::to_string(rows) +
                                             " x " + std::to_string(cols));
  if (coeffs.size() != rows * cols)
    throw Error(ErrorKind::MalformedPsf, "coefficient count does not match extents");
  for (double v : coeffs)
    if (!std::isfinite(v)) throw Error(ErrorKind::MalformedPsf, "non-finite PSF coefficient");
}

// Kahan-compensated so that the 1e-12 normalization test is not dominated by
// summation order for wide kernels.
double compensated_sum(std::span<const double> values) {
  double sum = 0.0, carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

Psf::Psf(std::size_t rows, std::size_t cols, std::vector<double> coeffs)
    : rows_(rows), cols_(cols), coeffs_(std::move(coeffs)) {
  check_grid(rows_, cols_, coeffs_);
  const double sum = compensated_sum(coeffs_);
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw Error(ErrorKind::DegeneratePsf, "PSF coefficients must sum to 1");
}

Psf Psf::identity() { return Psf(1, 1, {1.0}); }

double Psf::at(std::ptrdiff_t k1, std::ptrdiff_t k2) const {
  const auto m1 = static_cast<std::ptrdiff_t>(row_halfwidth());
  const auto m2 = static_cast<std::ptrdiff_t>(col_halfwidth());
  if (k1 < -m1 || k1 > m1 || k2 < -m2 || k2 > m2) return 0.0;
  return coeffs_[static_cast<std::size_t>((k1 + m1) * static_cast<std::ptrdiff_t>(cols_) + (k2 + m2))];
}

double Psf::abs_sum() const {
  double s = 0.0;
  for (double v : coeffs_) s += std::abs(v);
  return s;
}

bool Psf::is_centrosymmetric(double tol) const {
  const std::size_t n = coeffs_.size();
  for (std::size_t i = 0; i < n / 2; ++i)
    if (std::abs(coeffs_[i] - coeffs_[n - 1 - i]) > tol) return false;
  return true;
}

LoadedPsf normalize_psf(std::size_t rows, std::size_t cols, std::vector<double> coeffs) {
  check_grid(rows, cols, coeffs);
  const double sum = compensated_sum(coeffs);
  if (sum == 0.0) throw Error(ErrorKind::DegeneratePsf, "PSF coefficients sum to zero");
  bool renormalized = false;
  if (std::abs(sum - 1.0) > kSumTolerance) {
    for (double& v : coeffs) v /= sum;
    renormalized = true;
  }
  return {Psf(rows, cols, std::move(coeffs)), renormalized};
}

LoadedPsf load_psf(std::string_view text) {
  TextGrid grid = parse_text_grid(text);
  if (grid.rows == 0) throw Error(ErrorKind::MalformedPsf, "empty PSF");
  return normalize_psf(grid.rows, grid.cols, std::move(grid.values));
}

Psf crop_psf(const Psf& psf, std::size_t m_new) {
  if (m_new > psf.halfwidth())
    throw Error(ErrorKind::InvalidCrop, "crop half-width " + std::to_string(m_new) +
                                            " exceeds PSF half-width " +
                                            std::to_string(psf.halfwidth()));
  const auto m1 = static_cast<std::ptrdiff_t>(std::min(psf.row_halfwidth(), m_new));
  const auto m2 = static_cast<std::ptrdiff_t>(std::min(psf.col_halfwidth(), m_new));
  std::vector<double> window;
  window.reserve(static_cast<std::size_t>((2 * m1 + 1) * (2 * m2 + 1)));
  for (std::ptrdiff_t k1 = -m1; k1 <= m1; ++k1)
    for (std::ptrdiff_t k2 = -m2; k2 <= m2; ++k2) window.push_back(psf.at(k1, k2));
  return normalize_psf(static_cast<std::size_t>(2 * m1 + 1), static_cast<std::size_t>(2 * m2 + 1),
                       std::move(window))
      .psf;
}

SymbolValue eval_symbol(const Psf& psf, std::span<const double> theta) {
  if (theta.size() != static_cast<std::size_t>(psf.dims()))
    throw Error(ErrorKind::DimensionError, "theta must have one entry per PSF dimension");
  const double t1 = psf.dims() == 2 ? theta[0] : 0.0;
  const double t2 = theta.back();
  const auto m1 = static_cast<std::ptrdiff_t>(psf.row_halfwidth());
  const auto m2 = static_cast<std::ptrdiff_t>(psf.col_halfwidth());
  SymbolValue sum{0.0, 0.0};
  for (std::ptrdiff_t k1 = -m1; k1 <= m1; ++k1)
    for (std::ptrdiff_t k2 = -m2; k2 <= m2; ++k2) {
      const double phase = static_cast<double>(k1) * t1 + static_cast<double>(k2) * t2;
      sum += psf.at(k1, k2) * SymbolValue(std::cos(phase), std::sin(phase));
    }
  return sum;
}

void for_each_symbol_sample(const Psf& psf, std::span<const std::size_t> nodes,
                            const std::function<void(SymbolValue)>& visit) {
  if (nodes.size() != static_cast<std::size_t>(psf.dims()))
    throw Error(ErrorKind::DimensionError, "need one node count per PSF dimension");
  for (std::size_t n : nodes)
    if (n == 0) throw Error(ErrorKind::DimensionError, "node counts must be positive");

  const std::size_t n1 = psf.dims() == 2 ? nodes[0] : 1;
  const std::size_t n2 = nodes.back();
  const std::size_t rows = psf.rows();
  const auto m1 = static_cast<std::ptrdiff_t>(psf.row_halfwidth());
  const auto m2 = static_cast<std::ptrdiff_t>(psf.col_halfwidth());

  // Separable evaluation: inner(k1, theta2) = sum_k2 h(k1, k2) e^{i k2 theta2}.
  std::vector<SymbolValue> inner(rows * n2);
  for (std::size_t j2 = 0; j2 < n2; ++j2) {
    const double t2 = 2.0 * std::numbers::pi * static_cast<double>(j2) / static_cast<double>(n2);
    for (std::ptrdiff_t k1 = -m1; k1 <= m1; ++k1) {
      SymbolValue s{0.0, 0.0};
      for (std::ptrdiff_t k2 = -m2; k2 <= m2; ++k2) {
        const double phase = static_cast<double>(k2) * t2;
        s += psf.at(k1, k2) * SymbolValue(std::cos(phase), std::sin(phase));
      }
      inner[static_cast<std::size_t>(k1 + m1) * n2 + j2] = s;
    }
  }
  std::vector<SymbolValue> outer(rows);
  for (std::size_t j1 = 0; j1 < n1; ++j1) {
    const double t1 = 2.0 * std::numbers::pi * static_cast<double>(j1) / static_cast<double>(n1);
    for (std::ptrdiff_t k1 = -m1; k1 <= m1; ++k1) {
      const double phase = static_cast<double>(k1) * t1;
      outer[static_cast<std::size_t>(k1 + m1)] = SymbolValue(std::cos(phase), std::sin(phase));
    }
    for (std::size_t j2 = 0; j2 < n2; ++j2) {
      SymbolValue s{0.0, 0.0};
      for (std::size_t r = 0; r < rows; ++r) s += outer[r] * inner[r * n2 + j2];
      visit(s);
    }
  }
}

std::vector<double> sample_abs_symbol(const Psf& psf, std::span<const std::size_t> nodes) {
  std::vector<double> out;
  for_each_symbol_sample(psf, nodes, [&](SymbolValue v) { out.push_back(std::abs(v)); });
  std::sort(out.begin(), out.end());
  return out;
}

PsiSample sample_psi(const Psf& psf, std::span<const std::size_t> nodes) {
  const std::vector<double> abs_values = sample_abs_symbol(psf, nodes);
  PsiSample sample;
  sample.grid.assign(nodes.begin(), nodes.end());
  sample.values.reserve(2 * abs_values.size());
  for (auto it = abs_values.rbegin(); it != abs_values.rend(); ++it) sample.values.push_back(-*it);
  sample.values.insert(sample.values.end(), abs_values.begin(), abs_values.end());
  return sample;
}

double max_abs_symbol(const Psf& psf, std::size_t nodes) {
  std::vector<std::size_t> grid(static_cast<std::size_t>(psf.dims()), nodes);
  double best = 0.0;
  for_each_symbol_sample(psf, grid, [&](SymbolValue v) { best = std::max(best, std::abs(v)); });
  return best;
}

Psf motion_psf(std::size_t m) {
  const std::size_t n = 2 * m + 1;
  std::vector<double> grid(n * n, 0.0);
  const auto c = static_cast<double>(m);
  auto deposit = [&](double r, double col, double weight) {
    const auto ri = static_cast<std::size_t>(std::lround(r));
    const auto ci = static_cast<std::size_t>(std::lround(col));
    grid[ri * n + ci] += weight;
  };
  // Main stroke: toward the right and slightly down, fading out.
  const std::size_t steps = 4 * m + 1;
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(steps - 1);
    deposit(c + 0.45 * c * t, c + c * t, 1.0 - 0.6 * t);
  }
  // Short secondary stroke upward.
  for (std::size_t s = 1; s <= m; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(std::max<std::size_t>(m, 1));
    deposit(c - 0.6 * c * t, c - 0.15 * c * t, 0.5 * (1.0 - 0.5 * t));
  }
  return normalize_psf(n, n, std::move(grid)).psf;
}

Psf speckle_psf(std::size_t m, std::uint64_t seed) {
  const std::size_t n = 2 * m + 1;
  GaussianStream gauss(seed);
  const double width = std::max(1.0, 0.6 * static_cast<double>(m));
  std::vector<double> grid(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double dr = static_cast<double>(r) - static_cast<double>(m);
      const double dc = static_cast<double>(c) - static_cast<double>(m);
      const double envelope = std::exp(-(dr * dr + dc * dc) / (2.0 * width * width));
      const double re = gauss.next();
      const double im = gauss.next();
      grid[r * n + c] = envelope * (re * re + im * im);
    }
  return normalize_psf(n, n, std::move(grid)).psf;
}

Psf gaussian_psf(std::size_t m, double sigma) {
  const std::size_t n = 2 * m + 1;
  std::vector<double> grid(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double dr = static_cast<double>(r) - static_cast<double>(m);
      const double dc = static_cast<double>(c) - static_cast<double>(m);
      grid[r * n + c] = std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
    }
  return normalize_psf(n, n, std::move(grid)).psf;
}

}  // namespace flipblur
