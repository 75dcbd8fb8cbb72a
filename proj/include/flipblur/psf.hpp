#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace flipblur {

/// Normalized point-spread function.
///
/// Coefficients live on an odd (2*m1+1) x (2*m2+1) grid, row-major, with the
/// central cell holding h(0,0). Cell (r, c) is the weight for the pixel offset
/// (r - m1, c - m2), where the first offset runs along the first (slowest)
/// image index. A 1D PSF is a grid of height one.
///
/// The blur it induces is the convolution g(i) = sum_k h(k) f(i - k), so the
/// zero-boundary matrix has entry T[l, j] = h(l - j) and the generating symbol
/// is f(theta) = sum_k h(k) exp(i <k, theta>).
class Psf {
 public:
  /// Requires odd extents, finite entries and a unit sum within 1e-12.
  Psf(std::size_t rows, std::size_t cols, std::vector<double> coeffs);

  static Psf identity();

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t row_halfwidth() const { return rows_ / 2; }
  std::size_t col_halfwidth() const { return cols_ / 2; }
  std::size_t halfwidth() const { return std::max(rows_, cols_) / 2; }
  int dims() const { return rows_ == 1 ? 1 : 2; }

  /// Coefficient for the offset (k1, k2); zero outside the support.
  double at(std::ptrdiff_t k1, std::ptrdiff_t k2) const;
  /// 1D accessor, h(k) = at(0, k).
  double at(std::ptrdiff_t k) const { return at(0, k); }

  std::span<const double> coeffs() const { return coeffs_; }
  double abs_sum() const;
  /// h(-k) == h(k) for all k, within tol.
  bool is_centrosymmetric(double tol = 0.0) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> coeffs_;
};

struct LoadedPsf {
  Psf psf;
  bool renormalized = false;
};

/// Validates the grid and divides by the coefficient sum when it deviates
/// from one by more than 1e-12.
LoadedPsf normalize_psf(std::size_t rows, std::size_t cols, std::vector<double> coeffs);

/// Parses the plain-text PSF format (rows of whitespace-separated decimals).
LoadedPsf load_psf(std::string_view text);

/// Keeps the central window of half-width m_new on every axis that is wider,
/// then renormalizes.
Psf crop_psf(const Psf& psf, std::size_t m_new);

using SymbolValue = std::complex<double>;

/// f(theta) = sum_k h(k) exp(i <k, theta>); theta has one entry per PSF dimension.
SymbolValue eval_symbol(const Psf& psf, std::span<const double> theta);

/// Visits f on the uniform grid theta_j = 2*pi*k_j / nodes_j, k_j = 0..nodes_j-1.
/// nodes has one entry per PSF dimension. Visit order is lexicographic.
void for_each_symbol_sample(const Psf& psf, std::span<const std::size_t> nodes,
                            const std::function<void(SymbolValue)>& visit);

/// |f| on the uniform grid, sorted nondecreasing.
std::vector<double> sample_abs_symbol(const Psf& psf, std::span<const std::size_t> nodes);

/// Uniform sampling of psi_{|f|} in its diag(|f|, -|f|) arrangement.
struct PsiSample {
  std::vector<double> values;  // sorted, length 2 * prod(grid)
  std::vector<std::size_t> grid;
};

PsiSample sample_psi(const Psf& psf, std::span<const std::size_t> nodes);

/// max |f| over a uniform grid with `nodes` points per dimension.
double max_abs_symbol(const Psf& psf, std::size_t nodes = 4096);

// Synthetic kernels used by the CLI and the experiments.

/// Nonsymmetric two-direction motion blur on a (2m+1)^2 grid.
Psf motion_psf(std::size_t m);
/// Nonsymmetric speckle-like kernel: squared modulus of a seeded random field
/// under a Gaussian envelope.
Psf speckle_psf(std::size_t m, std::uint64_t seed);
/// Isotropic Gaussian (centrosymmetric).
Psf gaussian_psf(std::size_t m, double sigma);

}  // namespace flipblur
