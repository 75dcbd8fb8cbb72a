#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "flipblur/image.hpp"
#include "flipblur/psf.hpp"

namespace flipblur {

enum class BcKind { Zero, Periodic, Reflective, AntiReflective };

inline constexpr BcKind kAllBcs[] = {BcKind::Zero, BcKind::Periodic, BcKind::Reflective,
                                     BcKind::AntiReflective};

std::string_view to_string(BcKind bc);
std::optional<BcKind> parse_bc(std::string_view name);

/// Number of ghost samples added on each side of each axis.
struct Padding {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

/// Pads an image by the boundary rule. With m on every axis of the image's
/// rank; a rank-1 image is only padded along its length.
///
/// Rules, for a line f[0..n-1] and ghost index p:
///   Zero            0
///   Periodic        f[p mod n]
///   Reflective      f[-p-1] on the left, f[2n-1-p] on the right (f_0 = f_1)
///   AntiReflective  2 f[0] - f[-p] on the left, 2 f[n-1] - f[2(n-1)-p] on the right
/// In 2D the rule is applied along the first axis, then along the second axis
/// over the already padded rows, which yields the anti-reflective corner
/// formula 4 f11 - 2 f1(j+1) - 2 f(i+1)1 + f(i+1)(j+1).
///
/// Requires m < n on every padded axis.
Image extend(const Image& img, std::size_t m, BcKind bc);
Image extend(const Image& img, Padding pad, BcKind bc);

/// out(r, c) = sum_k h(k1, k2) padded(r - k1 + m1, c - k2 + m2); the output
/// shape is the padded shape minus the PSF support.
Image convolve_valid(const Image& padded, const Psf& psf, Shape out_shape);

using DenseMatrix = Eigen::MatrixXd;

inline constexpr std::size_t kDefaultDenseCap = 16384;

/// Square blur operator for a fixed PSF, boundary rule and image shape.
/// Requires 2m + 1 <= n along every axis the PSF extends over.
class BlurOperator {
 public:
  BlurOperator(Psf psf, BcKind bc, Shape shape);

  const Psf& psf() const { return psf_; }
  BcKind bc() const { return bc_; }
  const Shape& shape() const { return shape_; }
  std::size_t size() const { return shape_.size(); }
  Padding padding() const { return {psf_.row_halfwidth(), psf_.col_halfwidth()}; }

  /// Extend-then-convolve.
  Image apply(const Image& img) const;
  /// apply followed by reversal of the vectorized output (Y_N A x).
  Image flip_apply(const Image& img) const;

  /// Raw-buffer forms used by the Krylov solvers; `out` must not alias `in`.
  void apply(const double* in, double* out) const;
  void flip_apply(const double* in, double* out) const;

  /// Column j is apply(e_j). Throws size-cap-exceeded above `cap` unknowns.
  DenseMatrix assemble_dense(std::size_t cap = kDefaultDenseCap) const;
  /// Dense zero-boundary (multilevel Toeplitz) matrix of the same PSF and shape.
  DenseMatrix toeplitz_part(std::size_t cap = kDefaultDenseCap) const;
  /// W = assemble_dense - toeplitz_part, the boundary correction.
  DenseMatrix correction_part(std::size_t cap = kDefaultDenseCap) const;

 private:
  Psf psf_;
  BcKind bc_;
  Shape shape_;
};

/// Reverses the row order (Y_N M).
DenseMatrix flip_dense(const DenseMatrix& m);

}  // namespace flipblur
