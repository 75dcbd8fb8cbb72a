#include "flipblur/boundary.hpp"

#include <algorithm>
#include <string>

#include "flipblur/error.hpp"

namespace flipblur {

std::string_view to_string(BcKind bc) {
  switch (bc) {
    case BcKind::Zero: return "zero";
    case BcKind::Periodic: return "periodic";
    case BcKind::Reflective: return "reflective";
    case BcKind::AntiReflective: return "antireflective";
  }
  return "unknown";
}

std::optional<BcKind> parse_bc(std::string_view name) {
  for (BcKind bc : kAllBcs)
    if (to_string(bc) == name) return bc;
  return std::nullopt;
}

namespace {

// Value at ghost index p (may be negative or >= n) of the line
// line[0], line[stride], ..., line[(n-1)*stride].
double ghost_value(const double* line, std::ptrdiff_t stride, std::ptrdiff_t n, std::ptrdiff_t p,
                   BcKind bc) {
  auto f = [&](std::ptrdiff_t i) { return line[i * stride]; };
  if (p >= 0 && p < n) return f(p);
  switch (bc) {
    case BcKind::Zero:
      return 0.0;
    case BcKind::Periodic:
      return f(((p % n) + n) % n);
    case BcKind::Reflective:
      return p < 0 ? f(-p - 1) : f(2 * n - 1 - p);
    case BcKind::AntiReflective:
      return p < 0 ? 2.0 * f(0) - f(-p) : 2.0 * f(n - 1) - f(2 * (n - 1) - p);
  }
  return 0.0;
}

void check_padding(std::size_t m, std::size_t n, const char* axis) {
  if (m > 0 && m >= n)
    throw Error(ErrorKind::PadTooWide, std::string("padding ") + std::to_string(m) +
                                           " must be smaller than the " + axis + " extent " +
                                           std::to_string(n));
}

}  // namespace

Image extend(const Image& img, std::size_t m, BcKind bc) {
  const Padding pad{img.shape().rank == 1 ? 0 : m, m};
  return extend(img, pad, bc);
}

Image extend(const Image& img, Padding pad, BcKind bc) {
  const Shape& s = img.shape();
  if (s.rank == 1 && pad.rows != 0)
    throw Error(ErrorKind::DimensionError, "cannot pad a 1D signal along a second axis");
  check_padding(pad.rows, s.rows, "row");
  check_padding(pad.cols, s.cols, "column");

  const auto rows = static_cast<std::ptrdiff_t>(s.rows);
  const auto cols = static_cast<std::ptrdiff_t>(s.cols);
  const auto m1 = static_cast<std::ptrdiff_t>(pad.rows);
  const auto m2 = static_cast<std::ptrdiff_t>(pad.cols);
  const std::ptrdiff_t prow = rows + 2 * m1;
  const std::ptrdiff_t pcol = cols + 2 * m2;

  // First axis: (rows + 2 m1) x cols.
  std::vector<double> stage(static_cast<std::size_t>(prow * cols));
  const double* src = img.data().data();
  for (std::ptrdiff_t c = 0; c < cols; ++c)
    for (std::ptrdiff_t r = 0; r < prow; ++r)
      stage[static_cast<std::size_t>(r * cols + c)] = ghost_value(src + c, cols, rows, r - m1, bc);

  // Second axis over every staged row, corners included.
  Shape out_shape{static_cast<std::size_t>(prow), static_cast<std::size_t>(pcol), s.rank};
  std::vector<double> out(static_cast<std::size_t>(prow * pcol));
  for (std::ptrdiff_t r = 0; r < prow; ++r) {
    const double* line = stage.data() + r * cols;
    for (std::ptrdiff_t c = 0; c < pcol; ++c)
      out[static_cast<std::size_t>(r * pcol + c)] = ghost_value(line, 1, cols, c - m2, bc);
  }
  return Image(out_shape, std::move(out));
}

namespace {

void convolve_raw(const double* padded, std::size_t pcols, const Psf& psf, std::size_t rows,
                  std::size_t cols, double* out) {
  const auto m1 = static_cast<std::ptrdiff_t>(psf.row_halfwidth());
  const auto m2 = static_cast<std::ptrdiff_t>(psf.col_halfwidth());
  std::fill(out, out + rows * cols, 0.0);
  for (std::ptrdiff_t k1 = -m1; k1 <= m1; ++k1)
    for (std::ptrdiff_t k2 = -m2; k2 <= m2; ++k2) {
      const double h = psf.at(k1, k2);
      if (h == 0.0) continue;
      for (std::size_t r = 0; r < rows; ++r) {
        const double* in_row =
            padded + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(r) - k1 + m1) * pcols +
            static_cast<std::size_t>(m2 - k2);
        double* out_row = out + r * cols;
        for (std::size_t c = 0; c < cols; ++c) out_row[c] += h * in_row[c];
      }
    }
}

}  // namespace

Image convolve_valid(const Image& padded, const Psf& psf, Shape out_shape) {
  if (padded.rows() != out_shape.rows + 2 * psf.row_halfwidth() ||
      padded.cols() != out_shape.cols + 2 * psf.col_halfwidth())
    throw Error(ErrorKind::DimensionError, "padded image does not match PSF support");
  Image out(out_shape);
  convolve_raw(padded.data().data(), padded.cols(), psf, out_shape.rows, out_shape.cols,
               out.data().data());
  return out;
}

BlurOperator::BlurOperator(Psf psf, BcKind bc, Shape shape)
    : psf_(std::move(psf)), bc_(bc), shape_(shape) {
  if (shape_.rows == 0 || shape_.cols == 0)
    throw Error(ErrorKind::DimensionError, "image extents must be positive");
  if (shape_.rank == 1 && psf_.dims() == 2)
    throw Error(ErrorKind::DimensionError, "2D PSF cannot act on a 1D signal");
  auto check = [](std::size_t m, std::size_t n, const char* axis) {
    if (2 * m + 1 > n)
      throw Error(ErrorKind::DimensionError,
                  std::string("2m+1 <= n violated along the ") + axis + " axis: m = " +
                      std::to_string(m) + ", n = " + std::to_string(n));
  };
  check(psf_.row_halfwidth(), shape_.rows, "row");
  check(psf_.col_halfwidth(), shape_.cols, "column");
}

Image BlurOperator::apply(const Image& img) const {
  if (img.rows() != shape_.rows || img.cols() != shape_.cols)
    throw Error(ErrorKind::DimensionError, "image shape does not match operator shape");
  return convolve_valid(extend(img, padding(), bc_), psf_, shape_);
}

Image BlurOperator::flip_apply(const Image& img) const {
  Image out = apply(img);
  std::reverse(out.data().begin(), out.data().end());
  return out;
}

void BlurOperator::apply(const double* in, double* out) const {
  const Image padded = extend(Image(shape_, std::vector<double>(in, in + size())), padding(), bc_);
  convolve_raw(padded.data().data(), padded.cols(), psf_, shape_.rows, shape_.cols, out);
}

void BlurOperator::flip_apply(const double* in, double* out) const {
  apply(in, out);
  std::reverse(out, out + size());
}

DenseMatrix BlurOperator::assemble_dense(std::size_t cap) const {
  const std::size_t n = size();
  if (n > cap)
    throw Error(ErrorKind::SizeCapExceeded,
                std::to_string(n) + " unknowns exceed the dense cap of " + std::to_string(cap));
  DenseMatrix dense(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> basis(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    basis[j] = 1.0;
    apply(basis.data(), dense.col(static_cast<Eigen::Index>(j)).data());
    basis[j] = 0.0;
  }
  return dense;
}

DenseMatrix BlurOperator::toeplitz_part(std::size_t cap) const {
  return BlurOperator(psf_, BcKind::Zero, shape_).assemble_dense(cap);
}

DenseMatrix BlurOperator::correction_part(std::size_t cap) const {
  return assemble_dense(cap) - toeplitz_part(cap);
}

DenseMatrix flip_dense(const DenseMatrix& m) { return m.colwise().reverse(); }

}  // namespace flipblur
