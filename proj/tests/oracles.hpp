#pragma once

// Independent test oracles. Nothing here calls the padding or convolution
// code of the library.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "flipblur/boundary.hpp"
#include "flipblur/psf.hpp"
#include "flipblur/random.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// 1D coefficients h_{-m..m} stored at index k + m.
struct Kernel {
  std::vector<double> h;
  std::ptrdiff_t m() const { return static_cast<std::ptrdiff_t>(h.size() / 2); }
  double operator()(std::ptrdiff_t k) const {
    return (k < -m() || k > m()) ? 0.0 : h[static_cast<std::size_t>(k + m())];
  }
};

// Block pieces of the 1D blur system T_l f_l + T f + T_r f_r = g, with
// f_l = (f_{-m+1}, ..., f_0) and f_r = (f_{n+1}, ..., f_{n+m}). Row i of the
// full system reads g_i = sum_j h_{i-j} f_j (all indices 1-based).
struct BlockSystem {
  MatrixXd t;   // n x n, T[i, j] = h_{i-j}
  MatrixXd tl;  // n x m, column c multiplies f_{-m+c}
  MatrixXd tr;  // n x m, column c multiplies f_{n+c}

  BlockSystem(const Kernel& k, std::size_t n) {
    const auto nn = static_cast<Eigen::Index>(n);
    const auto mm = static_cast<Eigen::Index>(k.m());
    t = MatrixXd::Zero(nn, nn);
    tl = MatrixXd::Zero(nn, mm);
    tr = MatrixXd::Zero(nn, mm);
    for (Eigen::Index i = 1; i <= nn; ++i) {
      for (Eigen::Index j = 1; j <= nn; ++j) t(i - 1, j - 1) = k(i - j);
      for (Eigen::Index c = 1; c <= mm; ++c) {
        tl(i - 1, c - 1) = k(i - (-mm + c));
        tr(i - 1, c - 1) = k(i - (nn + c));
      }
    }
  }
};

inline MatrixXd backward_identity(Eigen::Index n) {
  return MatrixXd::Identity(n, n).colwise().reverse();
}

// (0 | T_l): T_l in the last m columns. (T_r | 0): T_r in the first m columns.
inline MatrixXd pad_left(const MatrixXd& tl, Eigen::Index n) {
  MatrixXd out = MatrixXd::Zero(n, n);
  out.rightCols(tl.cols()) = tl;
  return out;
}
inline MatrixXd pad_right(const MatrixXd& tr, Eigen::Index n) {
  MatrixXd out = MatrixXd::Zero(n, n);
  out.leftCols(tr.cols()) = tr;
  return out;
}

// The coefficient matrix for each boundary rule, assembled from the block
// formulas:
//   zero            T
//   periodic        (0|T_l) + T + (T_r|0)
//   reflective      (0|T_l) Y + T + (T_r|0) Y
//   anti-reflective z e_1^T - (0|T_l) Ytilde + T - (T_r|0) Yhat + w e_n^T
// with Ytilde = diag(0, Y_{n-1}), Yhat = diag(Y_{n-1}, 0),
// z_j = 2 sum_{k=j}^m h_k and w_{n+1-j} = 2 sum_{k=j}^m h_{-k} for j <= m.
inline MatrixXd matrix_1d(const Kernel& k, flipblur::BcKind bc, std::size_t n) {
  const BlockSystem s(k, n);
  const auto nn = static_cast<Eigen::Index>(n);
  const MatrixXd left = pad_left(s.tl, nn);
  const MatrixXd right = pad_right(s.tr, nn);
  switch (bc) {
    case flipblur::BcKind::Zero:
      return s.t;
    case flipblur::BcKind::Periodic:
      return left + s.t + right;
    case flipblur::BcKind::Reflective: {
      const MatrixXd y = backward_identity(nn);
      return left * y + s.t + right * y;
    }
    case flipblur::BcKind::AntiReflective: {
      MatrixXd ytilde = MatrixXd::Zero(nn, nn);
      ytilde.bottomRightCorner(nn - 1, nn - 1) = backward_identity(nn - 1);
      MatrixXd yhat = MatrixXd::Zero(nn, nn);
      yhat.topLeftCorner(nn - 1, nn - 1) = backward_identity(nn - 1);
      VectorXd z = VectorXd::Zero(nn);
      VectorXd w = VectorXd::Zero(nn);
      for (std::ptrdiff_t j = 1; j <= k.m(); ++j) {
        double zs = 0.0;
        double ws = 0.0;
        for (std::ptrdiff_t q = j; q <= k.m(); ++q) {
          zs += k(q);
          ws += k(-q);
        }
        z(j - 1) = 2.0 * zs;
        w(nn - j) = 2.0 * ws;
      }
      MatrixXd x = s.t - left * ytilde - right * yhat;
      x.col(0) += z;
      x.col(nn - 1) += w;
      return x;
    }
  }
  return s.t;
}

inline flipblur::Psf to_psf(const Kernel& k) {
  return flipblur::Psf(1, k.h.size(), k.h);
}

// Positive random kernel with unit sum.
inline Kernel random_kernel(std::size_t m, flipblur::GaussianStream& rng) {
  Kernel k{std::vector<double>(2 * m + 1)};
  double sum = 0.0;
  for (double& v : k.h) sum += (v = rng.uniform_open());
  for (double& v : k.h) v /= sum;
  return k;
}

// sum_k h_k exp(i <k, theta>) by direct double summation over the grid.
inline std::complex<double> symbol(const flipblur::Psf& psf, double theta1, double theta2) {
  std::complex<double> acc = 0.0;
  const auto m1 = static_cast<std::ptrdiff_t>(psf.row_halfwidth());
  const auto m2 = static_cast<std::ptrdiff_t>(psf.col_halfwidth());
  for (std::ptrdiff_t k1 = -m1; k1 <= m1; ++k1)
    for (std::ptrdiff_t k2 = -m2; k2 <= m2; ++k2)
      acc += psf.at(k1, k2) * std::polar(1.0, static_cast<double>(k1) * theta1 +
                                                  static_cast<double>(k2) * theta2);
  return acc;
}

// 2D convolution with explicit ghost lookup per output pixel; the ghost value
// is computed by a caller-supplied function of (row, col) in 0-based padded
// coordinates relative to the image origin.
template <typename Ghost>
std::vector<double> convolve_pointwise(const flipblur::Psf& psf, std::size_t rows, std::size_t cols,
                                       Ghost&& value) {
  std::vector<double> out(rows * cols, 0.0);
  const auto m1 = static_cast<std::ptrdiff_t>(psf.row_halfwidth());
  const auto m2 = static_cast<std::ptrdiff_t>(psf.col_halfwidth());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t k1 = -m1; k1 <= m1; ++k1)
        for (std::ptrdiff_t k2 = -m2; k2 <= m2; ++k2)
          acc += psf.at(k1, k2) * value(static_cast<std::ptrdiff_t>(r) - k1,
                                        static_cast<std::ptrdiff_t>(c) - k2);
      out[r * cols + c] = acc;
    }
  return out;
}

}  // namespace oracle
