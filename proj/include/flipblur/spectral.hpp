#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "flipblur/boundary.hpp"
#include "flipblur/psf.hpp"

namespace flipblur {

using Complex = std::complex<double>;

struct SpectrumReport {
  std::vector<Complex> eigenvalues;
  std::size_t nonreal_count = 0;  // |Im| > tol
  double max_abs_imag = 0.0;
  double tol = 0.0;  // absolute cutoff actually used
};

/// All eigenvalues of a real nonsymmetric matrix via the real Schur form.
/// The non-real cutoff is relative_tol times an upper bound of the spectral
/// norm, sqrt(||M||_1 ||M||_inf).
SpectrumReport eigen_dense(const DenseMatrix& m, double relative_tol = 1e-10,
                           std::size_t cap = kDefaultDenseCap);

/// Singular values, nonincreasing.
std::vector<double> singular_values_dense(const DenseMatrix& m, std::size_t cap = kDefaultDenseCap);

inline constexpr double kSchattenInf = std::numeric_limits<double>::infinity();

/// p-norm of the singular values; p = kSchattenInf gives the spectral norm.
double schatten_norm(const DenseMatrix& m, double p);
double schatten_norm(std::span<const double> singular_values, double p);

struct PointSet {
  std::vector<Complex> points;
};
struct IntervalSet {  // real segment [lo, hi]
  double lo = 0.0;
  double hi = 0.0;
};
using ClusterSet = std::variant<PointSet, IntervalSet>;

/// [-max|f|, max|f|], with max|f| from a dense uniform grid.
IntervalSet symbol_range(const Psf& psf, std::size_t nodes = 4096);

struct ClusterCount {
  double epsilon = 0.0;
  ClusterSet set;
  std::size_t count_outside = 0;  // q_eps
};

/// Number of eigenvalues at distance > epsilon from the set.
ClusterCount cluster_count(std::span<const Complex> eigenvalues, const ClusterSet& set,
                           double epsilon);
ClusterCount cluster_count(const SpectrumReport& spectrum, const ClusterSet& set, double epsilon);

struct SymbolComparison {
  std::vector<double> sorted_eig_real_parts;
  std::vector<double> sorted_psi_samples;
  double max_abs_dev = 0.0;
  double mean_abs_dev = 0.0;
};

/// Sorted real parts against sorted psi samples, index by index.
SymbolComparison compare_to_psi(const SpectrumReport& spectrum, const PsiSample& psi);

/// Per-dimension node counts whose product is half the pixel count, so that
/// the psi sample has exactly one entry per eigenvalue. One even extent is
/// halved (the last one when possible).
std::vector<std::size_t> psi_nodes_for(const Shape& shape);

/// max |M - M^T| over entries.
double asymmetry(const DenseMatrix& m);

/// Columns re, im.
void write_spectrum_csv(std::ostream& os, const SpectrumReport& spectrum);
/// Columns index, eig_real, psi_sample, deviation.
void write_comparison_csv(std::ostream& os, const SymbolComparison& comparison);

}  // namespace flipblur
