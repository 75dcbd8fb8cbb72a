#include "flipblur/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "flipblur/error.hpp"

namespace flipblur {

namespace {

void check_square(const DenseMatrix& m, std::size_t cap) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionError, "matrix must be square");
  if (static_cast<std::size_t>(m.rows()) > cap)
    throw Error(ErrorKind::SizeCapExceeded, std::to_string(m.rows()) +
                                                " rows exceed the dense cap of " +
                                                std::to_string(cap));
}

std::string matrix_hash(const DenseMatrix& m) {
  std::uint64_t h = 14695981039346656037ull;  // FNV-1a
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      unsigned char bytes[sizeof v];
      std::memcpy(bytes, &v, sizeof v);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
      }
    }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

SpectrumReport eigen_dense(const DenseMatrix& m, double relative_tol, std::size_t cap) {
  check_square(m, cap);
  SpectrumReport report;
  if (m.rows() == 0) return report;
  Eigen::EigenSolver<DenseMatrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::EigensolverFailure, "real Schur iteration did not converge (matrix " +
                                                   matrix_hash(m) + ")");
  const Eigen::VectorXcd& values = solver.eigenvalues();
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  const double norm_inf = m.cwiseAbs().rowwise().sum().maxCoeff();
  report.tol = relative_tol * std::sqrt(norm1 * norm_inf);
  report.eigenvalues.assign(values.data(), values.data() + values.size());
  for (const Complex& z : report.eigenvalues) {
    report.max_abs_imag = std::max(report.max_abs_imag, std::abs(z.imag()));
    if (std::abs(z.imag()) > report.tol) ++report.nonreal_count;
  }
  return report;
}

std::vector<double> singular_values_dense(const DenseMatrix& m, std::size_t cap) {
  check_square(m, cap);
  if (m.rows() == 0) return {};
  Eigen::BDCSVD<DenseMatrix> svd(m);
  if (svd.info() != Eigen::Success)
    throw Error(ErrorKind::EigensolverFailure,
                "SVD did not converge (matrix " + matrix_hash(m) + ")");
  const Eigen::VectorXd& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double schatten_norm(std::span<const double> singular_values, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidOrder, "Schatten order must be >= 1");
  if (singular_values.empty()) return 0.0;
  const double top = *std::max_element(singular_values.begin(), singular_values.end());
  if (std::isinf(p) || top == 0.0) return top;
  // Scaled to avoid overflow for large p.
  double sum = 0.0;
  for (double s : singular_values) sum += std::pow(s / top, p);
  return top * std::pow(sum, 1.0 / p);
}

double schatten_norm(const DenseMatrix& m, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidOrder, "Schatten order must be >= 1");
  const std::vector<double> sv = singular_values_dense(m, static_cast<std::size_t>(m.rows()));
  return schatten_norm(sv, p);
}

IntervalSet symbol_range(const Psf& psf, std::size_t nodes) {
  const double top = max_abs_symbol(psf, nodes);
  return {-top, top};
}

namespace {

double distance_to(const Complex& z, const ClusterSet& set) {
  if (const auto* points = std::get_if<PointSet>(&set)) {
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& p : points->points) best = std::min(best, std::abs(z - p));
    return best;
  }
  const auto& seg = std::get<IntervalSet>(set);
  const double re = std::clamp(z.real(), seg.lo, seg.hi);
  return std::abs(z - Complex(re, 0.0));
}

}  // namespace

ClusterCount cluster_count(std::span<const Complex> eigenvalues, const ClusterSet& set,
                           double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidSet, "epsilon must be positive");
  if (const auto* points = std::get_if<PointSet>(&set); points && points->points.empty())
    throw Error(ErrorKind::InvalidSet, "empty point set");
  if (const auto* seg = std::get_if<IntervalSet>(&set); seg && !(seg->lo <= seg->hi))
    throw Error(ErrorKind::InvalidSet, "interval with lo > hi");
  ClusterCount out{epsilon, set, 0};
  for (const Complex& z : eigenvalues)
    if (distance_to(z, set) > epsilon) ++out.count_outside;
  return out;
}

ClusterCount cluster_count(const SpectrumReport& spectrum, const ClusterSet& set, double epsilon) {
  return cluster_count(spectrum.eigenvalues, set, epsilon);
}

SymbolComparison compare_to_psi(const SpectrumReport& spectrum, const PsiSample& psi) {
  if (spectrum.eigenvalues.size() != psi.values.size())
    throw Error(ErrorKind::SampleSizeError,
                std::to_string(spectrum.eigenvalues.size()) + " eigenvalues vs " +
                    std::to_string(psi.values.size()) + " psi samples");
  SymbolComparison out;
  out.sorted_eig_real_parts.reserve(spectrum.eigenvalues.size());
  for (const Complex& z : spectrum.eigenvalues) out.sorted_eig_real_parts.push_back(z.real());
  std::sort(out.sorted_eig_real_parts.begin(), out.sorted_eig_real_parts.end());
  out.sorted_psi_samples = psi.values;
  std::sort(out.sorted_psi_samples.begin(), out.sorted_psi_samples.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < out.sorted_psi_samples.size(); ++i) {
    const double dev = std::abs(out.sorted_eig_real_parts[i] - out.sorted_psi_samples[i]);
    out.max_abs_dev = std::max(out.max_abs_dev, dev);
    sum += dev;
  }
  if (!out.sorted_psi_samples.empty())
    out.mean_abs_dev = sum / static_cast<double>(out.sorted_psi_samples.size());
  return out;
}

std::vector<std::size_t> psi_nodes_for(const Shape& shape) {
  if (shape.rank == 1) {
    if (shape.cols % 2 != 0)
      throw Error(ErrorKind::SampleSizeError, "psi sampling needs an even signal length");
    return {shape.cols / 2};
  }
  if (shape.cols % 2 == 0) return {shape.rows, shape.cols / 2};
  if (shape.rows % 2 == 0) return {shape.rows / 2, shape.cols};
  throw Error(ErrorKind::SampleSizeError, "psi sampling needs at least one even image extent");
}

double asymmetry(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionError, "matrix must be square");
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

void write_spectrum_csv(std::ostream& os, const SpectrumReport& spectrum) {
  os << "re,im\n";
  char buf[64];
  for (const Complex& z : spectrum.eigenvalues) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", z.real(), z.imag());
    os << buf;
  }
}

void write_comparison_csv(std::ostream& os, const SymbolComparison& comparison) {
  os << "index,eig_real,psi_sample,deviation\n";
  char buf[96];
  for (std::size_t i = 0; i < comparison.sorted_psi_samples.size(); ++i) {
    const double e = comparison.sorted_eig_real_parts[i];
    const double p = comparison.sorted_psi_samples[i];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, e, p, e - p);
    os << buf;
  }
}

}  // namespace flipblur
