#include "flipblur/restore.hpp"

#include <algorithm>

#include "flipblur/error.hpp"

namespace flipblur {

std::string_view to_string(SolverKind solver) {
  return solver == SolverKind::Gmres ? "gmres" : "minres";
}

std::optional<SolverKind> parse_solver(std::string_view name) {
  if (name == "gmres") return SolverKind::Gmres;
  if (name == "minres") return SolverKind::Minres;
  return std::nullopt;
}

namespace {

Eigen::VectorXd to_vector(const Image& img) {
  return Eigen::Map<const Eigen::VectorXd>(img.data().data(), static_cast<Eigen::Index>(img.size()));
}

Image to_image(const Shape& shape, const Eigen::VectorXd& v) {
  return Image(shape, std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

Restoration restore(const BlurOperator& op, const Image& data, const RestoreOptions& options,
                    const std::optional<Image>& truth) {
  if (data.rows() != op.shape().rows || data.cols() != op.shape().cols)
    throw Error(ErrorKind::DimensionError, "data shape does not match operator shape");
  if (truth && (truth->rows() != data.rows() || truth->cols() != data.cols()))
    throw Error(ErrorKind::DimensionError, "truth shape does not match operator shape");

  Eigen::VectorXd rhs = to_vector(data);
  LinearOperator apply;
  if (options.flip) {
    rhs.reverseInPlace();
    apply = [&op](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
      op.flip_apply(in.data(), out.data());
    };
  } else {
    apply = [&op](const Eigen::VectorXd& in, Eigen::VectorXd& out) { op.apply(in.data(), out.data()); };
  }
  std::optional<Eigen::VectorXd> truth_vec;
  if (truth) truth_vec = to_vector(*truth);

  SolveReport report = options.solver == SolverKind::Gmres
                           ? gmres(apply, rhs, options.rule, truth_vec)
                           : minres(apply, rhs, options.rule, truth_vec, options.minres);

  Restoration out{to_image(op.shape(), report.solution), std::move(report.history), std::nullopt,
                  std::nullopt};
  if (report.solution_at_discrepancy)
    out.at_discrepancy = to_image(op.shape(), *report.solution_at_discrepancy);
  if (report.solution_at_best) out.at_best = to_image(op.shape(), *report.solution_at_best);
  return out;
}

}  // namespace flipblur
