#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace flipblur {

/// out = A * in. `out` arrives sized to the problem dimension.
using LinearOperator = std::function<void(const Eigen::VectorXd& in, Eigen::VectorXd& out)>;

struct Discrepancy {
  double delta = 0.0;  // 2-norm of the noise
  double tau = 1.0;    // safety factor, >= 1
};

struct StoppingRule {
  std::size_t max_iter = 100;
  std::optional<Discrepancy> discrepancy;
  // When false the first iteration meeting the discrepancy principle is
  // recorded but the solver keeps going until max_iter.
  bool stop_at_discrepancy = true;
  bool keep_all_iterates = false;

  void validate() const;
};

enum class StopReason { Discrepancy, MaxIter, Breakdown };
enum class Breakdown { None, Lucky, Unlucky };

std::string_view to_string(StopReason reason);
std::string_view to_string(Breakdown breakdown);

struct IterationHistory {
  std::vector<double> residual_norms;  // ||b - A x_k||, k = 0..K
  std::vector<double> rre_per_iter;    // empty when no truth was supplied
  StopReason stopped_by = StopReason::MaxIter;
  std::optional<std::size_t> discrepancy_iter;
  std::optional<std::size_t> best_iter;  // argmin of rre_per_iter
  Breakdown breakdown = Breakdown::None;

  std::size_t iterations() const { return residual_norms.empty() ? 0 : residual_norms.size() - 1; }
};

struct SolveReport {
  Eigen::VectorXd solution;  // final iterate
  IterationHistory history;
  std::optional<Eigen::VectorXd> solution_at_discrepancy;
  std::optional<Eigen::VectorXd> solution_at_best;
  std::vector<Eigen::VectorXd> iterates;  // x_0..x_K, only with keep_all_iterates
};

/// Full (unrestarted) GMRES from a zero initial guess: Arnoldi with modified
/// Gram-Schmidt, least squares by Givens rotations.
SolveReport gmres(const LinearOperator& a, const Eigen::VectorXd& b, const StoppingRule& rule,
                  const std::optional<Eigen::VectorXd>& truth = std::nullopt);

struct MinresOptions {
  // Opt-in check that <Ax, y> ~ <x, Ay> on random pairs (relative 1e-8).
  bool probe_symmetry = false;
  std::uint64_t probe_seed = 0x5eed;
  int probe_pairs = 3;
  double probe_tolerance = 1e-8;
};

/// Lanczos-based MINRES from a zero initial guess. The recorded residuals are
/// ||b - A x_k|| with A x_k carried along by the same recurrence as x_k, so
/// they stay meaningful when the operator is only nearly symmetric.
SolveReport minres(const LinearOperator& a, const Eigen::VectorXd& b, const StoppingRule& rule,
                   const std::optional<Eigen::VectorXd>& truth = std::nullopt,
                   const MinresOptions& options = {});

/// delta = gamma * ||A f||, the exact norm of the injected noise.
double discrepancy_delta(double noise_level, double blurred_exact_norm);

/// Columns iter, residual_norm, rre (blank without truth).
void write_history_csv(std::ostream& os, const IterationHistory& history);

}  // namespace flipblur
