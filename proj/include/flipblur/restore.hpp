#pragma once

#include <optional>
#include <string_view>

#include "flipblur/boundary.hpp"
#include "flipblur/image.hpp"
#include "flipblur/krylov.hpp"

namespace flipblur {

enum class SolverKind { Gmres, Minres };

std::string_view to_string(SolverKind solver);
std::optional<SolverKind> parse_solver(std::string_view name);

struct RestoreOptions {
  SolverKind solver = SolverKind::Gmres;
  bool flip = false;  // solve Y A f = Y g instead of A f = g
  StoppingRule rule;
  MinresOptions minres;
};

struct Restoration {
  Image solution;
  IterationHistory history;
  std::optional<Image> at_discrepancy;
  std::optional<Image> at_best;
};

/// Runs the selected Krylov method on the (optionally flipped) blur system.
/// The flip is orthogonal, so residual norms are those of A f = g either way.
Restoration restore(const BlurOperator& op, const Image& data, const RestoreOptions& options,
                    const std::optional<Image>& truth = std::nullopt);

}  // namespace flipblur
