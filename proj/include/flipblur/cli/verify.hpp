#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "flipblur/boundary.hpp"

namespace flipblur::cli {

// The padding rule under test. Checks that exercise boundary handling go
// through this hook so that a deliberately broken rule can be injected.
using ExtendFn = std::function<Image(const Image&, Padding, BcKind)>;

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_verification(const ExtendFn& extend_fn = nullptr);

/// One aligned row per check plus a total line.
void print_verification(std::ostream& os, const std::vector<CheckResult>& results);

/// kExitOk when every check passes, kExitVerification otherwise.
int cmd_verify(std::ostream& log, const ExtendFn& extend_fn = nullptr);

}  // namespace flipblur::cli
