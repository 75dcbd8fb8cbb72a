#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>

#include "flipblur/cli/config.hpp"

namespace flipblur::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitNumerical = 3,
  kExitVerification = 4,
};

// Each command writes into config.out (created if missing) and a short
// human-readable summary to `log`.
//
//   blur      blurred.pgm  blurred.txt  truth.txt  psf.txt  blurred.json
//   deblur    <bc>-<flip|noflip>-<solver>/{history.csv, metrics.json,
//             solve.json, restored_*.pgm}  summary.csv
//   grid      like deblur, but each boundary rule blurs the truth itself
//   spectrum  <bc>/<size>/{eig_noflip.csv, eig_flip.csv, psi_comparison.csv}
//             spectrum.json  w_norms.csv
int cmd_blur(const ExperimentConfig& config, std::ostream& log);
int cmd_deblur(const ExperimentConfig& config, std::ostream& log);
int cmd_grid(const ExperimentConfig& config, std::ostream& log);
int cmd_spectrum(const ExperimentConfig& config, std::ostream& log);

/// Full command-line entry point; maps library errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Calls task(i) for i in [0, count) on at most `threads` workers. The first
/// exception by index is rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& task);

}  // namespace flipblur::cli
