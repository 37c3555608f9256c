#pragma once

#include "tn/mp_build.hpp"
#include "tn/run_config.hpp"

#include <iosfwd>

// Assembles the model operators and MPO for a RunConfig, runs DMRG and the
// requested measurements, and writes a plain-text summary plus CSV blocks.

namespace tn {

/// Exit codes: 0 success, 1 configuration error, 2 runtime error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

/// On-site operator set for the configured model.
SiteOperatorSet model_operators(const RunConfig &config);
/// Hamiltonian MPO for the configured model.
MPO model_mpo(const RunConfig &config);

struct RunArtifacts {
  DmrgResult dmrg;
  std::string summary_path;
  std::string csv_path;
};

/// Full batch run; throws ConfigError for configuration problems and
/// std::exception subtypes for runtime failures.
RunArtifacts run(const RunConfig &config, std::ostream *log = nullptr);

int run_main(const RunConfig &config, std::ostream &err, bool verbose);

} // namespace tn
