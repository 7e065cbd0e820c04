#pragma once

#include <ostream>
#include <string>

#include "nlpc/config.hpp"

namespace nlpc {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitNoConvergence = 3,
    kExitDomain = 4,
};

/// Each command writes its files under config.output.dir and a copy of the
/// resolved configuration as config.json. Progress goes to `log`.
int cmd_dispersion(const RunConfig& config, std::ostream& log);
int cmd_fourier(const RunConfig& config, std::ostream& log);
int cmd_jsa(const RunConfig& config, std::ostream& log);
int cmd_design(const RunConfig& config, std::ostream& log);
int cmd_schmidt(const RunConfig& config, std::ostream& log);
int cmd_tolerance(const RunConfig& config, std::ostream& log);

/// Full command-line front end; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace nlpc
