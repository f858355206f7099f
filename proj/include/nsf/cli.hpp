#pragma once

namespace nsf {

/// Process exit codes of nsf-uq.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,      // bad arguments, config or data
  kExitStep = 3,        // Newton failure
  kExitPositivity = 4,  // nonpositive density or temperature
  kExitVerify = 5,      // verify mode found a failing check
  kExitIo = 6,          // output could not be written
};

/// `nsf-uq <mode> --config <path> [--threads N] [--out DIR]`. The thread count
/// is taken from --threads, else NSF_UQ_THREADS, else the config.
int run_cli(int argc, const char* const* argv);

}  // namespace nsf
