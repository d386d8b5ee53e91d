#ifndef PCMCI_CLI_HPP
#define PCMCI_CLI_HPP

#include <iosfwd>

namespace pcmci {

enum ExitCode : int {
    kExitOk = 0,
    kExitPropertyFailure = 1,
    kExitInputError = 2,
    kExitInsufficientData = 3,
    kExitGenerationFailure = 4,
};

/// Entry point of the pcmciplus tool: discover, simulate, benchmark, verify.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pcmci

#endif  // PCMCI_CLI_HPP
