#pragma once

namespace frachelm {

/// Entry point of the `frachelm` tool. Returns 0 on success, 1 for invalid
/// input and 2 for numerical failures.
int run_cli(int argc, char** argv);

}  // namespace frachelm
