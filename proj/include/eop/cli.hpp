#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace eop {

/// Command-line entry point; subcommands: curve, regret, spearman, simulate,
/// plot, table, import-neorl. Returns the process exit code; failures print a
/// single `error: ...` line to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace eop
