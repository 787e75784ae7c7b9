#pragma once

#include <string>
#include <vector>

namespace causalsurv {

// Subcommands: simulate, fit, predict, baseline, report. Returns 0 on
// success; failures print a single-line diagnostic to stderr and return
// nonzero.
int cli_main(const std::vector<std::string>& args);

}  // namespace causalsurv
