#pragma once

#include <string>
#include <vector>

namespace auginf::cli {

/// Runs one command line (the arguments after the program name) and returns
/// the process exit code: 0 success, 2 config error, 3 data error, 4
/// numerical divergence, 1 anything unexpected.
///
/// Commands: synth, train, eval, ablate, sweep, replay. Each writes its files
/// under --out with manifest.json at the root.
int run(const std::vector<std::string>& args);

}  // namespace auginf::cli
