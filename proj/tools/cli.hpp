#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcl::cli {

// Entry point shared by the qcl binary and the CLI tests.  `args` excludes
// the program name.  Returns the process exit code: 0 pass, 1 tolerance
// failure, 2 usage/configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// Parses a JSON run config, fills defaults, and re-serializes it.  Feeding
// the output back in is a fixed point; used to test config file handling.
std::string config_round_trip(const std::string& json_text);

}  // namespace qcl::cli
