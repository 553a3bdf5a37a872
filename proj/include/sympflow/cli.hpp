#pragma once

#include <string>
#include <vector>

namespace sympflow {

/// Runs one CLI invocation. `args` excludes the program name.
/// Exit codes: 0 success, 1 check failure (--strict), 2 usage or input parse
/// error, 3 numeric failure.
int run_cli(const std::vector<std::string>& args);

int run_cli(int argc, char** argv);

}  // namespace sympflow
