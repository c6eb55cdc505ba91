#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gridtariff/error.hpp"

namespace gridtariff::cli {

// Exit statuses of the gridtariff command.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kInfeasible = 3,
  kIo = 4,
};

int exit_code_for(ErrorCode code);

std::string version_string();

// `args` excludes the program name. Errors are reported on `err` as one JSON
// object: {"error": <code>, "exit_code": <n>, "message": <text>}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridtariff::cli
