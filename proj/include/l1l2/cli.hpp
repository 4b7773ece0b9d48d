#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace l1l2::cli {

enum ExitCode : int { kOk = 0, kFail = 1, kInputError = 2, kBudgetExceeded = 3 };

/// Runs one invocation. `args` excludes the program name. Reports go to
/// --out or `out`; failures are written to `out` as {"error", "detail"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace l1l2::cli
