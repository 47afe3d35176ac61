#pragma once

#include "empathic/session/workflow.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace empathic::cli {

enum ExitCode { kOk = 0, kInconsistent = 1, kUsage = 2, kInternal = 3 };

// argv without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        session::Clock clock = session::utc_now);

}  // namespace empathic::cli
