#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isospec::cli {

/// Exit codes: 0 success, 1 a verified bound failed, 2 usage, configuration
/// or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace isospec::cli
