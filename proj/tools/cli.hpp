#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scsnap::cli {

// Exit codes: 0 success / accepted, 1 rejected history, 2 usage, parse or
// refusal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scsnap::cli
