#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cty::cli {

// args excludes the program name.  Returns 0 when every requested check
// passes, 1 on a verification failure, 2 on invalid input.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cty::cli
