#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latnet::cli {

// In-process entry point used by both the binary and the tests. args are the
// argv words after the program name. Returns the process exit code:
//   0  success
//   1  usage or parse/validation failure
//   2  iteration finished without convergence (partial CSV still written)
//   3  a size guard refused the computation
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latnet::cli
