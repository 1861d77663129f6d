#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace esvd::cli {

/// Runs one command line (without the program name). Failures print a single
/// "error: <Code>: <message>" line to `err`; usage errors return 2, other
/// failures 1.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace esvd::cli
