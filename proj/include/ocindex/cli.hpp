#ifndef OCINDEX_CLI_HPP
#define OCINDEX_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ocindex::cli {

/// Runs one invocation (arguments without the program name).
/// Exit codes: 0 success, 1 operational error, 2 usage error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace ocindex::cli

#endif // OCINDEX_CLI_HPP
