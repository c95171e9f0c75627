#ifndef KINETIC_CLI_HPP_
#define KINETIC_CLI_HPP_

namespace kinetic::cli {

// Exit statuses (stable API): 0 success, 2 usage error, 3 configuration
// error, 4 solver failure (diagnostic dump path printed to stderr).
int parse_and_dispatch(int argc, const char* const* argv);

}  // namespace kinetic::cli

#endif  // KINETIC_CLI_HPP_
