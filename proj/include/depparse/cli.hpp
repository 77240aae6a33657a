#ifndef DEPPARSE_CLI_HPP
#define DEPPARSE_CLI_HPP

namespace depparse {

// Entry point for the depparse tool. Returns the process exit code:
// 0 on success, 1 on data/validation failures, 2 on usage errors.
int run_cli(int argc, char** argv);

}  // namespace depparse

#endif  // DEPPARSE_CLI_HPP
