#ifndef CHEMO_CLI_HPP
#define CHEMO_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace chemo::cli {

inline constexpr int exit_completed = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_blowup = 10;

/// Entry point of the `chemo` tool; returns the process exit code.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chemo::cli

#endif  // CHEMO_CLI_HPP
