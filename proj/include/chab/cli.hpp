#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chab {

// One process, one subcommand, one output document on stdout. Exit codes:
// 0 success, 2 malformed input, 3 capacity, 1 internal. Errors go to stderr
// as a one-line JSON record.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr uint64_t kDefaultSeed = 1729;

}  // namespace chab
