#pragma once

// Command layer behind the morseflow binary; testable in-process.
// Exit codes: 0 success / routes agree, 1 input error, 2 numerical
// disagreement.

#include <iosfwd>
#include <string>
#include <vector>

namespace morseflow::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace morseflow::cli
