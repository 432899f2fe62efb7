#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cnofs::cli {

// Exit codes.
inline constexpr int kOk = 0;      // success, or proof accepted
inline constexpr int kReject = 1;  // proof rejected
inline constexpr int kUsage = 2;   // bad arguments or parameters
inline constexpr int kFile = 3;    // unreadable, unwritable or malformed file

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cnofs::cli
