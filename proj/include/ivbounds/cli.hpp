#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ivbounds {

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name. Human text goes to out, diagnostics to err;
// --report PATH additionally writes a JSON report.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ivbounds
