#ifndef ZIPBOOST_CLI_COMMANDS_H_
#define ZIPBOOST_CLI_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace zipboost::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Parses and runs one subcommand (train, predict, evaluate, compare, cv,
// explain, simulate). `args` excludes the program name. Normal output goes to
// `out`, diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zipboost::cli

#endif  // ZIPBOOST_CLI_COMMANDS_H_
