// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_CLI_RUN_HPP_
#define VTCAMO_CLI_RUN_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace vtcamo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `vtcamo` tool. `args` excludes the program name.
// Reports go to `out`; help goes to `out`; errors go to `err` as JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vtcamo::cli

#endif  // VTCAMO_CLI_RUN_HPP_
