#ifndef NHP_RUNNER_HPP
#define NHP_RUNNER_HPP

#include <ostream>
#include <string>

#include "config.hpp"

namespace nhp {

// Exit codes shared with the CLI: 0 success, 1 verification failures,
// 2 config error, 3 partial sweep failure, 4 internal degeneracy.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPartialSweep = 3;
inline constexpr int kExitDegenerate = 4;

int run_solve(const RunConfig& cfg, const std::string& outdir, std::ostream& log);
int run_sweep(const RunConfig& cfg, const std::string& outdir, std::ostream& log);
int run_verify(const RunConfig& cfg, const std::string& outdir, std::ostream& log);

}  // namespace nhp

#endif  // NHP_RUNNER_HPP
