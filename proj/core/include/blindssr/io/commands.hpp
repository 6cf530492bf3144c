#ifndef BLINDSSR_IO_COMMANDS_HPP
#define BLINDSSR_IO_COMMANDS_HPP

#include "blindssr/io/config.hpp"

#include <ostream>

namespace blindssr::io {

// Exit codes: 0 success, 1 validation, 2 numeric failure, 3 casebook mismatch.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitCasebookMismatch = 3;

int cmd_design(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_calibrate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_reestimate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_power(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_casebook(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatch on config.command; honors config.out_path; maps exceptions to
/// exit codes and writes diagnostics to err.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace blindssr::io

#endif
