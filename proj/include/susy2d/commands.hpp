#ifndef SUSY2D_COMMANDS_HPP
#define SUSY2D_COMMANDS_HPP

#include <string>

#include <json.hpp>

#include "susy2d/config.hpp"

namespace susy2d {

struct CommandResult {
    int exit_code = 0;    // 0 ok, 1 tolerance or check failure, 2 bad input
    std::string output;   // JSON or CSV, written even on failure
    std::string message;  // one-line summary for stderr
};

CommandResult cmd_verify_algebra(const RunConfig& cfg);
CommandResult cmd_spectrum(const RunConfig& cfg);
CommandResult cmd_zero_modes(const RunConfig& cfg);
CommandResult cmd_limit_sweep(const RunConfig& cfg);
CommandResult cmd_specfun_test(const RunConfig& cfg);

// dispatch by name; input errors raised inside a command become exit code 2
CommandResult run_command(const std::string& name, const RunConfig& cfg);

nlohmann::json grid_json(const Grid& grid);
nlohmann::json params_json(const RunConfig& cfg);

}  // namespace susy2d

#endif
