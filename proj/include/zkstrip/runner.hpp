#ifndef ZKSTRIP_RUNNER_HPP
#define ZKSTRIP_RUNNER_HPP

#include <string>
#include <vector>

#include "zkstrip/config.hpp"

namespace zk {

// Result of one driver verb. exit_code: 0 ok/pass, 1 check failed,
// 2 configuration/usage error, 3 solver failure.
struct CommandResult {
    int exit_code = 0;
    std::string text; // human-readable summary (CLI prints this)
    std::string json; // machine-readable report
    std::vector<std::string> files_written;
};

// --out flag > ZKSTRIP_OUT environment variable > config out_dir > "zk_out"
std::string resolve_out_dir(const ConfigFile& cfg, const std::string& cli_out);

CommandResult cmd_run(const ConfigFile& cfg, const std::string& out_dir);
CommandResult cmd_check(const ConfigFile& cfg, const std::string& check_name,
                        const std::string& out_dir);
CommandResult cmd_sweep(const ConfigFile& cfg, const std::string& parameter,
                        const std::string& out_dir);
CommandResult cmd_info(const ConfigFile& cfg);

} // namespace zk

#endif
