#pragma once

#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "hybridbec/config.hpp"

namespace hybridbec {

struct CommandOptions {
    std::filesystem::path out_dir;  ///< empty: config.output_dir
    unsigned jobs = 1;
    bool compare = false;           ///< spectrum: run all three methods and a deviation table
};

using Artifacts = std::vector<std::filesystem::path>;

Artifacts cmd_ground(const RunConfig& config, const CommandOptions& opts);
Artifacts cmd_spectrum(const RunConfig& config, const CommandOptions& opts);
Artifacts cmd_density(const RunConfig& config, const CommandOptions& opts);
Artifacts cmd_variational(const RunConfig& config, const CommandOptions& opts);
Artifacts cmd_fig3(const RunConfig& config, const CommandOptions& opts);

/// 0 ok, 2 config/domain, 3 non-convergence, 4 collapse, 5 internal.
int exit_code_for(const std::exception& e);

/// {"error": kind, "message": ..., "exit_code": n, ...} on one line.
std::string error_json(const std::exception& e);

}  // namespace hybridbec
