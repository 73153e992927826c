#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace dqlab {

// Parsed experiment description: a subcommand name plus an object of options
// mirroring the command-line flags one to one (flag "--alpha 0.01" becomes
// {"alpha": 0.01}). Used by the JSON config front end.
struct ExperimentConfig {
    std::string command;
    nlohmann::json options;
};

// Exit codes: 0 success, 2 invalid input, 3 numerical failure.
int run(const ExperimentConfig& config);

// Full command-line entry point (args exclude the program name).
int run_cli(const std::vector<std::string>& args);

} // namespace dqlab
