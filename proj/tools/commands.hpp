#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace choquard::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kValidation = 1, kNotConverged = 2, kIo = 3 };

const std::vector<std::string>& command_names();

struct RunContext {
    std::string command;
    RunConfig config;
    std::filesystem::path out = ".";
    bool quiet = false;
};

/// Runs one command, writing artifacts and manifest.json under ctx.out. Errors are reported on
/// stderr and mapped to an ExitCode.
int run(const RunContext& ctx);

/// manifest.json body: the resolved config plus a "manifest" block naming tool, version, command.
nlohmann::json manifest(const RunContext& ctx);

struct VerifyRow {
    std::string check;
    double measured = 0.0;
    double threshold = 0.0;
    bool upper = true;  // pass when measured <= threshold, else when measured >= threshold
    bool pass() const { return upper ? measured <= threshold : measured >= threshold; }
};

/// The invariant suite behind `verify`; all randomness comes from config.solver.seed.
std::vector<VerifyRow> verify_suite(const RunConfig& cfg, bool quiet);

}  // namespace choquard::cli
