#include <cstdint>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace choquard::cli;

int main(int argc, char** argv) {
    CLI::App app{"Numerical lab for the Choquard equation in three dimensions"};
    app.set_version_flag("--version", std::string(kToolVersion));
    RunContext ctx;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    app.add_option("command", ctx.command, "limit | curve | semiclassical | sweep | path-profile | verify")
        ->required()
        ->check(CLI::IsMember(command_names()));
    app.add_option("--config", config_path, "JSON run configuration; defaults apply when omitted")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "overrides solver.seed");
    app.add_option("--out", out, "output directory")->capture_default_str();
    app.add_flag("--quiet", ctx.quiet, "suppress progress output");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        ctx.config = config_path.empty() ? parse_config(nlohmann::json::object()) : parse_config(std::filesystem::path(config_path));
    } catch (const IoError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kIo;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kValidation;
    }
    if (seed) ctx.config.solver.seed = *seed;
    ctx.out = out;
    return run(ctx);
}
