#include <iostream>

#include <CLI11.hpp>

#include "gmfs/cli.hpp"
#include "gmfs/error.hpp"

namespace gmfs::cli {

namespace {

const std::vector<std::string> kCommands{"coeffs", "expand", "verify", "diag", "sde"};

int fail(int code, const std::string& message) {
    std::cerr << "gmfs: " << message << '\n';
    return code;
}

}  // namespace

int main(const std::vector<std::string>& args) {
    CLI::App app{"Multiple Fourier series expansions of iterated stochastic integrals"};
    app.require_subcommand(1);
    std::string config_path;
    std::optional<std::string> output;
    bool override_flag = false;
    for (const std::string& name : kCommands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", config_path, "JSON config file");
        sub->add_option("-o,--output", output, "output directory");
        sub->add_flag("--allow-outside-guarantees", override_flag,
                      "run configurations the convergence results do not cover");
    }
    if (!args.empty() && args[0].rfind('-', 0) != 0 &&
        std::find(kCommands.begin(), kCommands.end(), args[0]) == kCommands.end())
        return fail(kUnknownCommand, "unknown subcommand '" + args[0] + "'");
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUnknownCommand;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    RunConfig cfg;
    try {
        cfg = config_path.empty() ? parse_config(nlohmann::json::object()) : load_config(config_path);
    } catch (const ConfigError& e) {
        return fail(kMalformedConfig, e.what());
    }
    if (override_flag) cfg.allow_outside_guarantees = true;
    try {
        validate(command, cfg);
    } catch (const ValidationError& e) {
        return fail(kValidation, std::string("invalid configuration: ") + e.what());
    }
    const std::filesystem::path out = resolve_output(output, cfg);
    try {
        run_command(command, cfg, out);
    } catch (const DomainError& e) {
        return fail(kValidation, std::string("invalid configuration: ") + e.what());
    } catch (const DimensionError& e) {
        return fail(kValidation, std::string("invalid configuration: ") + e.what());
    } catch (const SizingError& e) {
        return fail(kValidation, std::string("invalid configuration: ") + e.what());
    } catch (const IntegrationAbort& e) {
        return fail(kNumeric, std::string("numeric failure: ") + e.what());
    } catch (const QuadratureError& e) {
        return fail(kNumeric, std::string("numeric failure: ") + e.what());
    } catch (const std::range_error& e) {
        return fail(kNumeric, std::string("numeric failure: ") + e.what());
    } catch (const std::exception& e) {
        return fail(kNumeric, e.what());
    }
    std::cout << command << ": wrote " << out.string() << '\n';
    return kOk;
}

int main(int argc, char** argv) { return main(std::vector<std::string>(argv + 1, argv + argc)); }

}  // namespace gmfs::cli
