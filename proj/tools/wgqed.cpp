#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "wgqed/scenario.hpp"

namespace {

using namespace wgqed;

struct RunArgs {
    std::string target;
    std::optional<double> loss;
    std::optional<std::string> out;
    std::optional<std::string> format;
    bool dark_state_projection = false;
    std::optional<std::size_t> steps;
};

unsigned worker_count()
{
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("WGQED_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(cap, &end, 10);
        if (end == cap || *end != '\0' || n < 1)
            throw Error(ErrorCode::ConfigError, std::string("WGQED_THREADS: expected a positive integer, got '") +
                                                    cap + "'");
        workers = std::min(workers, static_cast<unsigned>(n));
    }
    return workers;
}

ScenarioConfig load(const std::string& target)
{
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), target) != names.end())
        return preset(target);
    if (!std::filesystem::is_regular_file(target)) {
        throw Error(ErrorCode::UnknownPreset,
                    "'" + target + "' is neither a preset name nor a readable config file");
    }
    std::ifstream in(target);
    std::stringstream text;
    text << in.rdbuf();
    if (!in)
        throw Error(ErrorCode::ConfigError, "cannot read " + target);
    return parse_config(text.str());
}

void write_output(const std::string& text, const std::string& path)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw Error(ErrorCode::ConfigError, "cannot write " + path);
}

int run(const RunArgs& args)
{
    ScenarioConfig config = load(args.target);
    if (args.loss)
        config.loss = {LossLevel::strength(*args.loss)};
    if (args.steps) {
        if (config.sweep)
            config.sweep->steps = *args.steps;
        else
            config.integrator.output_points = *args.steps;
    }
    if (args.dark_state_projection)
        config.dark_state_projection = true;
    if (args.format)
        config.output.format = *args.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (args.out)
        config.output.path = *args.out;

    const ResultTable table = run_scenario(config, worker_count());
    write_output(config.output.format == OutputFormat::Json ? format_json(table, config) : format_csv(table),
                 config.output.path);

    for (const PointFailure& f : table.failures)
        std::cerr << "wgqed: " << f.where << ": " << f.message << '\n';
    return table.failures.empty() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Single-photon scattering and emission for multi-level emitters in a waveguide"};
    app.require_subcommand(1);

    RunArgs args;
    CLI::App* run_cmd = app.add_subcommand("run", "Run a preset or a JSON scenario config");
    run_cmd->add_option("target", args.target, "Preset name or config path")->required();
    run_cmd->add_option("--loss", args.loss, "Single isotropic loss strength replacing the configured levels")
        ->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--out", args.out, "Output file (stdout when omitted or '-')");
    run_cmd->add_option("--format", args.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    run_cmd->add_flag("--dark-state-projection", args.dark_state_projection,
                      "Project out dark excited combinations instead of failing on them");
    run_cmd->add_option("--steps", args.steps, "Sweep points, or output times for emission runs")
        ->check(CLI::PositiveNumber);

    std::string preset_name;
    CLI::App* preset_cmd = app.add_subcommand("preset", "Print a preset as a JSON config, or list presets");
    preset_cmd->add_option("name", preset_name, "Preset name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd)
            return run(args);
        if (preset_name.empty()) {
            for (const std::string& name : preset_names())
                std::cout << name << '\n';
        } else {
            std::cout << serialize_config(preset(preset_name));
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "wgqed: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "wgqed: " << e.what() << '\n';
        return 2;
    }
}
