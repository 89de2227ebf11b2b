#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <thread>

#include "wqed/config.hpp"

namespace cli = wqed::cli;

int main(int argc, char** argv)
{
    CLI::App app{"waveguide QED toolkit"};
    app.set_version_flag("--version", cli::library_version());
    app.require_subcommand(1);

    std::string config_path, out_path, format;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    long long seed = -1;

    for (const auto& name : cli::commands()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " command");
        sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "output file, overrides output.path");
        sub->add_option("--format", format, "csv or json, overrides output.format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "seed for stochastic runs, overrides the config")
            ->check(CLI::NonNegativeNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        nlohmann::json j;
        {
            std::ifstream in(config_path);
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw cli::SchemaError(std::string("config: invalid JSON: ") + e.what());
            }
        }
        if (!j.is_object())
            throw cli::SchemaError("config: must be an object");
        if (!j.contains("command"))
            j["command"] = command;
        else if (j["command"] != command)
            throw cli::SchemaError("command: config says " + j["command"].dump() + " but subcommand is " + command);
        if (!out_path.empty())
            j["output"]["path"] = out_path;
        if (!format.empty())
            j["output"]["format"] = format;
        if (seed >= 0)
            j["seed"] = static_cast<std::uint64_t>(seed);

        const cli::RunConfig cfg = cli::parse_config(j);
        const cli::Table table = cli::run(cfg, threads);
        if (cfg.output.path.empty() || cfg.output.path == "-")
            std::cout << cli::render(cfg, table);
        else
            cli::write_output(cfg, table);
    } catch (const std::exception& e) {
        std::cerr << "wqed " << command << ": " << e.what() << '\n';
        if (const auto* ce = dynamic_cast<const wqed::ConvergenceError*>(&e))
            std::cerr << "  best estimate: " << cli::format_number(ce->estimate()) << '\n';
        return cli::exit_code_for(e);
    }
    return 0;
}
