// SPDX-License-Identifier: Apache-2.0
//! \file landau_tagged.cpp
//! Command-line front end: landau_tagged <subcommand> [flags]

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "landau/cli.hpp"
#include "landau/io.hpp"

int main(int argc, char** argv)
{
    using namespace landau;

    CLI::App app{"Tagged particle in a weakly coupled gas: simulation and validation"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1, 1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out = "out";
    int threads = 0;
    std::string mode;
    for (auto const& name : subcommands())
    {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "YAML configuration file");
        sub->add_option("--seed", seed, "Master seed (overrides the config)");
        sub->add_option("--out", out, "Output directory")->capture_default_str();
        sub->add_option("--threads", threads, "Worker threads (default: all cores)");
        sub->add_option("--mode", mode, "Background mode")
            ->check(CLI::IsMember({"full", "reservoir"}));
    }

    std::string command = "landau_tagged";
    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        std::cerr << error_json(command, e) << "\n";
        return 2;
    }

    DispatchOptions opt;
    try
    {
        CLI::App* sub = app.get_subcommands().front();
        command = opt.command = sub->get_name();
        opt.config = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (sub->count("--seed"))
            opt.seed = seed;
        if (!mode.empty())
            opt.mode = mode;
        opt.out = out;
        if (sub->count("--threads"))
            opt.threads = threads;
        else if (char const* env = std::getenv("LANDAU_TAGGED_THREADS"))
        {
            try
            {
                opt.threads = std::stoi(env);
            }
            catch (std::exception const&)
            {
                throw ConfigError("LANDAU_TAGGED_THREADS", "not an integer");
            }
        }
        DispatchResult const res = dispatch(opt);
        for (auto const& f : res.files)
            std::cout << f.string() << "\n";
        if (!res.report.checks.empty())
        {
            std::size_t failed = 0;
            for (auto const& c : res.report.checks)
                failed += !c.pass;
            std::cout << res.report.checks.size() - failed << "/" << res.report.checks.size()
                      << " checks passed\n";
        }
        return 0;
    }
    catch (std::exception const& e)
    {
        std::cerr << error_json(command, e) << "\n";
        return 1;
    }
}
