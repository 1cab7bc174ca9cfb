// SPDX-License-Identifier: Apache-2.0
//! \file cli.hpp
//! Subcommand dispatch: runs one study and writes its artifacts.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "stats.hpp"

namespace landau {

struct DispatchOptions
{
    std::string command;  //!< simulate | coeffs | sde | validate | twin | bounds | sweep
    RunConfig config;
    std::optional<std::uint64_t> seed;  //!< overrides config.seed
    std::optional<std::string> mode;    //!< overrides engine.mode
    std::filesystem::path out = ".";
    int threads = 0;  //!< 0 keeps the OpenMP default
};

struct DispatchResult
{
    std::filesystem::path dir;  //!< out / command
    std::vector<std::filesystem::path> files;
    DiagnosticsReport report;
};

std::vector<std::string> const& subcommands();

/*!
 * Applies the overrides, validates, runs the subcommand and writes its
 * CSV tables, the JSON report and the config echo into out / command.
 * Throws ConfigError or std::exception on failure.
 */
DispatchResult dispatch(DispatchOptions const& opt);

//! Machine-readable error document for a failed dispatch
std::string error_json(std::string const& command, std::exception const& e);

//! Canonical configuration as a JSON document
std::string config_json(RunConfig const& c);

}  // namespace landau
