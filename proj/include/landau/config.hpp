// SPDX-License-Identifier: Apache-2.0
//! \file config.hpp
//! Run configuration: YAML parsing with defaults, validation, canonical
//! serialization and hashing.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "engine.hpp"
#include "sde.hpp"
#include "stats.hpp"

namespace landau {

struct PotentialSection
{
    double R = 1;
    double A = 1;
    int p = 4;
    bool operator==(PotentialSection const&) const = default;
};

struct InitialSection
{
    std::string kind = "gaussian_ratio";  //!< one | gaussian_ratio
    std::vector<double> mean;  //!< gaussian_ratio only; empty means zero
    double scale = 0.5;
    bool operator==(InitialSection const&) const = default;
};

struct EngineSection
{
    std::string mode = "reservoir";
    double L = 8;
    double dt = 0;
    double v_ref = 4;
    double tau_max = 0.5;
    double horizon = 0;
    int sample_stride = 10;
    bool energy_trace = true;
    double act_margin = 4;
    double hysteresis = 2;
    double v_slack = 2;
    bool reservoir_wrap = false;
    bool exhaustive_check = false;
    std::uint64_t particle_cap = 1000000;
    bool diagnostics = false;
    int diag_stride = 10;
    int diag_order = 3;
    bool operator==(EngineSection const&) const = default;
};

struct CoeffsSection
{
    int knots = 64;
    double vmax = 8;
    std::vector<double> speeds = {0, 0.5, 1, 2, 4};
    double drift_tolerance = 1e-6;
    double divergence_tolerance = 1e-3;
    double fourier_tolerance = 1e-3;
    std::vector<double> windows = {4, 5.66, 8, 11.3, 16, 22.6, 32, 45.3, 64};
    int stationarity_nodes = 16;
    double stationarity_tolerance = 1e-4;
    double rate_speed = 1;         //!< |V| at which truncation rates are fitted
    double rate_tolerance = 0.4;
    bool operator==(CoeffsSection const&) const = default;
};

struct SdeSection
{
    double dtau = 1e-3;
    std::uint64_t paths = 10000;
    std::vector<double> tau_grid = {0.25, 0.5};
    int path_stride = 0;
    bool operator==(SdeSection const&) const = default;
};

struct DiagnosticsSection
{
    double delta = 0.3;
    double alpha = -1;  //!< negative selects alpha*
    double beta = -1;   //!< negative selects beta*
    double C_int = 10;
    double C_tm = 10;
    double C_avg = 10;
    double c_T = 12;
    double ks_level = 0.01;
    double se_multiple = 3;
    double within_fraction = 0.99;
    double violation_level = 0.01;
    bool operator==(DiagnosticsSection const&) const = default;
};

struct TwinSection
{
    int d = 3;
    std::uint64_t runs = 100;
    double L = 8;
    double horizon = 5;
    std::vector<double> N = {32, 64, 128};
    double slope = 2.0;
    double slope_tolerance = 0.3;
    double amplitude_factor = 2.0;
    double correction_factor = 10.0;
    double window_lo = 1.0;  //!< fit window start in units of median T_m
    double window_hi = 5.0;
    bool operator==(TwinSection const&) const = default;
};

struct BoundsSection
{
    int dim = 3;
    double N = 64;
    double a0 = 1;
    double b0 = 1.5;
    double C_avg = 1;
    int problems = 50;
    double dt = 1e-2;
    int pb_order = 24;
    double pb_dt = 2e-3;
    double stability_limit = 2.0;
    double cosh_tolerance = 1e-8;
    bool operator==(BoundsSection const&) const = default;
};

struct SweepSection
{
    std::vector<double> N = {32, 64, 128};
    std::uint64_t runs = 400;
    int sample_stride = 2;
    std::uint64_t stationarity_runs = 200;
    std::vector<double> residual_taus = {0.25, 0.5};
    std::vector<double> short_gaps = {0.025, 0.05, 0.1, 0.2};
    std::vector<double> large_gaps = {6, 8, 12, 16, 24};
    double short_slope = 2.0;
    double short_tolerance = 0.3;
    double large_slope = 1.0;
    double large_tolerance = 0.2;
    double p4_min_slope = 1.0;
    bool operator==(SweepSection const&) const = default;
};

//! Integrator check in full-torus mode
struct EnergySection
{
    int d = 3;
    double L = 8;
    double N = 40;
    double horizon = 20;
    std::uint64_t runs = 4;
    double max_drift = 1e-6;
    double ratio_lo = 3;
    double ratio_hi = 5;
    bool operator==(EnergySection const&) const = default;
};

//! Paired full-torus versus reservoir comparison
struct OracleSection
{
    int d = 3;
    double L = 8;
    double N = 40;
    double horizon = 20;
    std::uint64_t runs = 400;
    bool operator==(OracleSection const&) const = default;
};

struct RunConfig
{
    int d = 4;
    double N = 64;
    std::uint64_t seed = 1;
    std::uint64_t ensemble = 8;
    PotentialSection potential;
    InitialSection initial;
    EngineSection engine;
    CoeffsSection coeffs;
    SdeSection sde;
    DiagnosticsSection diagnostics;
    TwinSection twin;
    BoundsSection bounds;
    SweepSection sweep;
    EnergySection energy;
    OracleSection oracle;

    bool operator==(RunConfig const&) const = default;

    //! Throws ConfigError naming the offending field
    void validate() const;

    PotentialSpec potential_spec() const;
    InitialLaw initial_law() const;
    Mode mode() const;
    EngineConfig engine_config(double N_override = 0) const;
    SdeConfig sde_config(std::uint64_t seed_override) const;
    FluctuationThresholds thresholds() const;
    double alpha() const;
    double beta() const;
    BoundsConfig bounds_config() const;
};

struct ConfigError : std::invalid_argument
{
    std::string field;
    ConfigError(std::string f, std::string const& msg)
        : std::invalid_argument(f + ": " + msg)
        , field(std::move(f))
    {
    }
};

//! Parse a YAML document; missing keys take defaults, unknown keys fail
RunConfig parse_config(std::string const& text);
RunConfig load_config(std::string const& path);

//! Canonical YAML: fixed key order, shortest round-trip numbers
std::string serialize_config(RunConfig const& c);

//! Lower-case hex SHA-256 of the canonical serialization
std::string config_hash(RunConfig const& c);
std::string sha256_hex(std::string const& data);

}  // namespace landau
