// SPDX-License-Identifier: Apache-2.0
//! \file experiments.hpp
//! Validation studies shared by the command-line tool and the acceptance
//! suite. Each study returns its raw tables and threshold checks.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "coefficients.hpp"
#include "config.hpp"
#include "engine.hpp"
#include "sde.hpp"
#include "stats.hpp"

namespace landau {

struct TruncationRow
{
    double t = 0;
    double dD = 0;       //!< |D_t - D| (Frobenius)
    double dLambda = 0;  //!< |Lambda_t - Lambda|
};

struct CoeffsStudy
{
    int d = 0;
    double d0 = 0;  //!< D(0) = d0 I
    std::vector<RadialCoefficients> knots;
    IdentityReport identities;
    std::vector<TruncationRow> truncation;
    LineFit slope_D;
    LineFit slope_Lambda;
    std::vector<StationarityTerm> stationarity;
    std::vector<CheckResult> checks;
};

//! Identity grid {s e1 : s in speeds} plus (e1 + e2) / sqrt 2
std::vector<VectorXd> identity_grid(int d, std::vector<double> const& speeds);

CoeffsStudy coeffs_study(RunConfig const& c, Exec exec = Exec::parallel);

struct EnergyStudy
{
    double dt = 0;
    std::vector<double> drift;       //!< max relative drift per run at dt
    std::vector<double> drift_half;  //!< same at dt / 2
    double max_drift = 0;
    double max_drift_half = 0;
    double ratio = 0;
    std::vector<CheckResult> checks;
};

EnergyStudy energy_study(RunConfig const& c, std::uint64_t seed,
                         Exec exec = Exec::parallel);

struct OracleStudy
{
    std::vector<double> dV_full;       //!< runs x d
    std::vector<double> dV_reservoir;  //!< runs x d
    std::vector<TestResult> ks;        //!< per coordinate
    RecollisionRow full;
    RecollisionRow reservoir;
    std::vector<CheckResult> checks;
};

//! Paired-seed full-torus versus wrapped reservoir runs on the same torus
OracleStudy oracle_study(RunConfig const& c, std::uint64_t seed,
                         Exec exec = Exec::parallel);

struct SweepRow
{
    double N = 0;
    std::size_t runs = 0;
    double T = 0;
    std::vector<double> V_final;  //!< runs x d at tau_max N
    std::vector<TestResult> ks;   //!< per coordinate against the SDE
    std::vector<double> w1;       //!< per coordinate Wasserstein-1
    Estimate residual;
    IncrementMoments p2;
    IncrementMoments p4;
    LineFit p2_short;
    LineFit p2_large;
    LineFit p4_large;
    RecollisionRow recollisions;
    FluctuationReport fluctuations;
    std::uint64_t max_tracked = 0;
    std::uint64_t missed_reentries = 0;
};

struct StationarityTest
{
    double t = 0;
    int coordinate = 0;
    TestResult result;
};

struct SweepStudy
{
    int d = 0;
    double tau = 0;
    std::vector<SweepRow> rows;
    SdeEnsemble sde;
    std::vector<StationarityTest> stationarity;
    std::vector<CheckResult> checks;
};

/*!
 * Reservoir ensembles at each N, the SDE reference at tau_max, and the
 * statistical checks: distribution comparison, martingale residual,
 * increment exponents, interaction durations, recollisions and the
 * fluctuation diagnostics. With a single N the trend checks are omitted.
 */
SweepStudy sweep_study(RunConfig const& c, std::uint64_t seed,
                       std::vector<double> const& Ns, Exec exec = Exec::parallel);

struct TwinRow
{
    double N = 0;
    std::size_t found = 0;
    std::vector<double> lag;         //!< common lag grid
    std::vector<double> median_sup;  //!< median over runs of N sup |X - Xbar|
    std::vector<double> T_m;         //!< per run 1 / |v - V| at entry
    std::vector<double> ratio;       //!< per run |X - Xbar| / corrected, at 5 T_m
    double amplitude = 0;            //!< geometric mean of median_sup / lag^slope
    double median_ratio = 0;
};

struct TwinStudy
{
    std::vector<TwinRow> rows;
    double T_m = 0;  //!< pooled median
    double window_lo = 0;
    double window_hi = 0;
    LineFit slope;  //!< pooled log-log fit of median N sup |X - Xbar| vs lag
    double amplitude_spread = 0;  //!< max / min amplitude over N
    double pooled_ratio = 0;      //!< median over all runs
    std::vector<CheckResult> checks;
};

TwinStudy twin_study(RunConfig const& c, std::uint64_t seed,
                     Exec exec = Exec::parallel);

struct BoundsStudy
{
    BoundsReport report;
    std::vector<CheckResult> checks;
};

BoundsStudy bounds_study(RunConfig const& c, std::uint64_t seed,
                         Exec exec = Exec::parallel);

double median(std::vector<double> v);

}  // namespace landau
