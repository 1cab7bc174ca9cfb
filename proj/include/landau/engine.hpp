// SPDX-License-Identifier: Apache-2.0
//! \file engine.hpp
//! Trajectory driver in exact finite-torus and streaming reservoir modes,
//! interaction event log, twin trajectories and ensemble execution.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "ensemble.hpp"
#include "parallel.hpp"

namespace landau {

enum class Mode
{
    full_torus,
    reservoir,
};

char const* to_string(Mode m);
Mode mode_from_string(std::string const& s);

struct EngineConfig
{
    PotentialSpec potential;
    InitialLaw law = InitialLaw::one(3);
    double N = 64;
    double L = 8;         //!< torus side; in reservoir mode wraps only if wrap
    double dt = 0;        //!< 0 selects R / (20 v_ref)
    double v_ref = 4;
    double tau_max = 0.5;  //!< horizon T = tau_max N unless horizon > 0
    double horizon = 0;
    int sample_stride = 10;
    bool energy_trace = true;

    // reservoir geometry in units of dt v_ref
    double act_margin = 4;
    double hysteresis = 2;
    double v_slack = 2;
    bool reservoir_wrap = false;
    bool exhaustive_check = false;
    std::size_t particle_cap = 1000000;

    // good-set diagnostics
    bool diagnostics = false;
    int diag_stride = 10;
    int diag_order = 3;

    double dt_eff() const;
    double T() const;
    double R_act() const;
    double R_out() const;
    //! Throws std::invalid_argument naming the offending field
    void validate(Mode mode) const;
};

enum class EventKind : std::uint8_t
{
    first_interaction,
    recollision,
};

struct InteractionEvent
{
    std::uint64_t id = 0;
    double entry = 0;
    double exit = kNoTime;  //!< NaN while inside at the horizon
    double speed = 0;       //!< |v - V| at entry
    EventKind kind = EventKind::first_interaction;
    bool inside_at_start = false;

    bool censored() const { return inside_at_start || std::isnan(exit); }
    double duration() const { return exit - entry; }
};

struct TrajectoryRecord
{
    Mode mode = Mode::full_torus;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    int d = 0;
    double N = 0;
    double dt = 0;

    std::vector<double> t;
    std::vector<double> V;  //!< samples x d
    std::vector<double> X;  //!< unwrapped tagged position, samples x d
    std::vector<double> energy;  //!< H(t) - H(0)
    double energy0 = 0;          //!< H(0)
    std::vector<InteractionEvent> events;

    // diagnostics (diag stride)
    std::vector<double> diag_t;
    std::vector<double> cum;         //!< int_0^t S_I, diag samples x nI
    std::vector<double> sup_S;       //!< sup_t |S_I| per multi-index
    std::vector<double> sup_tm;      //!< sup_t sum (T_m ^ N^{1/3})^k, k=1..6
    std::uint64_t sup_inside = 0;    //!< sup_t number inside B(X, R)
    std::uint64_t cutoff_violations = 0;

    // bookkeeping
    std::uint64_t initial_count = 0;
    std::uint64_t injected = 0;
    std::uint64_t max_active = 0;
    std::uint64_t max_tracked = 0;
    std::uint64_t missed_reentries = 0;
    std::uint64_t promotions = 0;
    double promotion_excess = 0;  //!< max (dist - R_act) / ((|v| + v_bound) dt)

    std::size_t samples() const { return t.size(); }
};

//! Earliest time a dormant particle can reach B(X, R_act)
double schedule_reentry(double dist, double R_act, double speed,
                        double v_bound, double t);

/*!
 * Integrate one trajectory to the horizon. The stream seed is
 * (seed, index): initial data use the initial substream and injections
 * the dynamics substream.
 */
TrajectoryRecord run_trajectory(EngineConfig const& cfg, Mode mode,
                                std::uint64_t seed, std::uint64_t index,
                                std::string const& config_hash = {});

//! Independent trajectories 0..count-1; parallel or serial reference
std::vector<TrajectoryRecord> run_ensemble(EngineConfig const& cfg, Mode mode,
                                           std::uint64_t seed,
                                           std::size_t count,
                                           Exec exec = Exec::parallel,
                                           std::string const& config_hash = {});

struct ClassifiedEvent
{
    InteractionEvent event;
    double T_m = 0;
    double ratio = 0;  //!< duration / T_m (NaN when censored)
    bool within_bound = true;
};

struct EventSummary
{
    std::uint64_t interactions = 0;  //!< distinct particles that interacted
    std::uint64_t events = 0;
    std::uint64_t recollisions = 0;
    std::uint64_t complete = 0;  //!< uncensored events
    std::uint64_t within_bound = 0;
    std::vector<double> ratio_edges;
    std::vector<std::uint64_t> ratio_hist;
};

//! Duration against T_m = 1/u with bound c_T T_m (c_T = 12 R by default)
std::vector<ClassifiedEvent> classify_events(TrajectoryRecord const& rec,
                                             double c_T,
                                             EventSummary* summary = nullptr);

enum class Selector
{
    first_entry,  //!< first particle entering B(X, R) after t = 0
    by_id,
};

struct TwinTrace
{
    std::uint64_t particle = 0;
    double sigma = kNoTime;  //!< entry time of the removed particle
    double speed = 0;        //!< |v - V| at entry
    std::vector<double> lag;
    std::vector<double> dX, dV;  //!< |X - Xbar|, |V - Vbar|
    std::vector<double> dV_corr;  //!< |V - Vbar + (1/N) int grad Phi(Xbar - xbar)|
    std::vector<double> dX_corr;  //!< position analogue
};

struct TwinResult
{
    TrajectoryRecord record;
    TrajectoryRecord record_bar;
    TwinTrace trace;
    bool found = false;
};

/*!
 * Coupled run and its barred copy. The copy branches off at the entry of
 * the selected particle, after which its coupling with the tagged particle
 * is removed. Requires full-torus mode.
 */
TwinResult twin_trajectory(EngineConfig const& cfg, std::uint64_t seed,
                           std::uint64_t index,
                           Selector selector = Selector::first_entry,
                           std::uint64_t particle_id = 0);

}  // namespace landau
