// SPDX-License-Identifier: Apache-2.0
// Trajectory engine: both background modes, event log and twin runs.

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "landau/engine.hpp"

using namespace landau;

namespace {

EngineConfig small(int d, double N, double horizon, double A = 1)
{
    EngineConfig e;
    e.potential.d = d;
    e.potential.A = A;
    e.law = InitialLaw::one(d);
    e.N = N;
    e.L = 8;
    e.horizon = horizon;
    return e;
}

}  // namespace

TEST(Engine, ScheduleReentryArithmetic)
{
    double const R_act = 1.7;
    EXPECT_DOUBLE_EQ(schedule_reentry(10 * R_act, R_act, 1, 1, 3.0), 3.0 + 9 * R_act / 2);
}

TEST(Engine, FreeFlowKeepsVelocity)
{
    for (Mode m : {Mode::full_torus, Mode::reservoir})
    {
        EngineConfig const e = small(3, 16, 5, 0);
        auto const r = run_trajectory(e, m, 3, 0);
        ASSERT_GT(r.samples(), 1u);
        for (std::size_t i = 1; i < r.samples(); ++i)
            for (int k = 0; k < 3; ++k)
                EXPECT_EQ(r.V[i * 3 + k], r.V[k]);
        EventSummary sum;
        auto const ev = classify_events(r, 12, &sum);
        // on the torus, periodic images return; without wrap nothing comes back
        if (m == Mode::reservoir)
            EXPECT_EQ(sum.recollisions, 0u);
        for (auto const& c : ev)
            if (!c.event.censored())
                EXPECT_LE(c.event.duration(), 2 * e.potential.R / c.event.speed + 2 * e.dt_eff());
    }
}

TEST(Engine, FullTorusEnergyDrift)
{
    EngineConfig e = small(3, 40, 4);
    e.sample_stride = 1;
    auto const r = run_trajectory(e, Mode::full_torus, 1, 0);
    double m = 0;
    for (double x : r.energy)
        m = std::max(m, std::abs(x));
    EXPECT_LE(m / std::abs(r.energy0), 1e-6);
}

TEST(Engine, HorizonAndSampling)
{
    EngineConfig e = small(3, 16, 0);
    e.tau_max = 0.25;
    e.sample_stride = 4;
    auto const r = run_trajectory(e, Mode::reservoir, 2, 0);
    EXPECT_DOUBLE_EQ(e.T(), 4.0);
    EXPECT_NEAR(r.t.back(), e.T(), 1e-9);
    EXPECT_NEAR(r.t[1] - r.t[0], 4 * e.dt_eff(), 1e-12);
    EXPECT_DOUBLE_EQ(e.dt_eff(), e.potential.R / (20 * e.v_ref));
}

TEST(Engine, NoMissedReentriesAgainstExhaustiveScan)
{
    EngineConfig e = small(3, 16, 3);
    e.exhaustive_check = true;
    std::uint64_t missed = 0;
    for (std::uint64_t i = 0; i < 50; ++i)
        missed += run_trajectory(e, Mode::reservoir, 17, i).missed_reentries;
    EXPECT_EQ(missed, 0u);
}

TEST(Engine, PromotionWithinBound)
{
    EngineConfig const e = small(3, 32, 4);
    for (std::uint64_t i = 0; i < 10; ++i)
        EXPECT_LE(run_trajectory(e, Mode::reservoir, 4, i).promotion_excess, 1.0 + 1e-9);
}

TEST(Engine, SerialAndParallelEnsemblesAgree)
{
    EngineConfig const e = small(3, 16, 3);
    for (Mode m : {Mode::full_torus, Mode::reservoir})
    {
        auto const a = run_ensemble(e, m, 5, 6, Exec::serial);
        auto const b = run_ensemble(e, m, 5, 6, Exec::parallel);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            EXPECT_EQ(a[i].V, b[i].V);
            EXPECT_EQ(a[i].X, b[i].X);
            EXPECT_EQ(a[i].events.size(), b[i].events.size());
        }
    }
}

TEST(Engine, RejectsSmallTorus)
{
    EngineConfig e = small(3, 16, 3);
    e.L = 3.5;
    EXPECT_THROW(e.validate(Mode::full_torus), std::invalid_argument);
    EXPECT_NO_THROW(e.validate(Mode::reservoir));
}

TEST(Twin, FreeFlowHasNoDifference)
{
    EngineConfig const e = small(3, 32, 3, 0);
    auto const t = twin_trajectory(e, 9, 0);
    for (double x : t.trace.dX)
        EXPECT_EQ(x, 0.0);
    for (double x : t.trace.dV)
        EXPECT_EQ(x, 0.0);
}

TEST(Twin, DifferenceIsSmallAndGrows)
{
    EngineConfig const e = small(3, 32, 3);
    auto const t = twin_trajectory(e, 9, 1);
    ASSERT_TRUE(t.found);
    ASSERT_GT(t.trace.lag.size(), 2u);
    EXPECT_GE(t.trace.lag.front(), 0.0);
    double const last = t.trace.dX.back();
    EXPECT_GT(last, 0.0);
    EXPECT_LT(last, 1.0);
}
