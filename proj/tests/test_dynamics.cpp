// SPDX-License-Identifier: Apache-2.0
// Torus geometry, forces, the Verlet integrator and the Hamiltonian.

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "landau/dynamics.hpp"
#include "landau/ensemble.hpp"

using namespace landau;

namespace {

PotentialSpec spec(int d, double A = 1)
{
    PotentialSpec s;
    s.d = d;
    s.A = A;
    return s;
}

SystemState random_state(int d, double L, double N, std::uint64_t seed, double A = 1,
                         bool cells = true)
{
    Potential const phi(spec(d, A));
    RngStream rng(seed, 0);
    auto const c = sample_initial_configuration(phi, InitialLaw::one(d), L, N, rng);
    return make_state(d, L, N, c.X.data(), c.V.data(), c.x, c.v, phi.range(), cells);
}

double max_abs_diff(std::vector<double> const& a, std::vector<double> const& b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(MinimalImage, Examples)
{
    double const a[1] = {4.9}, b[1] = {-4.9};
    double out[1];
    minimal_image(a, b, 10, 1, out);
    EXPECT_NEAR(out[0], -0.2, 1e-12);
    minimal_image(a, a, 10, 1, out);
    EXPECT_EQ(out[0], 0.0);
}

TEST(MinimalImage, BoxBound)
{
    RngStream rng(1, 0);
    double const L = 7;
    for (int i = 0; i < 1000; ++i)
    {
        double a[3], b[3], o[3];
        for (int k = 0; k < 3; ++k)
        {
            a[k] = 20 * (rng.uniform() - 0.5);
            b[k] = 20 * (rng.uniform() - 0.5);
        }
        minimal_image(a, b, L, 3, o);
        double n = 0;
        for (int k = 0; k < 3; ++k)
        {
            EXPECT_GE(o[k], -L / 2);
            EXPECT_LT(o[k], L / 2);
            n += o[k] * o[k];
        }
        EXPECT_LE(std::sqrt(n), std::sqrt(3.0) / 2 * L);
    }
}

TEST(Forces, SingleParticleAtHalfRange)
{
    Potential const phi(spec(3));
    double const N = 16;
    double const X[3] = {0, 0, 0}, V[3] = {0, 0, 0};
    double const xhat[3] = {0.6, 0.0, 0.8};
    std::vector<double> x = {-0.5 * xhat[0], -0.5 * xhat[1], -0.5 * xhat[2]};
    std::vector<double> v = {0, 0, 0};
    SystemState s = make_state(3, 8, N, X, V, x, v, phi.range(), true);
    compute_forces(s, phi);
    double const y[3] = {0.5 * xhat[0], 0.5 * xhat[1], 0.5 * xhat[2]};
    double g[3];
    phi.gradient(y, g);
    ASSERT_EQ(s.near.size(), 1u);
    for (int k = 0; k < 3; ++k)
    {
        EXPECT_NEAR(s.F[k], -g[k] / N, 1e-15);
        EXPECT_EQ(s.f[k], -s.F[k]);
    }
    EXPECT_NEAR(hamiltonian(s, phi), phi.value(y) / N, 1e-15);
}

TEST(Forces, NothingInRange)
{
    Potential const phi(spec(3));
    double const X[3] = {0, 0, 0}, V[3] = {1, 0, 0};
    std::vector<double> x = {1.5, 0, 0, 0, -2, 1}, v(6, 0.0);
    SystemState s = make_state(3, 8, 10, X, V, x, v, phi.range(), false);
    compute_forces(s, phi);
    EXPECT_TRUE(s.near.empty());
    EXPECT_EQ(s.F, std::vector<double>(3, 0.0));
}

TEST(Forces, ActionReactionAndCellsMatchBruteForce)
{
    Potential const phi(spec(3));
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        SystemState s = random_state(3, 6, 20, seed);
        SystemState b = s;
        compute_forces(s, phi);
        compute_forces_bruteforce(b, phi);
        EXPECT_LE(max_abs_diff(s.F, b.F), 1e-14);
        auto ns = s.near, nb = b.near;
        std::sort(ns.begin(), ns.end());
        std::sort(nb.begin(), nb.end());
        EXPECT_EQ(ns, nb);
        for (int k = 0; k < 3; ++k)
        {
            double tot = s.F[k];
            for (std::size_t j = 0; j < s.near.size(); ++j)
                tot += s.f[3 * j + k];
            EXPECT_NEAR(tot, 0.0, 1e-16 * (1 + s.near.size()));
        }
    }
}

TEST(Hamiltonian, EmptyBackground)
{
    Potential const phi(spec(3));
    double const X[3] = {0, 0, 0}, V[3] = {1, 2, -0.5};
    SystemState s = make_state(3, 8, 10, X, V, {}, {}, 1, false);
    EXPECT_DOUBLE_EQ(hamiltonian(s, phi), 0.5 * (1 + 4 + 0.25));
}

TEST(Verlet, FreeFlowIsStraight)
{
    Potential const phi(spec(3, 0));
    SystemState s = random_state(3, 6, 5, 3, 0);
    std::vector<double> const V0 = s.V, X0 = s.Xu;
    compute_forces(s, phi);
    double const dt = 0.01;
    for (int i = 0; i < 100; ++i)
        verlet_step(s, phi, dt);
    EXPECT_EQ(s.V, V0);
    for (int k = 0; k < 3; ++k)
        EXPECT_NEAR(s.Xu[k], X0[k] + 1.0 * V0[k], 1e-12);
}

TEST(Verlet, TimeReversible)
{
    Potential const phi(spec(3));
    SystemState s = random_state(3, 6, 4, 5);
    compute_forces(s, phi);
    SystemState const s0 = s;
    double const dt = 0.01;
    verlet_step(s, phi, dt);
    verlet_step(s, phi, -dt);
    EXPECT_LE(max_abs_diff(s.V, s0.V), 1e-12);
    EXPECT_LE(max_abs_diff(s.X, s0.X), 1e-12 * 6);
    EXPECT_LE(max_abs_diff(s.p.v, s0.p.v), 1e-12);
}

TEST(Verlet, EnergyDriftSecondOrder)
{
    Potential const phi(spec(3));
    // a dense small system so the potential energy is not negligible
    auto drift = [&](double dt, int steps) {
        SystemState s = random_state(3, 5, 1, 8);
        compute_forces(s, phi);
        double const H0 = hamiltonian(s, phi);
        double m = 0;
        for (int i = 0; i < steps; ++i)
        {
            verlet_step(s, phi, dt);
            m = std::max(m, std::abs(hamiltonian(s, phi) - H0));
        }
        return m;
    };
    double const a = drift(0.02, 5000);
    double const b = drift(0.01, 10000);
    EXPECT_GT(a, 0.0);
    EXPECT_GE(a / b, 3.0);
    EXPECT_LE(a / b, 5.0);
}

TEST(Verlet, MomentumConserved)
{
    Potential const phi(spec(3));
    SystemState s = random_state(3, 6, 2, 9);
    compute_forces(s, phi);
    auto const P0 = total_momentum(s);
    for (int i = 0; i < 500; ++i)
        verlet_step(s, phi, 0.01);
    auto const P1 = total_momentum(s);
    for (int k = 0; k < 3; ++k)
        EXPECT_NEAR(P1[k], P0[k], 1e-11);
}

TEST(Dormant, BallisticPosition)
{
    Potential const phi(spec(3));
    SystemState s = random_state(3, 6, 2, 10);
    ASSERT_GT(s.p.active().size(), 0u);
    std::uint32_t const i = s.p.active().front();
    std::vector<double> const x0(s.p.xp(i), s.p.xp(i) + 3), v0(s.p.vp(i), s.p.vp(i) + 3);
    make_dormant(s, i);
    double out[3];
    dormant_position(s, i, s.t + 0.75, out);
    double expect[3];
    for (int k = 0; k < 3; ++k)
        expect[k] = x0[k] + 0.75 * v0[k];
    wrap_position(expect, s.L, 3);
    for (int k = 0; k < 3; ++k)
        EXPECT_NEAR(out[k], expect[k], 1e-12);
}

TEST(MultiIndices, CountsAndOrder)
{
    auto const idx = multi_indices(3, 3);
    EXPECT_EQ(idx.size(), 3u + 6u + 10u);
    for (auto const& m : idx)
        EXPECT_TRUE(std::is_sorted(m.begin(), m.end()));
}

TEST(DerivativeSums, FirstOrderIsMinusNTimesForce)
{
    Potential const phi(spec(3));
    SystemState s = random_state(3, 6, 10, 11);
    compute_forces(s, phi);
    auto const idx = multi_indices(3, 1);
    std::vector<double> S(idx.size());
    derivative_sums(s, phi, idx, S.data());
    for (int k = 0; k < 3; ++k)
        EXPECT_NEAR(S[k], -s.N * s.F[k], 1e-12);
}

TEST(CompensatedSum, RecoversCancellation)
{
    CompensatedSum c;
    c.add(1e16);
    c.add(1.0);
    c.add(-1e16);
    EXPECT_EQ(c.value(), 1.0);
}
