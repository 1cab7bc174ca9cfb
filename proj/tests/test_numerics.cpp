// SPDX-License-Identifier: Apache-2.0
// Random streams and quadrature rules.

#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "landau/quadrature.hpp"
#include "landau/rng.hpp"

using namespace landau;

TEST(Philox, KnownAnswerVectors)
{
    using C = Philox4x64::Counter;
    EXPECT_EQ(Philox4x64::block({0, 0, 0, 0}, {0, 0}),
              (C{0x16554d9eca36314cull, 0xdb20fe9d672d0fdcull, 0xd7e772cee186176bull,
                 0x7e68b68aec7ba23bull}));
    std::uint64_t const m = ~0ull;
    EXPECT_EQ(Philox4x64::block({m, m, m, m}, {m, m}),
              (C{0x87b092c3013fe90bull, 0x438c3c67be8d0224ull, 0x9cc7d7c69cd777b6ull,
                 0xa09caebf594f0ba0ull}));
    EXPECT_EQ(Philox4x64::block({0x243f6a8885a308d3ull, 0x13198a2e03707344ull,
                                 0xa4093822299f31d0ull, 0x082efa98ec4e6c89ull},
                                {0x452821e638d01377ull, 0xbe5466cf34e90c6cull}),
              (C{0xa528f45403e61d95ull, 0x38c72dbd566e9788ull, 0xa5a1610e72fd18b5ull,
                 0x57bd43b5e52b7fe6ull}));
}

TEST(Philox, DiscardMatchesStepping)
{
    Philox4x64 a({1, 2}, {0, 0, 0, 0});
    Philox4x64 b = a;
    for (int i = 0; i < 4 * 7; ++i)
        a();
    b.discard_blocks(7);
    for (int i = 0; i < 10; ++i)
        EXPECT_EQ(a(), b());
}

TEST(RngStream, ReproducibleAndIndexSeparated)
{
    RngStream a(42, 3), b(42, 3), c(42, 4), e(42, 3, Substream::sde);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i)
    {
        std::uint64_t const x = a.bits();
        EXPECT_EQ(x, b.bits());
        seen.insert(x);
        seen.insert(c.bits());
        seen.insert(e.bits());
    }
    EXPECT_EQ(seen.size(), 300u);
}

TEST(RngStream, NormalMoments)
{
    RngStream r(7, 0);
    int const n = 200000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i)
    {
        double const x = r.normal();
        s1 += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s1 / n, 0.0, 5 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 5 * std::sqrt(2.0 / n));
}

TEST(RngStream, PoissonMean)
{
    RngStream r(9, 1);
    double const mu = 12.5;
    int const n = 20000;
    double s = 0;
    for (int i = 0; i < n; ++i)
        s += static_cast<double>(r.poisson(mu));
    EXPECT_NEAR(s / n, mu, 5 * std::sqrt(mu / n));
    EXPECT_EQ(r.poisson(0.0), 0u);
}

TEST(Quadrature, GaussLegendreExactForPolynomials)
{
    QuadRule const q = gauss_legendre(8, -1, 2);
    for (int k = 0; k <= 15; ++k)
    {
        double const exact = (std::pow(2.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1);
        EXPECT_NEAR(integrate(q, [k](double x) { return std::pow(x, k); }), exact,
                    1e-12 * std::max(1.0, std::abs(exact)));
    }
}

TEST(Quadrature, CompositeRule)
{
    QuadRule const q = composite_gauss_legendre(6, 0, std::numbers::pi, 10);
    EXPECT_NEAR(integrate(q, [](double x) { return std::sin(x); }), 2.0, 1e-13);
}

TEST(Quadrature, GaussHermiteStandardNormalMoments)
{
    QuadRule const q = gauss_hermite(12);
    double const moments[] = {1, 0, 1, 0, 3, 0, 15, 0, 105};
    for (int k = 0; k <= 8; ++k)
        EXPECT_NEAR(integrate(q, [k](double x) { return std::pow(x, k); }), moments[k], 1e-11);
}

TEST(Quadrature, SphereAreasAndBallVolumes)
{
    double const pi = std::numbers::pi;
    EXPECT_NEAR(sphere_area(2), 2 * pi, 1e-14);
    EXPECT_NEAR(sphere_area(3), 4 * pi, 1e-13);
    EXPECT_NEAR(sphere_area(4), 2 * pi * pi, 1e-13);
    EXPECT_NEAR(ball_volume(3), 4 * pi / 3, 1e-13);
    EXPECT_NEAR(ball_volume(4), pi * pi / 2, 1e-13);
}

TEST(Quadrature, HypersphereRuleIntegratesMoments)
{
    for (int d : {2, 3, 4, 5})
    {
        SphereRule const s = hypersphere_rule(d, 32, 64);
        double w = 0, x1sq = 0, x1x2 = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            double const* p = s.point(i);
            w += s.w[i];
            x1sq += s.w[i] * p[0] * p[0];
            x1x2 += s.w[i] * p[0] * p[1];
        }
        EXPECT_NEAR(w, sphere_area(d), 1e-10);
        EXPECT_NEAR(x1sq, sphere_area(d) / d, 1e-8);
        EXPECT_NEAR(x1x2, 0.0, 1e-12);
    }
}
