// SPDX-License-Identifier: Apache-2.0
// Grand canonical sampling, initial laws and the boundary influx.

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "landau/ensemble.hpp"
#include "landau/quadrature.hpp"

using namespace landau;

namespace {

PotentialSpec spec(int d, double A = 1)
{
    PotentialSpec s;
    s.d = d;
    s.A = A;
    return s;
}

}  // namespace

TEST(InitialLaw, Normalized)
{
    EXPECT_NEAR(InitialLaw::one(4).normalization(), 1.0, 1e-10);
    auto const g = InitialLaw::gaussian_ratio({0.3, -0.2, 0.1, 0}, 0.5);
    EXPECT_NEAR(g.normalization(), 1.0, 1e-6);
    EXPECT_EQ(g.dim(), 4);
}

TEST(InitialLaw, GaussianRatioSamplesTargetGaussian)
{
    auto const g = InitialLaw::gaussian_ratio({0.5, 0, 0}, 0.6);
    RngStream rng(3, 0);
    int const n = 40000;
    double m = 0, q = 0;
    for (int i = 0; i < n; ++i)
    {
        double v[3];
        g.sample(rng, v);
        m += v[0];
        q += v[1] * v[1];
    }
    EXPECT_NEAR(m / n, 0.5, 5 * 0.6 / std::sqrt(n));
    EXPECT_NEAR(q / n, 0.36, 5 * 0.36 * std::sqrt(2.0 / n));
}

TEST(InitialLaw, RejectsScaleAboveOne)
{
    EXPECT_THROW(InitialLaw::gaussian_ratio({0, 0, 0}, 1.5), std::invalid_argument);
}

TEST(GrandCanonical, FreeGasCountAndUniformPositions)
{
    Potential const phi(spec(3, 0));
    auto const law = InitialLaw::one(3);
    double const L = 5, N = 1;
    double const mean = N * L * L * L;
    int const draws = 10000;
    RngStream rng(11, 0);
    double total = 0, xsum = 0, x2 = 0;
    std::size_t nx = 0;
    for (int i = 0; i < draws; ++i)
    {
        auto const c = sample_initial_configuration(phi, law, L, N, rng);
        total += static_cast<double>(c.count());
        for (double x : c.x)
        {
            ASSERT_GE(x, -L / 2);
            ASSERT_LT(x, L / 2);
            xsum += x;
            x2 += x * x;
            ++nx;
        }
    }
    double const sigma = 1 / std::sqrt(draws * mean);
    EXPECT_NEAR(total / (draws * mean), 1.0, 5 * sigma);
    EXPECT_NEAR(xsum / nx, 0.0, 5 * L / std::sqrt(12.0 * nx));
    EXPECT_NEAR(x2 / nx, L * L / 12, 5 * L * L / std::sqrt(180.0 * nx));
}

TEST(GrandCanonical, GibbsWeightedMeanCount)
{
    Potential const phi(spec(3));
    auto const law = InitialLaw::one(3);
    double const L = 5, N = 1;
    double const mean = N * L * L * L + gibbs_correction(phi, N);
    EXPECT_LT(gibbs_correction(phi, N), 0.0);
    int const draws = 10000;
    RngStream rng(12, 0);
    double total = 0;
    for (int i = 0; i < draws; ++i)
        total += static_cast<double>(sample_initial_configuration(phi, law, L, N, rng).count());
    EXPECT_NEAR(total / draws, mean, 5 * std::sqrt(mean / draws));
}

TEST(GrandCanonical, BackgroundVelocityCovariance)
{
    Potential const phi(spec(3));
    auto const law = InitialLaw::one(3);
    RngStream rng(13, 0);
    double c[3][3] = {};
    std::size_t n = 0;
    while (n < 100000)
    {
        auto const cfg = sample_initial_configuration(phi, law, 6, 2, rng);
        for (std::size_t i = 0; i < cfg.count(); ++i, ++n)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    c[a][b] += cfg.v[3 * i + a] * cfg.v[3 * i + b];
    }
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
        {
            double const se = (a == b ? std::sqrt(2.0) : 1.0) / std::sqrt(n);
            EXPECT_NEAR(c[a][b] / n, a == b ? 1.0 : 0.0, 5 * se);
        }
}

TEST(Influx, RateAtRest)
{
    for (int d : {2, 3, 4})
    {
        std::vector<double> V(d, 0.0);
        double const R = 1.3, N = 50;
        double const expected = N * sphere_area(d) * std::pow(R, d - 1) / std::sqrt(2 * std::numbers::pi);
        EXPECT_NEAR(influx_rate(V.data(), d, R, N), expected, 1e-12 * expected);
        EXPECT_NEAR(influx_rate(V.data(), d, R, 2 * N), 2 * expected, 2e-12 * expected);
    }
}

TEST(Influx, BallisticLimit)
{
    int const d = 3;
    double const R = 1, N = 1;
    double const cross = ball_volume(d - 1) * std::pow(R, d - 1);
    double prev = 1e300;
    for (double s : {8.0, 16.0, 32.0})
    {
        double const V[3] = {s, 0, 0};
        double const err = std::abs(influx_rate(V, d, R, N) / s / (N * cross) - 1);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-3);
}

TEST(Influx, FluxWeightedNormalComponentAtRest)
{
    int const d = 3;
    double const V[3] = {0, 0, 0};
    RngStream rng(21, 0);
    int const n = 100000;
    double sum = 0, sq = 0;
    double cz = 0;
    for (int i = 0; i < n; ++i)
    {
        double nn[3], v[3];
        sample_flux_pair(V, d, rng, nn, v);
        double const w = -(nn[0] * v[0] + nn[1] * v[1] + nn[2] * v[2]);
        ASSERT_GT(w, 0.0);
        sum += w;
        sq += w * w;
        cz += nn[2];
    }
    // density w e^{-w^2/2}: mean sqrt(pi/2), second moment 2
    double const mean = std::sqrt(std::numbers::pi / 2);
    EXPECT_NEAR(sum / n, mean, 5 * std::sqrt((2 - mean * mean) / n));
    EXPECT_NEAR(sq / n, 2.0, 5 * std::sqrt(4.0 / n));
    EXPECT_NEAR(cz / n, 0.0, 5 / std::sqrt(3.0 * n));
}

TEST(Influx, CountLinearInDt)
{
    int const d = 3;
    double const X[3] = {0, 0, 0}, V[3] = {0.5, 0, 0};
    double const R = 1.2, N = 40;
    double const rate = influx_rate(V, d, R, N);
    for (double dt : {0.01, 0.005})
    {
        RngStream rng(5, static_cast<std::uint64_t>(dt * 1e4));
        std::vector<Injected> out;
        double total = 0;
        int const steps = 4000;
        for (int i = 0; i < steps; ++i)
        {
            sample_influx(X, V, d, R, dt, N, rng, out);
            total += static_cast<double>(out.size());
            for (auto const& p : out)
            {
                double r = 0, u = 0;
                for (int k = 0; k < d; ++k)
                {
                    r += p.x[k] * p.x[k];
                    u += (p.v[k] - V[k]) * (p.v[k] - V[k]);
                }
                EXPECT_LE(std::sqrt(r), R + dt * std::sqrt(u));
            }
        }
        double const mean = rate * dt * steps;
        EXPECT_NEAR(total, mean, 5 * std::sqrt(mean));
    }
}
