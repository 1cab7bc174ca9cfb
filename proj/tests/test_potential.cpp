// SPDX-License-Identifier: Apache-2.0
// Bump potential, its derivatives and its Fourier transform.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "landau/potential.hpp"
#include "landau/rng.hpp"

using namespace landau;

namespace {

PotentialSpec spec(int d, int p = 4)
{
    PotentialSpec s;
    s.d = d;
    s.p = p;
    return s;
}

//! Closed-form transform of A (1 - |x|^2/R^2)^p in d dimensions
double phi_hat_closed(PotentialSpec const& s, double k)
{
    double const nu = s.d / 2.0 + s.p;
    double const kr = k * s.R;
    return s.A * std::pow(2 * std::numbers::pi, s.d / 2.0) * std::pow(2.0, s.p)
           * std::tgamma(s.p + 1.0) * std::pow(s.R, s.d) * std::cyl_bessel_j(nu, kr)
           / std::pow(kr, nu);
}

}  // namespace

TEST(Potential, CenterValueAndSupport)
{
    Potential const phi(spec(3));
    double const zero[3] = {0, 0, 0};
    EXPECT_DOUBLE_EQ(phi.value(zero), 1.0);
    RngStream rng(1, 0);
    for (int i = 0; i < 200; ++i)
    {
        double x[3] = {rng.normal(), rng.normal(), rng.normal()};
        double const n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        double const r = 1 + rng.uniform();
        for (double& c : x)
            c *= r / n;
        EXPECT_EQ(phi.value(x), 0.0);
        double g[3];
        EXPECT_FALSE(phi.gradient(x, g));
        EXPECT_EQ(g[0], 0.0);
    }
}

TEST(Potential, Evenness)
{
    Potential const phi(spec(4));
    RngStream rng(2, 0);
    for (int i = 0; i < 50; ++i)
    {
        double x[4], mx[4];
        for (int k = 0; k < 4; ++k)
        {
            x[k] = 0.4 * rng.normal();
            mx[k] = -x[k];
        }
        EXPECT_DOUBLE_EQ(phi.value(x), phi.value(mx));
    }
}

TEST(Potential, RadialDerivativeAtHalf)
{
    Potential const phi(spec(3));
    EXPECT_NEAR(phi.radial_derivative(0.5), -1.6875, 1e-15);
    double const h = 1e-5;
    EXPECT_NEAR((phi.radial(0.5 + h) - phi.radial(0.5 - h)) / (2 * h), -1.6875, 1e-8);
}

TEST(Potential, GradientAndHessianMatchFiniteDifferences)
{
    Potential const phi(spec(3));
    double x[3] = {0.3, -0.2, 0.45};
    double g[3], H[9];
    ASSERT_TRUE(phi.gradient(x, g));
    phi.hessian(x, H);
    double const h = 1e-6;
    for (int i = 0; i < 3; ++i)
    {
        double xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]};
        xp[i] += h;
        xm[i] -= h;
        EXPECT_NEAR((phi.value(xp) - phi.value(xm)) / (2 * h), g[i], 1e-8);
        double gp[3], gm[3];
        phi.gradient(xp, gp);
        phi.gradient(xm, gm);
        for (int j = 0; j < 3; ++j)
            EXPECT_NEAR((gp[j] - gm[j]) / (2 * h), H[3 * j + i], 1e-7);
    }
}

TEST(Potential, ThirdDerivativesContinuousAcrossSupport)
{
    Potential const phi(spec(3));
    std::vector<int> const axes = {0, 0, 1};
    for (double eps : {1e-3, 1e-4})
    {
        double in[3] = {(1 - eps) / std::sqrt(2.0), (1 - eps) / std::sqrt(2.0), 0};
        double out[3] = {(1 + eps) / std::sqrt(2.0), (1 + eps) / std::sqrt(2.0), 0};
        EXPECT_NEAR(phi.derivative_axes(axes, in), phi.derivative_axes(axes, out), 200 * eps);
    }
}

TEST(Potential, MultiIndexMatchesAxesForm)
{
    Potential const phi(spec(3, 5));
    double x[3] = {0.2, 0.1, -0.3};
    std::vector<int> const orders = {2, 1, 1};
    std::vector<int> const axes = {0, 0, 1, 2};
    EXPECT_DOUBLE_EQ(phi.evaluate(orders, x), phi.derivative_axes(axes, x));
    Potential const p4(spec(3, 4));
    EXPECT_THROW(p4.evaluate(orders, x), std::invalid_argument);
}

TEST(Potential, SpecValidation)
{
    PotentialSpec s = spec(3);
    s.R = -1;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = spec(3, 3);
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Fourier, ValueAtZeroInFourDimensions)
{
    // pi^2 / 30 = (1/2) B(2, 5) 2 pi^2
    EXPECT_NEAR(fourier_radial(spec(4), 0.0), std::numbers::pi * std::numbers::pi / 30, 1e-12);
}

TEST(Fourier, ValueAtZeroIsTheIntegral)
{
    for (int d : {2, 3, 5})
        EXPECT_NEAR(fourier_radial(spec(d), 0.0), potential_integral(spec(d)), 1e-12);
}

TEST(Fourier, MatchesBesselClosedForm)
{
    for (int d : {3, 4})
        for (double k : {0.5, 3.0, 11.0, 27.0, 60.0})
        {
            double const ref = phi_hat_closed(spec(d), k);
            EXPECT_NEAR(fourier_radial(spec(d), k), ref, 1e-9 * std::abs(phi_hat_closed(spec(d), 0.5)))
                << "d=" << d << " k=" << k;
        }
}

TEST(Fourier, EnvelopeDecays)
{
    auto const s = spec(4);
    double prev = 1e300;
    for (double k0 : {20.0, 40.0, 80.0})
    {
        double env = 0;
        for (int i = 0; i < 64; ++i)
            env = std::max(env, std::abs(fourier_radial(s, k0 + 0.1 * i)));
        EXPECT_LT(env, prev);
        prev = env;
    }
    EXPECT_LT(prev, 1e-6);
}
