// SPDX-License-Identifier: Apache-2.0
// Euler-Maruyama integration of the limiting diffusion.

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "landau/sde.hpp"
#include "landau/stats.hpp"

using namespace landau;

namespace {

CoefficientTable const& table3()
{
    static CoefficientTable const t = [] {
        PotentialSpec s;
        s.d = 3;
        return CoefficientTable(LandauCoefficients(s), 64, 8.0, true);
    }();
    return t;
}

SdeConfig base(std::size_t paths, double tau_max, double dtau)
{
    SdeConfig c;
    c.paths = paths;
    c.tau_max = tau_max;
    c.dtau = dtau;
    c.seed = 5;
    return c;
}

}  // namespace

TEST(EmStep, ZeroTableIsIdentity)
{
    CoefficientTable const z = CoefficientTable::zero(3);
    RngStream rng(1, 0);
    VectorXd V(3);
    V << 0.3, -1.2, 2.0;
    EXPECT_EQ(em_step(V, 0.01, z, rng), V);
}

TEST(EmStep, IncrementMeanAndCovariance)
{
    VectorXd V(3);
    V << 0.8, -0.4, 0.3;
    double const dt = 0.01;
    auto const c = table3().evaluate(V);
    RngStream rng(2, 0);
    int const n = 100000;
    VectorXd m = VectorXd::Zero(3);
    MatrixXd q = MatrixXd::Zero(3, 3);
    for (int i = 0; i < n; ++i)
    {
        VectorXd const dV = em_step(V, dt, table3(), rng) - V;
        m += dV;
        q += dV * dV.transpose();
    }
    m /= n;
    MatrixXd const cov = q / n - m * m.transpose();
    MatrixXd const target = 2 * dt * c.D;
    for (int a = 0; a < 3; ++a)
    {
        double const se = std::sqrt(target(a, a) / n);
        EXPECT_NEAR(m[a], 2 * dt * c.Lambda[a], 5 * se);
        for (int b = 0; b < 3; ++b)
        {
            double const se2 = std::sqrt((target(a, a) * target(b, b) + target(a, b) * target(a, b)) / n);
            EXPECT_NEAR(cov(a, b), target(a, b), 5 * se2);
        }
    }
}

TEST(Sde, GaussianIsStationary)
{
    SdeConfig c = base(4000, 1.0, 2e-3);
    c.tau_grid = {0.25, 0.5, 1.0};
    auto const e = run_sde_ensemble(c, table3());
    for (std::size_t k = 0; k < c.tau_grid.size(); ++k)
        for (int j = 0; j < 3; ++j)
        {
            auto const x = e.coordinate(k, j);
            EXPECT_GT(ks_normal(x).p_value, 1e-3) << "tau=" << c.tau_grid[k] << " c=" << j;
        }
}

TEST(Sde, ShiftedLawRelaxes)
{
    SdeConfig c = base(4000, 2.0, 5e-3);
    c.law = InitialLaw::gaussian_ratio({1.0, 0, 0}, 0.5);
    c.tau_grid = {0.0, 1.0, 2.0};
    auto const e = run_sde_ensemble(c, table3());
    double prev = 1e300;
    for (std::size_t k = 0; k < 3; ++k)
    {
        MomentAccumulator acc;
        for (double x : e.coordinate(k, 0))
            acc.add(x);
        EXPECT_LT(acc.mean(), prev - 3 * acc.std_error());
        prev = acc.mean();
    }
    EXPECT_GT(prev, 0.0);
}

TEST(Sde, SerialMatchesParallel)
{
    SdeConfig c = base(64, 0.2, 1e-2);
    c.path_stride = 5;
    auto const a = run_sde_ensemble(c, table3(), Exec::serial);
    auto const b = run_sde_ensemble(c, table3(), Exec::parallel);
    EXPECT_EQ(a.marginals, b.marginals);
    EXPECT_EQ(a.paths, b.paths);
    EXPECT_EQ(a.path_t, b.path_t);
    ASSERT_EQ(a.path_t.size(), 5u);
    EXPECT_EQ(a.paths[0].size(), 5u * 3);
}

TEST(Sde, ValidationNamesField)
{
    auto field = [](SdeConfig const& c) {
        try
        {
            c.validate();
        }
        catch (std::invalid_argument const& e)
        {
            std::string const m = e.what();
            return m.substr(0, m.find(':'));
        }
        return std::string();
    };
    SdeConfig c = base(10, 0.5, 1e-3);
    EXPECT_EQ(field(c), "");
    c.dtau = -1;
    EXPECT_EQ(field(c), "sde.dtau");
    c = base(0, 0.5, 1e-3);
    EXPECT_EQ(field(c), "sde.paths");
    c = base(10, 0.5, 1e-3);
    c.tau_grid = {0.7};
    EXPECT_EQ(field(c), "sde.tau_grid");
}

TEST(Sde, MartingaleResidualVanishes)
{
    SdeConfig c = base(4000, 0.5, 5e-3);
    c.law = InitialLaw::gaussian_ratio({0.6, 0, 0}, 0.7);
    c.path_stride = 2;
    auto const e = run_sde_ensemble(c, table3());
    std::vector<PathView> views;
    for (auto const& p : e.paths)
        views.push_back({e.path_t, p, 3});
    TestFunctionBundle b = TestFunctionBundle::coordinate(3, 0);
    b.g.push_back([](VectorXd const& v) { return std::exp(-0.5 * v.squaredNorm()); });
    Estimate const r = martingale_residual(views, b, {0.25, 0.5}, 1.0, table3());
    EXPECT_GT(r.std_error, 0.0);
    EXPECT_LE(std::abs(r.value), 4 * r.std_error);
}
