// SPDX-License-Identifier: Apache-2.0
// Statistics against exhaustive enumeration (tests/oracles/ks_small_samples.py)
// and scipy/statsmodels values (tests/oracles/stats_reference.py).

#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "landau/engine.hpp"
#include "landau/rng.hpp"
#include "landau/stats.hpp"

using namespace landau;

TEST(ExactSum, OrderIndependent)
{
    std::vector<double> x = {1e16, 1.0, -1e16, 3.5, 1e-9, -2.25};
    ExactSum a, b, c;
    for (double v : x)
        a.add(v);
    for (auto it = x.rbegin(); it != x.rend(); ++it)
        b.add(*it);
    ExactSum h1, h2;
    for (std::size_t i = 0; i < 3; ++i)
        h1.add(x[i]);
    for (std::size_t i = 3; i < x.size(); ++i)
        h2.add(x[i]);
    c.merge(h2);
    c.merge(h1);
    EXPECT_EQ(a.value(), 2.25 + 1e-9);
    EXPECT_EQ(a.value(), b.value());
    EXPECT_EQ(a.value(), c.value());
}

TEST(Moments, MeanVarianceStdError)
{
    MomentAccumulator m;
    for (double v : {1.0, 2.0, 3.0, 4.0})
        m.add(v);
    EXPECT_DOUBLE_EQ(m.mean(), 2.5);
    EXPECT_DOUBLE_EQ(m.variance(), 5.0 / 3);
    EXPECT_DOUBLE_EQ(m.std_error(), std::sqrt(5.0 / 12));
}

TEST(Kolmogorov, SurvivalFunction)
{
    struct R
    {
        double x, q;
    };
    for (R r : {R{0.3, 0.9999906941986655}, R{0.5, 0.9639452436648751},
                R{1.0, 0.26999967167735456}, R{1.5, 0.022217962616525127},
                R{2.5, 7.453306344157342e-06}})
        EXPECT_NEAR(kolmogorov_sf(r.x), r.q, 1e-12 * std::max(r.q, 1e-3)) << r.x;
}

TEST(KsExact, MatchesExhaustiveEnumeration)
{
    EXPECT_NEAR(ks_two_sample_exact_sf(2, 2, 0.5), 1.0, 1e-14);
    EXPECT_NEAR(ks_two_sample_exact_sf(2, 2, 1.0), 1.0 / 3, 1e-14);
    EXPECT_NEAR(ks_two_sample_exact_sf(2, 3, 1.0 / 3), 1.0, 1e-14);
    EXPECT_NEAR(ks_two_sample_exact_sf(2, 3, 0.5), 0.9, 1e-14);
    EXPECT_NEAR(ks_two_sample_exact_sf(2, 3, 2.0 / 3), 0.6, 1e-14);
    EXPECT_NEAR(ks_two_sample_exact_sf(2, 3, 1.0), 0.2, 1e-14);
    EXPECT_NEAR(ks_two_sample_exact_sf(3, 3, 1.0 / 3), 1.0, 1e-14);
    EXPECT_NEAR(ks_two_sample_exact_sf(3, 3, 2.0 / 3), 0.6, 1e-14);
    EXPECT_NEAR(ks_two_sample_exact_sf(3, 3, 1.0), 0.1, 1e-14);
}

TEST(KsTwoSample, ReferenceSamples)
{
    std::vector<double> const a = {0.1, -1.3, 2.2, 0.7, -0.4, 1.9, 0.05};
    std::vector<double> const b = {0.3, -0.2, 1.1, 3.0, -2.5};
    TestResult const r = ks_two_sample(a, b);
    EXPECT_NEAR(r.statistic, 0.2, 1e-15);
    EXPECT_NEAR(r.p_value, 0.9974747474747474, 1e-12);
    EXPECT_NEAR(wasserstein1(a, b), 0.6757142857142856, 1e-14);
    EXPECT_NEAR(wasserstein1(b, a), wasserstein1(a, b), 1e-15);
}

TEST(KsTwoSample, IdenticalSamples)
{
    std::vector<double> const a = {0.5, -1, 2, 3};
    TestResult const r = ks_two_sample(a, a);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_NEAR(r.p_value, 1.0, 1e-14);
    EXPECT_EQ(wasserstein1(a, a), 0.0);
}

TEST(KsTwoSample, NullCalibration)
{
    RngStream rng(77, 0);
    int const trials = 400;
    int rejected = 0;
    for (int t = 0; t < trials; ++t)
    {
        std::vector<double> a(300), b(300);
        for (double& x : a)
            x = rng.normal();
        for (double& x : b)
            x = rng.normal();
        rejected += ks_two_sample(a, b).p_value < 0.05;
    }
    Interval const w = wilson_interval(rejected, trials);
    EXPECT_LE(w.lo, 0.05);
    EXPECT_GE(w.hi, 0.02);
}

TEST(KsNormal, ReferenceSample)
{
    std::vector<double> z;
    for (int i = 0; i <= 40; ++i)
    {
        double const x = -2 + 0.1 * i;
        z.push_back(x * x * x / 4);
    }
    TestResult const r = ks_normal(z);
    EXPECT_NEAR(r.statistic, 0.15940058490323372, 1e-12);
    EXPECT_NEAR(r.p_value, 0.22717019089608348, 1e-9);
}

TEST(Wilson, ReferenceIntervals)
{
    struct R
    {
        std::uint64_t k, n;
        double lo, hi;
    };
    for (R r : {R{0, 10, 0, 0.27753279986288926}, R{3, 10, 0.10779126740630104, 0.6032218525388546},
                R{37, 400, 0.06785393449857381, 0.12489858538387787}, R{10, 10, 0.7224672001371106, 1.0}})
    {
        Interval const w = wilson_interval(r.k, r.n);
        EXPECT_NEAR(w.lo, r.lo, 1e-12);
        EXPECT_NEAR(w.hi, r.hi, 1e-12);
    }
}

TEST(FitLine, ReferenceData)
{
    std::vector<double> const x = {1, 2, 3, 4, 5}, y = {2.1, 3.9, 6.2, 7.8, 10.1};
    LineFit const f = fit_line(x, y);
    EXPECT_NEAR(f.slope, 1.99, 1e-13);
    EXPECT_NEAR(f.intercept, 0.05, 1e-13);
    EXPECT_NEAR(f.slope_se, 0.059721576223897795, 1e-13);
    EXPECT_EQ(f.points, 5u);
}

TEST(Exponents, FourDimensions)
{
    EXPECT_NEAR(alpha_star(4, 0.0), 1.0 / 24, 1e-15);
    EXPECT_NEAR(beta_star(4, 0.0), 7.0 / 12, 1e-15);
    EXPECT_NEAR(alpha_star(4, 0.1) - 0.1, 1.0 / 24, 1e-15);
    EXPECT_NEAR(beta_star(4, 0.1) + 0.1, 7.0 / 12, 1e-15);
    EXPECT_NEAR(kSlowExponent, 5.0 / 18, 1e-15);
}

TEST(PathView, IndexOf)
{
    std::vector<double> const t = {0, 0.5, 1.0, 1.5}, V = {0, 1, 2, 3};
    PathView const p{t, V, 1};
    EXPECT_EQ(p.index_of(1.0), 2u);
    EXPECT_EQ(*p.at(3), 3.0);
    EXPECT_THROW(p.index_of(2.0), std::invalid_argument);
}

TEST(Increments, BrownianPathsHaveExponentOne)
{
    RngStream rng(9, 0);
    std::vector<std::vector<double>> Vs(200);
    std::vector<double> t;
    double const h = 0.01;
    for (int i = 0; i <= 400; ++i)
        t.push_back(i * h);
    for (auto& v : Vs)
    {
        double x = 0;
        for (std::size_t i = 0; i < t.size(); ++i)
        {
            v.push_back(x);
            x += std::sqrt(h) * rng.normal();
        }
    }
    std::vector<PathView> views;
    for (auto const& v : Vs)
        views.push_back({t, v, 1});
    auto const m = increment_moments(views, 2, {0.02, 0.04, 0.08, 0.16, 0.32});
    for (std::size_t i = 0; i < m.gaps.size(); ++i)
        EXPECT_NEAR(m.moments[i].value, m.gaps[i], 5 * m.moments[i].std_error);
    LineFit const f = increment_exponent(m, 1.0, 0.01, 1.0);
    EXPECT_NEAR(f.slope, 1.0, 0.1);
}

TEST(Residual, FreeFlowIsZero)
{
    EngineConfig e;
    e.potential.d = 3;
    e.potential.A = 0;
    e.N = 16;
    e.horizon = 8;
    auto const recs = run_ensemble(e, Mode::reservoir, 3, 8);
    std::vector<PathView> views;
    for (auto const& r : recs)
        views.push_back(PathView::of(r));
    TestFunctionBundle b = TestFunctionBundle::coordinate(3, 0);
    b.g.push_back([](VectorXd const& v) { return std::exp(-0.5 * v.squaredNorm()); });
    Estimate const r = martingale_residual(views, b, {0.25, 0.5}, e.N, CoefficientTable::zero(3));
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.n, recs.size());
}

TEST(Fluctuations, FreeFlowHasNoViolations)
{
    EngineConfig e;
    e.potential.d = 3;
    e.potential.A = 0;
    e.N = 16;
    e.horizon = 6;
    e.diagnostics = true;
    auto const recs = run_ensemble(e, Mode::reservoir, 4, 6);
    FluctuationReport const f = fluctuation_diagnostics(recs, 0.3, alpha_star(3, 0.3), beta_star(3, 0.3));
    EXPECT_EQ(f.derivative_sup.violations, 0u);
    EXPECT_EQ(f.derivative_sup.worst_ratio, 0.0);
    EXPECT_EQ(f.time_averaged.violations, 0u);
    EXPECT_EQ(f.derivative_sup.trials, recs.size());
    EXPECT_THROW(fluctuation_diagnostics({}, 0.3, 0, 0), std::invalid_argument);
}

TEST(Report, JsonSchema)
{
    DiagnosticsReport r;
    r.config_hash = "abc";
    r.seed = 7;
    r.version = "1.0";
    r.checks.push_back({"x", 1.5, 0.1, "< 2", true});
    EXPECT_TRUE(r.all_pass());
    r.checks.push_back({"y", 3, 0, "< 2", false});
    EXPECT_FALSE(r.all_pass());
    auto const j = nlohmann::json::parse(r.to_json());
    EXPECT_EQ(j["schema"], "landau-tagged.diagnostics.v1");
    EXPECT_EQ(j["seed"], 7);
    EXPECT_EQ(j["all_pass"], false);
    ASSERT_EQ(j["checks"].size(), 2u);
    EXPECT_EQ(j["checks"][0]["name"], "x");
    EXPECT_EQ(j["checks"][1]["threshold"], "< 2");
}
