// SPDX-License-Identifier: Apache-2.0
// Linear second-order systems: RK4, Gronwall ratios and the Peano-Baker series.

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "landau/bounds.hpp"

using namespace landau;

namespace {

LinearSecondOrderProblem forced(double b, double T)
{
    LinearSecondOrderProblem p;
    p.a = [](double) { return MatrixXd::Zero(2, 2); };
    p.b = [b](double) { return VectorXd::Constant(2, b); };
    p.x0 = VectorXd::Zero(2);
    p.v0 = VectorXd::Zero(2);
    p.T = T;
    return p;
}

}  // namespace

TEST(Rk4, ConstantForcing)
{
    auto const s = solve_linear_second_order(forced(1, 3), 0.05);
    for (std::size_t i = 0; i < s.t.size(); ++i)
    {
        EXPECT_NEAR(s.x[i][0], s.t[i] * s.t[i] / 2, 1e-10);
        EXPECT_NEAR(s.v[i][1], s.t[i], 1e-10);
    }
    EXPECT_NEAR(s.t.back(), 3.0, 1e-12);
}

TEST(Rk4, CoshBenchmark)
{
    double const N = 64, a0 = 1, b0 = 1.5;
    auto const p = cosh_problem(3, N, a0, b0);
    auto const s = solve_linear_second_order(p, 1e-2);
    double const exact = cosh_solution(p.T, N, a0, b0);
    EXPECT_NEAR(s.x.back()[0], exact, 1e-8 * std::abs(exact));
    EXPECT_LE(s.error_estimate, 1e-8 * std::abs(exact));
}

TEST(Rk4, TimeReversal)
{
    auto const p = cosh_problem(2, 16, 1, 1);
    VectorXd x = p.x0, v = p.v0;
    rk4_advance(p, 0, p.T, 400, x, v);
    rk4_advance(p, p.T, 0, 400, x, v);
    EXPECT_LE((x - p.x0).norm(), 1e-8);
    EXPECT_LE((v - p.v0).norm(), 1e-8);
}

TEST(Gronwall, ZeroForcingGivesZeroRatio)
{
    LinearSecondOrderProblem p = forced(0, 2);
    p.C_A = 1;
    p.a_exp = 1;
    p.N = 4;
    GronwallReport const r = gronwall_check(p, 1e-2, GronwallCase::simple);
    EXPECT_EQ(r.c_hat, 0.0);
    EXPECT_TRUE(r.pass);
}

TEST(Gronwall, Constants)
{
    EXPECT_NEAR(gronwall_simple_constant(0), std::exp(2.0) / 2 + 1, 1e-14);
    EXPECT_NEAR(gronwall_simple_constant(1), std::exp(3.0) / 3 + 1, 1e-13);
    double const A = std::pow(std::sqrt(std::numbers::pi) / 2, 2.0 / 3);
    EXPECT_NEAR(gronwall_averaged_constant(1), 2 * (1 + std::sqrt(A)) * std::exp(A), 1e-13);
    EXPECT_STREQ(to_string(GronwallCase::averaged), "averaged");
}

TEST(Gronwall, CoshWithinSimpleBound)
{
    auto const p = cosh_problem(3, 64, 1, 1.5);
    GronwallReport const r = gronwall_check(p, 1e-2, GronwallCase::simple);
    EXPECT_TRUE(r.hypotheses_ok) << r.hypothesis_error;
    EXPECT_GT(r.c_hat, 0.0);
    EXPECT_LE(r.c_hat, r.c_bound);
}

TEST(Gronwall, RandomCertifiedProblems)
{
    RngStream rng(3, 0);
    for (int i = 0; i < 5; ++i)
    {
        auto const p = random_certified_problem(3, 64, 1, 1, rng);
        EXPECT_LE(p.C_avg, 1.0 + 1e-12);
        for (GronwallCase k : {GronwallCase::simple, GronwallCase::averaged})
        {
            GronwallReport const r = gronwall_check(p, 1e-2, k);
            EXPECT_TRUE(r.hypotheses_ok) << r.hypothesis_error;
            EXPECT_TRUE(r.pass) << to_string(k) << " " << r.c_hat << " " << r.c_bound;
        }
    }
}

TEST(PeanoBaker, ZeroOrderIsIdentity)
{
    MatrixFn A = [](double) { return MatrixXd::Ones(3, 3); };
    auto const r = peano_baker(A, 3, 0, 1, 0, 1e-2);
    EXPECT_EQ(r.Phi, MatrixXd::Identity(3, 3));
}

TEST(PeanoBaker, ConstantGeneratorIsExponential)
{
    MatrixXd M(2, 2);
    M << 0.1, 0.7, -0.4, 0.2;
    auto const r = peano_baker([M](double) { return M; }, 2, 0, 1.5, 24, 1e-3);
    MatrixXd const E = (1.5 * M).exp();
    EXPECT_LE((r.Phi - E).norm(), 1e-6);
    EXPECT_LE(r.tail_bound, 1e-15);
}

TEST(PeanoBaker, MatchesRk4)
{
    RngStream rng(5, 0);
    auto p = random_certified_problem(2, 16, 1, 1, rng);
    p.b = [](double) { return VectorXd::Zero(2); };
    p.x0 = VectorXd::Ones(2);
    p.v0 = VectorXd::Zero(2);
    double const T = 2;
    auto const r = peano_baker(second_order_generator(p.a, 2), 4, 0, T, 24, 1e-3);
    VectorXd x = p.x0, v = p.v0;
    rk4_advance(p, 0, T, 2000, x, v);
    VectorXd y0(4);
    y0 << p.x0, p.v0;
    VectorXd const y = r.Phi * y0;
    EXPECT_LE((y.head(2) - x).norm(), 1e-5);
    EXPECT_LE((y.tail(2) - v).norm(), 1e-5);
}

TEST(Suite, SerialMatchesParallel)
{
    BoundsConfig c;
    c.problems = 4;
    BoundsReport const a = bounds_suite(c, 9, Exec::serial);
    BoundsReport const b = bounds_suite(c, 9, Exec::parallel);
    ASSERT_EQ(a.simple.size(), b.simple.size());
    for (std::size_t i = 0; i < a.simple.size(); ++i)
    {
        EXPECT_EQ(a.simple[i].c_hat, b.simple[i].c_hat);
        EXPECT_EQ(a.averaged[i].c_hat, b.averaged[i].c_hat);
    }
    EXPECT_TRUE(a.all_pass());
}
