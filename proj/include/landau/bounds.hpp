// SPDX-License-Identifier: Apache-2.0
//! \file bounds.hpp
//! Second-order linear systems x'' = a(t) x + b(t): RK4 integration,
//! Gronwall bound checks and the Peano-Baker propagator.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "parallel.hpp"
#include "rng.hpp"

namespace landau {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using MatrixFn = std::function<MatrixXd(double)>;
using VectorFn = std::function<VectorXd(double)>;

struct LinearSecondOrderProblem
{
    MatrixFn a;
    VectorFn b;
    VectorXd x0;
    VectorXd v0;
    double T = 1;

    // bound parameters
    double N = 1;
    double a_exp = 1;  //!< exponent a of N^{-a}
    //! pointwise constant: |a(t)| <= C_A N^{-a}
    double C_A = std::numeric_limits<double>::infinity();
    //! averaged constant: |int_s^t a| <= C_avg sqrt(t - s) N^{-a}
    double C_avg = std::numeric_limits<double>::infinity();
    //! the averaged bound holds for t - s <= N^xi
    double xi = std::numeric_limits<double>::infinity();

    int dim() const { return static_cast<int>(x0.size()); }
};

struct LinearTrajectory
{
    std::vector<double> t;
    std::vector<VectorXd> x;
    std::vector<VectorXd> v;
    //! max over samples of 2 |y_dt - y_{dt/2}| (conservative Richardson)
    double error_estimate = 0;
};

//! Advance (x, v) from t0 to t1 with `steps` RK4 steps; t1 < t0 is allowed
void rk4_advance(LinearSecondOrderProblem const& p, double t0, double t1,
                 std::size_t steps, VectorXd& x, VectorXd& v);

//! RK4 on [0, T] sampled every step, with a step-halving error estimate
LinearTrajectory solve_linear_second_order(LinearSecondOrderProblem const& p,
                                           double dt);

//! x(t) = N^{a0-b0} (cosh(t N^{-a0/2}) - 1) for a = N^{-a0} I, b = N^{-b0}
LinearSecondOrderProblem cosh_problem(int dim, double N, double a0, double b0);
double cosh_solution(double t, double N, double a0, double b0);

enum class GronwallCase
{
    simple,    //!< pointwise bound, t <= N^{a/2}
    averaged,  //!< averaged bound, t <= N^{2a/3}
};

char const* to_string(GronwallCase c);

//! e^{2+C_A} / (2+C_A) + 1
double gronwall_simple_constant(double C_A);
//! 2 (1 + sqrt(A)) e^A with A = (C_A sqrt(pi) / 2)^{2/3}
double gronwall_averaged_constant(double C_avg);

struct GronwallReport
{
    GronwallCase kind = GronwallCase::simple;
    double horizon = 0;
    double c_hat = 0;       //!< sup ratio on [0, horizon]
    double c_hat_half = 0;  //!< sup ratio on [0, horizon / 2]
    double stability = 1;   //!< c_hat / c_hat_half
    double c_bound = 0;
    bool hypotheses_ok = false;
    std::string hypothesis_error;
    bool pass = false;
};

/*!
 * Empirical constant of the simple or averaged Gronwall bound. The simple
 * ratio is (|x| + t|x'|) / (t^2 sup|b| + (|x0|^2 + t^2|x0'|^2)^{1/2}); the
 * averaged ratio uses (|x|^2 + t^2|x'|^2)^{1/2} in the numerator. A zero
 * numerator gives ratio 0. Passes when the hypotheses hold, c_hat stays
 * below the explicit constant and doubling the horizon changes it by at
 * most `stability_limit`.
 */
GronwallReport gronwall_check(LinearSecondOrderProblem const& p, double dt,
                              GronwallCase kind, double stability_limit = 2.0);

struct PeanoBakerResult
{
    MatrixXd Phi;
    double a_sup = 0;           //!< max |A| on the quadrature grid
    double first_omitted = 0;   //!< ((t-s)|A|)^{K+1} / (K+1)!
    double tail_bound = 0;      //!< first_omitted * e^{(t-s)|A|}
};

/*!
 * sum_{k<=K} I_k(t, s) with I_k(u, s) = int_s^u A(r) I_{k-1}(r, s) dr
 * evaluated by nested cumulative trapezoid on a grid of step close to dt.
 */
PeanoBakerResult peano_baker(MatrixFn const& A, int n, double s, double t,
                             int K, double dt);

//! First-order generator [[0, I], [a(t), 0]] of x'' = a x
MatrixFn second_order_generator(MatrixFn a, int dim);

/*!
 * Random certified problem: a(t) = N^{-a0} sum_j m_j M_j cos(w_j t + phi_j)
 * with |M_j| = 1 symmetric, so |a| <= N^{-a0} sum m_j and
 * |int_s^t a| <= N^{-a0} sum m_j sqrt(2 / w_j) sqrt(t - s) for all s, t.
 * b(t) = b0 + b1 sin(nu t); zero initial data.
 */
LinearSecondOrderProblem random_certified_problem(int dim, double N, double a0,
                                                  double C_avg_target,
                                                  RngStream& rng);

struct BoundsConfig
{
    int dim = 3;
    double N = 64;
    double a0 = 1;
    double b0 = 1.5;
    double C_avg = 1;
    int problems = 50;
    double dt = 1e-2;
    int pb_order = 24;
    double pb_dt = 2e-3;
    double stability_limit = 2.0;
    double cosh_tolerance = 1e-8;
};

struct BoundsReport
{
    double cosh_value = 0;
    double cosh_exact = 0;
    double cosh_relative_error = 0;
    double cosh_error_estimate = 0;
    GronwallReport cosh_gronwall;
    std::vector<GronwallReport> simple;
    std::vector<GronwallReport> averaged;
    double pb_difference = 0;  //!< |Phi Y0 - RK4| on a random problem
    double pb_tolerance = 0;   //!< tail bound + quadrature estimate + RK4 estimate
    bool cosh_pass = false;
    bool simple_pass = false;
    bool averaged_pass = false;
    bool pb_pass = false;

    bool all_pass() const
    {
        return cosh_pass && simple_pass && averaged_pass && pb_pass;
    }
};

//! Cosh benchmark, random simple and averaged suites and the Peano-Baker check
BoundsReport bounds_suite(BoundsConfig const& cfg, std::uint64_t seed,
                          Exec exec = Exec::parallel);

}  // namespace landau
