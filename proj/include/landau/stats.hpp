// SPDX-License-Identifier: Apache-2.0
//! \file stats.hpp
//! Exact mergeable accumulators, distribution tests, martingale residuals,
//! increment exponents and good-set fluctuation diagnostics.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "coefficients.hpp"
#include "engine.hpp"

namespace landau {

/*!
 * Exactly rounded floating-point sum (Shewchuk non-overlapping partials).
 * The value depends only on the multiset of summands, so merging shards in
 * any order reproduces the sum over the concatenation bit for bit.
 */
class ExactSum
{
  public:
    void add(double x);
    void merge(ExactSum const& o);
    double value() const;

  private:
    std::vector<double> partials_;
};

//! Count, sum and sum of squares with exact merge
struct MomentAccumulator
{
    std::uint64_t n = 0;
    ExactSum s1, s2;

    void add(double x)
    {
        ++n;
        s1.add(x);
        s2.add(x * x);
    }
    void merge(MomentAccumulator const& o)
    {
        n += o.n;
        s1.merge(o.s1);
        s2.merge(o.s2);
    }
    double mean() const;
    double variance() const;  //!< unbiased
    double std_error() const;
};

struct TestResult
{
    double statistic = 0;
    double p_value = 1;
};

//! Kolmogorov limit survival function Q(lambda) = P(K > lambda)
double kolmogorov_sf(double lambda);

/*!
 * Two-sample Kolmogorov-Smirnov. Exact lattice-path p-value when
 * n + m <= exact_limit, otherwise the asymptotic law with the effective
 * size n m / (n + m) and the (sqrt(n_e) + 0.12 + 0.11/sqrt(n_e)) correction.
 */
TestResult ks_two_sample(std::span<double const> a, std::span<double const> b,
                         std::size_t exact_limit = 400);

//! Exact P(D_{n,m} >= d) by lattice-path counting
double ks_two_sample_exact_sf(std::size_t n, std::size_t m, double d);

//! One-sample KS against N(mean, sd^2) with the asymptotic p-value
TestResult ks_normal(std::span<double const> a, double mean = 0, double sd = 1);

//! L1 distance between empirical CDFs
double wasserstein1(std::span<double const> a, std::span<double const> b);

struct Interval
{
    double lo = 0;
    double hi = 0;
};

//! Wilson score interval for k successes out of n
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

//! Ordinary least squares slope and its standard error
struct LineFit
{
    double slope = 0;
    double intercept = 0;
    double slope_se = 0;
    std::size_t points = 0;
};
LineFit fit_line(std::span<double const> x, std::span<double const> y);

/*!
 * Sampled velocity path in a uniform time grid. For particle records times
 * are microscopic; for SDE paths they are macroscopic and the scale is 1.
 */
struct PathView
{
    std::span<double const> t;
    std::span<double const> V;
    int d = 0;

    static PathView of(TrajectoryRecord const& r)
    {
        return {r.t, r.V, r.d};
    }
    std::size_t size() const { return t.size(); }
    double const* at(std::size_t i) const { return V.data() + i * d; }
    //! Sample index for time s; throws when s is off the grid
    std::size_t index_of(double s) const;
};

struct TestFunctionBundle
{
    std::function<double(VectorXd const&)> f;
    std::function<VectorXd(VectorXd const&)> grad;
    std::function<MatrixXd(VectorXd const&)> hess;
    std::vector<std::function<double(VectorXd const&)>> g;
    double sup_f = 1;  //!< declared bound on the evaluation range

    //! f = v_k
    static TestFunctionBundle coordinate(int d, int k);
};

struct Estimate
{
    double value = 0;
    double std_error = 0;
    std::uint64_t n = 0;
};

/*!
 * E[prod g_i(V_{tau_i N}) (f(V_{tau_{n+1} N}) - f(V_{tau_n N})
 *   - (1/N) int L f(V_t) dt)] by trapezoid on the sampling grid.
 * taus holds tau_1 ... tau_{n+1}, one per g plus the final time.
 */
Estimate martingale_residual(std::vector<PathView> const& paths,
                             TestFunctionBundle const& bundle,
                             std::vector<double> const& taus, double N,
                             CoefficientTable const& table);

struct IncrementMoments
{
    std::vector<double> gaps;  //!< microscopic time lags
    std::vector<Estimate> moments;
};

/*!
 * E|V_{t+g} - V_t|^p pooled over every start t on the grid; the standard
 * error is taken across paths.
 */
IncrementMoments increment_moments(std::vector<PathView> const& paths, int p,
                                   std::vector<double> const& gaps);

//! Slope of log E against log(gap / N) restricted to [gmin, gmax]
LineFit increment_exponent(IncrementMoments const& m, double N, double gmin,
                           double gmax);

//! Thresholds of the good-set and better-set diagnostics
struct FluctuationThresholds
{
    double C_int = 10;  //!< interacting count per N
    double C_tm = 10;   //!< constant of the interaction-time sums
    double C_avg = 10;  //!< constant of the time-averaged bound
};

//! alpha* = 1/(4(d+2)) + delta
double alpha_star(int d, double delta);
//! beta* = (2d^2+5d+4)/(2(d+2)(d+4)) - delta
double beta_star(int d, double delta);

struct ViolationRate
{
    std::uint64_t violations = 0;
    std::uint64_t trials = 0;
    Interval wilson;
    double worst_ratio = 0;  //!< largest statistic / threshold
};

struct FluctuationReport
{
    int d = 0;
    double N = 0;
    double delta = 0;
    double alpha = 0;
    double beta = 0;
    ViolationRate derivative_sup;     //!< (a)
    ViolationRate interacting_count;  //!< (b)
    ViolationRate time_sums;          //!< (c)
    ViolationRate time_averaged;      //!< (d)
    double fitted_C_int = 0;
    std::vector<double> fitted_C_tm;  //!< per k = 1..6
    double fitted_C_avg = 0;
    std::uint64_t cutoff_violations = 0;
};

FluctuationReport fluctuation_diagnostics(
    std::vector<TrajectoryRecord> const& records, double delta, double alpha,
    double beta, FluctuationThresholds const& th = {});

//! gamma_r = 1/4 + 1/36
inline constexpr double kSlowExponent = 0.25 + 1.0 / 36;

struct RecollisionRow
{
    double N = 0;
    std::uint64_t interactions = 0;
    std::uint64_t recollisions = 0;
    Interval wilson;
    double frequency = 0;
    std::uint64_t complete = 0;
    std::uint64_t within_bound = 0;
    double within_fraction = 0;
    std::uint64_t slow = 0;  //!< entries with |v - V| < N^{-gamma_r}
    std::vector<double> ratio_edges;
    std::vector<std::uint64_t> ratio_hist;
};

RecollisionRow interaction_recollision_stats(
    std::vector<TrajectoryRecord> const& records, double c_T);

struct CheckResult
{
    std::string name;
    double statistic = 0;
    double uncertainty = 0;  //!< standard error or p-value
    std::string threshold;
    bool pass = false;
};

struct DiagnosticsReport
{
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::string to_json() const;
};

}  // namespace landau
