// SPDX-License-Identifier: Apache-2.0
#include "landau/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "landau/io.hpp"

namespace landau {

namespace {

CheckResult check(std::string name, double statistic, double uncertainty,
                  std::string threshold, bool pass)
{
    return {std::move(name), statistic, uncertainty, std::move(threshold), pass};
}

std::string tag(double N)
{
    return "N" + format_number(N);
}

//! Sample index closest to time s; the last sample when s is past the end
std::size_t sample_at(TrajectoryRecord const& r, double s)
{
    return PathView::of(r).index_of(std::min(s, r.t.back()));
}

std::vector<double> column(std::vector<double> const& rows, int d, int c)
{
    std::vector<double> out;
    out.reserve(rows.size() / d);
    for (std::size_t i = c; i < rows.size(); i += d)
        out.push_back(rows[i]);
    return out;
}

}  // namespace

double median(std::vector<double> v)
{
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::size_t const m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + m, v.end());
    double hi = v[m];
    if (v.size() % 2)
        return hi;
    double lo = *std::max_element(v.begin(), v.begin() + m);
    return 0.5 * (lo + hi);
}

std::vector<VectorXd> identity_grid(int d, std::vector<double> const& speeds)
{
    std::vector<VectorXd> grid;
    for (double s : speeds)
    {
        VectorXd V = VectorXd::Zero(d);
        V[0] = s;
        grid.push_back(V);
    }
    VectorXd diag = VectorXd::Zero(d);
    diag[0] = diag[1] = 1 / std::sqrt(2.0);
    grid.push_back(diag);
    return grid;
}

CoeffsStudy coeffs_study(RunConfig const& c, Exec exec)
{
    CoeffsStudy st;
    st.d = c.d;
    LandauCoefficients const lc(c.potential_spec());
    CoefficientTable const table(lc, c.coeffs.knots, c.coeffs.vmax,
                                 exec == Exec::parallel);
    st.knots = table.knots();
    st.d0 = lc.radial(0).b;

    IdentityTolerances tol;
    tol.drift_relative = c.coeffs.drift_tolerance;
    tol.divergence_relative = c.coeffs.divergence_tolerance;
    tol.fourier_relative = c.coeffs.fourier_tolerance;
    st.identities = check_identities(identity_grid(c.d, c.coeffs.speeds), lc, tol, true);

    VectorXd V = VectorXd::Zero(c.d);
    V[0] = c.coeffs.rate_speed;
    std::vector<double> lt, lD, lL;
    for (double t : c.coeffs.windows)
    {
        TruncatedCoefficients const tc = truncated_coeffs(V, t, lc);
        TruncationRow row{t, tc.dD.norm(), tc.dLambda.norm()};
        st.truncation.push_back(row);
        if (row.dD > 0 && row.dLambda > 0)
        {
            lt.push_back(std::log(t));
            lD.push_back(std::log(row.dD));
            lL.push_back(std::log(row.dLambda));
        }
    }
    st.slope_D = fit_line(lt, lD);
    st.slope_Lambda = fit_line(lt, lL);

    st.stationarity = generator_stationarity(lc, c.coeffs.stationarity_nodes);

    auto const& id = st.identities;
    st.checks.push_back(check("identity_drift", id.max_drift_error, 0,
                              "<= " + format_number(tol.drift_relative), id.drift_pass));
    st.checks.push_back(check("identity_divergence", id.max_divergence_error, 0,
                              "<= " + format_number(tol.divergence_relative),
                              id.divergence_pass));
    st.checks.push_back(check("identity_spd", id.min_eigenvalue, 0, "> 0", id.spd_pass));
    st.checks.push_back(check("fourier_vs_direct", id.max_fourier_error, 0,
                              "<= " + format_number(tol.fourier_relative), id.fourier_pass));
    double const rt = c.coeffs.rate_tolerance;
    double const eD = -(c.d - 1.0), eL = -(c.d - 2.0);
    st.checks.push_back(check("truncation_rate_D", st.slope_D.slope, st.slope_D.slope_se,
                              format_number(eD) + " +- " + format_number(rt),
                              std::abs(st.slope_D.slope - eD) <= rt));
    st.checks.push_back(check("truncation_rate_Lambda", st.slope_Lambda.slope,
                              st.slope_Lambda.slope_se,
                              format_number(eL) + " +- " + format_number(rt),
                              std::abs(st.slope_Lambda.slope - eL) <= rt));
    double worst = 0;
    for (auto const& s : st.stationarity)
        worst = std::max(worst, std::abs(s.value));
    st.checks.push_back(check("generator_stationarity", worst, 0,
                              "<= " + format_number(c.coeffs.stationarity_tolerance),
                              worst <= c.coeffs.stationarity_tolerance));
    return st;
}

namespace {

EngineConfig side_config(RunConfig const& c, int d, double L, double N,
                         double horizon)
{
    RunConfig cc = c;
    cc.d = d;
    cc.initial.kind = "one";
    cc.initial.mean.clear();
    EngineConfig e = cc.engine_config(N);
    e.L = L;
    e.horizon = horizon;
    e.diagnostics = false;
    return e;
}

}  // namespace

EnergyStudy energy_study(RunConfig const& c, std::uint64_t seed, Exec exec)
{
    auto const& en = c.energy;
    EngineConfig e = side_config(c, en.d, en.L, en.N, en.horizon);
    e.energy_trace = true;
    e.sample_stride = 1;
    EnergyStudy st;
    st.dt = e.dt_eff();
    auto drift = [](std::vector<TrajectoryRecord> const& recs) {
        std::vector<double> out;
        for (auto const& r : recs)
        {
            double m = 0;
            for (double x : r.energy)
                m = std::max(m, std::abs(x));
            out.push_back(m / std::abs(r.energy0));
        }
        return out;
    };
    st.drift = drift(run_ensemble(e, Mode::full_torus, seed, en.runs, exec));
    EngineConfig h = e;
    h.dt = st.dt / 2;
    h.sample_stride = 2;
    st.drift_half = drift(run_ensemble(h, Mode::full_torus, seed, en.runs, exec));
    st.max_drift = *std::max_element(st.drift.begin(), st.drift.end());
    st.max_drift_half = *std::max_element(st.drift_half.begin(), st.drift_half.end());
    st.ratio = st.max_drift / st.max_drift_half;
    st.checks.push_back(check("energy_drift", st.max_drift, 0,
                              "<= " + format_number(en.max_drift),
                              st.max_drift <= en.max_drift));
    st.checks.push_back(check("energy_halving_ratio", st.ratio, 0,
                              "in [" + format_number(en.ratio_lo) + ", "
                                  + format_number(en.ratio_hi) + "]",
                              st.ratio >= en.ratio_lo && st.ratio <= en.ratio_hi));
    return st;
}

OracleStudy oracle_study(RunConfig const& c, std::uint64_t seed, Exec exec)
{
    auto const& o = c.oracle;
    EngineConfig e = side_config(c, o.d, o.L, o.N, o.horizon);
    e.energy_trace = false;
    EngineConfig r = e;
    r.reservoir_wrap = true;
    OracleStudy st;
    auto collect = [&](std::vector<TrajectoryRecord> const& recs, std::vector<double>& out) {
        for (auto const& rec : recs)
        {
            std::size_t const last = rec.samples() - 1;
            for (int k = 0; k < o.d; ++k)
                out.push_back(rec.V[last * o.d + k] - rec.V[k]);
        }
    };
    {
        auto recs = run_ensemble(e, Mode::full_torus, seed, o.runs, exec);
        collect(recs, st.dV_full);
        st.full = interaction_recollision_stats(recs, c.diagnostics.c_T);
    }
    {
        auto recs = run_ensemble(r, Mode::reservoir, seed, o.runs, exec);
        collect(recs, st.dV_reservoir);
        st.reservoir = interaction_recollision_stats(recs, c.diagnostics.c_T);
    }
    double const level = c.diagnostics.ks_level;
    for (int k = 0; k < o.d; ++k)
    {
        auto const a = column(st.dV_full, o.d, k);
        auto const b = column(st.dV_reservoir, o.d, k);
        st.ks.push_back(ks_two_sample(a, b));
        st.checks.push_back(check("oracle_ks_c" + std::to_string(k + 1), st.ks.back().statistic,
                                  st.ks.back().p_value, "p > " + format_number(level),
                                  st.ks.back().p_value > level));
    }
    bool const overlap = st.full.wilson.lo <= st.reservoir.wilson.hi
                         && st.reservoir.wilson.lo <= st.full.wilson.hi;
    st.checks.push_back(check("oracle_recollision_frequency",
                              st.reservoir.frequency - st.full.frequency,
                              st.full.wilson.hi - st.full.wilson.lo,
                              "Wilson intervals overlap", overlap));
    return st;
}

SweepStudy sweep_study(RunConfig const& c, std::uint64_t seed,
                       std::vector<double> const& Ns, Exec exec)
{
    if (Ns.empty())
        throw std::invalid_argument("sweep.N: must not be empty");
    int const d = c.d;
    SweepStudy st;
    st.d = d;
    st.tau = c.engine.tau_max;
    auto const& sw = c.sweep;
    auto const& dg = c.diagnostics;

    LandauCoefficients const lc(c.potential_spec());
    CoefficientTable const table(lc, c.coeffs.knots, c.coeffs.vmax,
                                 exec == Exec::parallel);
    SdeConfig sc = c.sde_config(seed);
    sc.tau_grid = {st.tau};
    sc.tau_max = st.tau;
    sc.law = c.initial_law();
    st.sde = run_sde_ensemble(sc, table, exec);

    Mode const mode = c.mode();
    TestFunctionBundle bundle = TestFunctionBundle::coordinate(d, 0);
    bundle.g.push_back([](VectorXd const& v) { return std::exp(-0.5 * v.squaredNorm()); });
    std::vector<double> taus = sw.residual_taus;

    for (double N : Ns)
    {
        EngineConfig e = c.engine_config(N);
        e.horizon = 0;
        e.sample_stride = sw.sample_stride;
        e.diagnostics = true;
        e.energy_trace = false;
        std::vector<TrajectoryRecord> const recs = run_ensemble(e, mode, seed, sw.runs, exec);

        SweepRow row;
        row.N = N;
        row.runs = recs.size();
        row.T = e.T();
        for (auto const& r : recs)
        {
            std::size_t const i = sample_at(r, row.T);
            row.V_final.insert(row.V_final.end(), r.V.begin() + i * d, r.V.begin() + (i + 1) * d);
            row.max_tracked = std::max(row.max_tracked, r.max_tracked);
            row.missed_reentries += r.missed_reentries;
        }
        for (int k = 0; k < d; ++k)
        {
            auto const a = column(row.V_final, d, k);
            auto const b = st.sde.coordinate(0, k);
            row.ks.push_back(ks_two_sample(a, b));
            row.w1.push_back(wasserstein1(a, b));
        }

        std::vector<PathView> paths;
        for (auto const& r : recs)
            paths.push_back(PathView::of(r));
        row.residual = martingale_residual(paths, bundle, taus, N, table);

        auto within = [&](std::vector<double> const& g) {
            std::vector<double> out;
            for (double x : g)
                if (x <= row.T / 2)
                    out.push_back(x);
            return out;
        };
        std::vector<double> gaps = within(sw.short_gaps);
        std::vector<double> const large = within(sw.large_gaps);
        gaps.insert(gaps.end(), large.begin(), large.end());
        row.p2 = increment_moments(paths, 2, gaps);
        row.p4 = increment_moments(paths, 4, gaps);
        double const smin = *std::min_element(sw.short_gaps.begin(), sw.short_gaps.end());
        double const smax = *std::max_element(sw.short_gaps.begin(), sw.short_gaps.end());
        double const lmin = *std::min_element(sw.large_gaps.begin(), sw.large_gaps.end());
        double const lmax = *std::max_element(sw.large_gaps.begin(), sw.large_gaps.end());
        row.p2_short = increment_exponent(row.p2, N, smin, smax);
        row.p2_large = increment_exponent(row.p2, N, lmin, lmax);
        row.p4_large = increment_exponent(row.p4, N, lmin, lmax);

        row.recollisions = interaction_recollision_stats(recs, dg.c_T);
        row.fluctuations = fluctuation_diagnostics(recs, dg.delta, c.alpha(), c.beta(),
                                                   c.thresholds());
        st.rows.push_back(std::move(row));
    }

    {
        EngineConfig e = c.engine_config(Ns.front());
        e.horizon = 0;
        e.law = InitialLaw::one(d);
        e.energy_trace = false;
        e.diagnostics = false;
        auto const recs = run_ensemble(e, mode, seed ^ 0x5bd1e995u, sw.stationarity_runs, exec);
        double const T = e.T();
        for (double t : {0.0, T / 2, T})
        {
            std::vector<double> vals;
            for (auto const& r : recs)
            {
                std::size_t const i = sample_at(r, t);
                vals.insert(vals.end(), r.V.begin() + i * d, r.V.begin() + (i + 1) * d);
            }
            for (int k = 0; k < d; ++k)
                st.stationarity.push_back({t, k, ks_normal(column(vals, d, k))});
        }
    }

    // checks
    double const level = dg.ks_level;
    {
        double pmin = 1;
        for (auto const& s : st.stationarity)
            pmin = std::min(pmin, s.result.p_value);
        st.checks.push_back(check("stationarity_ks_min_p", pmin, 0,
                                  "> " + format_number(level), pmin > level));
    }
    SweepRow const& top = st.rows.back();
    for (int k = 0; k < d; ++k)
    {
        std::string const ck = "_c" + std::to_string(k + 1);
        st.checks.push_back(check("particle_vs_sde_ks" + ck + "_" + tag(top.N),
                                  top.ks[k].statistic, top.ks[k].p_value,
                                  "p > " + format_number(level), top.ks[k].p_value > level));
        if (st.rows.size() >= 2)
        {
            bool mono = true;
            for (std::size_t i = 1; i < st.rows.size(); ++i)
                mono = mono && st.rows[i].ks[k].statistic <= st.rows[i - 1].ks[k].statistic;
            st.checks.push_back(check("ks_distance_nonincreasing" + ck,
                                      top.ks[k].statistic - st.rows.front().ks[k].statistic, 0,
                                      "D(N) non-increasing over the sweep", mono));
        }
    }
    if (st.rows.size() >= 2)
    {
        bool ok = true;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < st.rows.size(); ++i)
        {
            Estimate const& a = st.rows[i - 1].residual;
            Estimate const& b = st.rows[i].residual;
            double const se = std::hypot(a.std_error, b.std_error);
            double const excess = std::abs(b.value) - std::abs(a.value);
            worst = std::max(worst, excess / (se > 0 ? se : 1));
            ok = ok && excess <= dg.se_multiple * se;
        }
        st.checks.push_back(check("martingale_residual_trend", worst, 0,
                                  "|r| increase <= " + format_number(dg.se_multiple) + " SE",
                                  ok));
    }
    auto const& w = c.sweep;
    st.checks.push_back(check("increment_p2_large_" + tag(top.N), top.p2_large.slope,
                              top.p2_large.slope_se,
                              format_number(w.large_slope) + " +- " + format_number(w.large_tolerance),
                              top.p2_large.points >= 2
                                  && std::abs(top.p2_large.slope - w.large_slope) <= w.large_tolerance));
    st.checks.push_back(check("increment_p2_short_" + tag(top.N), top.p2_short.slope,
                              top.p2_short.slope_se,
                              format_number(w.short_slope) + " +- " + format_number(w.short_tolerance),
                              top.p2_short.points >= 2
                                  && std::abs(top.p2_short.slope - w.short_slope) <= w.short_tolerance));
    st.checks.push_back(check("increment_p4_large_" + tag(top.N), top.p4_large.slope,
                              top.p4_large.slope_se, ">= " + format_number(w.p4_min_slope),
                              top.p4_large.points >= 2 && top.p4_large.slope >= w.p4_min_slope));
    st.checks.push_back(check("interaction_within_bound_" + tag(top.N),
                              top.recollisions.within_fraction, 0,
                              ">= " + format_number(dg.within_fraction),
                              top.recollisions.within_fraction >= dg.within_fraction));
    if (st.rows.size() >= 2)
    {
        bool ok = true;
        for (std::size_t i = 1; i < st.rows.size(); ++i)
            ok = ok && st.rows[i].recollisions.frequency <= st.rows[i - 1].recollisions.wilson.hi;
        st.checks.push_back(check("recollision_nonincreasing", top.recollisions.frequency,
                                  top.recollisions.wilson.hi - top.recollisions.wilson.lo,
                                  "f(N) <= Wilson upper bound at the previous N", ok));
    }
    for (auto const& row : st.rows)
    {
        auto const& f = row.fluctuations;
        auto add = [&](std::string const& name, ViolationRate const& v) {
            double const frac = v.trials ? static_cast<double>(v.violations) / v.trials : 0.0;
            st.checks.push_back(check(name + "_" + tag(row.N), frac, v.wilson.hi - v.wilson.lo,
                                      "<= " + format_number(dg.violation_level),
                                      frac <= dg.violation_level));
        };
        add("fluctuation_a_derivative_sup", f.derivative_sup);
        add("fluctuation_b_interacting_count", f.interacting_count);
        add("fluctuation_c_time_sums", f.time_sums);
        add("fluctuation_d_time_averaged", f.time_averaged);
    }
    return st;
}

TwinStudy twin_study(RunConfig const& c, std::uint64_t seed, Exec exec)
{
    auto const& tw = c.twin;
    TwinStudy st;
    std::vector<double> grid;
    for (double l = 0.1; l < tw.horizon; l *= 1.25)
        grid.push_back(l);

    std::vector<double> all_tm, all_ratio;
    std::vector<std::vector<std::vector<double>>> sups;  // per N, per run
    for (double N : tw.N)
    {
        EngineConfig e = side_config(c, tw.d, tw.L, N, tw.horizon);
        e.energy_trace = false;
        std::vector<TwinResult> res(tw.runs);
        auto const n = static_cast<std::ptrdiff_t>(tw.runs);
        auto one = [&](std::ptrdiff_t i) {
            TwinResult r = twin_trajectory(e, seed, static_cast<std::uint64_t>(i));
            r.record = {};
            r.record_bar = {};
            res[i] = std::move(r);
        };
        if (exec == Exec::parallel)
        {
#pragma omp parallel for schedule(dynamic)
            for (std::ptrdiff_t i = 0; i < n; ++i)
                one(i);
        }
        else
            for (std::ptrdiff_t i = 0; i < n; ++i)
                one(i);

        TwinRow row;
        row.N = N;
        row.lag = grid;
        std::vector<std::vector<double>> per_lag(grid.size());
        for (auto const& r : res)
        {
            if (!r.found)
                continue;
            ++row.found;
            auto const& tr = r.trace;
            double const tm = 1 / tr.speed;
            row.T_m.push_back(tm);
            double sup = 0;
            std::size_t j = 0;
            for (std::size_t i = 0; i < tr.lag.size() && j < grid.size(); ++i)
            {
                sup = std::max(sup, tr.dX[i]);
                while (j < grid.size() && tr.lag[i] >= grid[j])
                    per_lag[j++].push_back(N * sup);
            }
            for (std::size_t i = 0; i < tr.lag.size(); ++i)
                if (tr.lag[i] >= 5 * tm)
                {
                    if (tr.dX_corr[i] > 0)
                        row.ratio.push_back(tr.dX[i] / tr.dX_corr[i]);
                    break;
                }
        }
        for (auto const& v : per_lag)
            row.median_sup.push_back(2 * v.size() >= row.found && !v.empty()
                                         ? median(v)
                                         : std::numeric_limits<double>::quiet_NaN());
        row.median_ratio = median(row.ratio);
        all_tm.insert(all_tm.end(), row.T_m.begin(), row.T_m.end());
        all_ratio.insert(all_ratio.end(), row.ratio.begin(), row.ratio.end());
        st.rows.push_back(std::move(row));
    }

    st.T_m = median(all_tm);
    st.window_lo = tw.window_lo * st.T_m;
    st.window_hi = tw.window_hi * st.T_m;
    std::vector<double> x, y;
    for (auto const& row : st.rows)
        for (std::size_t j = 0; j < row.lag.size(); ++j)
            if (row.lag[j] >= st.window_lo && row.lag[j] <= st.window_hi
                && std::isfinite(row.median_sup[j]) && row.median_sup[j] > 0)
            {
                x.push_back(std::log(row.lag[j]));
                y.push_back(std::log(row.median_sup[j]));
            }
    st.slope = fit_line(x, y);
    double amin = std::numeric_limits<double>::infinity(), amax = 0;
    for (auto& row : st.rows)
    {
        double acc = 0;
        int cnt = 0;
        for (std::size_t j = 0; j < row.lag.size(); ++j)
            if (row.lag[j] >= st.window_lo && row.lag[j] <= st.window_hi
                && std::isfinite(row.median_sup[j]) && row.median_sup[j] > 0)
            {
                acc += std::log(row.median_sup[j]) - st.slope.slope * std::log(row.lag[j]);
                ++cnt;
            }
        row.amplitude = cnt ? std::exp(acc / cnt) : std::numeric_limits<double>::quiet_NaN();
        amin = std::min(amin, row.amplitude);
        amax = std::max(amax, row.amplitude);
    }
    st.amplitude_spread = amax / amin;
    st.pooled_ratio = median(all_ratio);

    st.checks.push_back(check("twin_slope", st.slope.slope, st.slope.slope_se,
                              format_number(tw.slope) + " +- " + format_number(tw.slope_tolerance),
                              st.slope.points >= 2
                                  && std::abs(st.slope.slope - tw.slope) <= tw.slope_tolerance));
    st.checks.push_back(check("twin_amplitude_inverse_N", st.amplitude_spread, 0,
                              "max/min N-scaled amplitude <= " + format_number(tw.amplitude_factor),
                              st.amplitude_spread <= tw.amplitude_factor));
    st.checks.push_back(check("twin_second_order_ratio", st.pooled_ratio, 0,
                              ">= " + format_number(tw.correction_factor),
                              st.pooled_ratio >= tw.correction_factor));
    return st;
}

BoundsStudy bounds_study(RunConfig const& c, std::uint64_t seed, Exec exec)
{
    BoundsStudy st;
    st.report = bounds_suite(c.bounds_config(), seed, exec);
    auto const& r = st.report;
    st.checks.push_back(check("cosh_benchmark", r.cosh_relative_error, r.cosh_error_estimate,
                              "<= " + format_number(c.bounds.cosh_tolerance), r.cosh_pass));
    auto worst = [](std::vector<GronwallReport> const& v, bool stab) {
        double m = 0;
        for (auto const& g : v)
            m = std::max(m, stab ? g.stability : g.c_hat / g.c_bound);
        return m;
    };
    st.checks.push_back(check("gronwall_simple", worst(r.simple, false), worst(r.simple, true),
                              "c_hat <= explicit constant, stability <= "
                                  + format_number(c.bounds.stability_limit),
                              r.simple_pass));
    st.checks.push_back(check("gronwall_averaged", worst(r.averaged, false),
                              worst(r.averaged, true),
                              "c_hat <= explicit constant, stability <= "
                                  + format_number(c.bounds.stability_limit),
                              r.averaged_pass));
    st.checks.push_back(check("peano_baker_vs_rk4", r.pb_difference, r.pb_tolerance,
                              "<= combined tolerance", r.pb_pass));
    return st;
}

}  // namespace landau
