// SPDX-License-Identifier: Apache-2.0
#include "landau/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace landau {

void ExactSum::add(double x)
{
    std::size_t i = 0;
    for (std::size_t j = 0; j < partials_.size(); ++j)
    {
        double y = partials_[j];
        if (std::abs(x) < std::abs(y))
            std::swap(x, y);
        double const hi = x + y;
        double const lo = y - (hi - x);
        if (lo != 0)
            partials_[i++] = lo;
        x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
}

void ExactSum::merge(ExactSum const& o)
{
    for (double p : o.partials_)
        add(p);
}

double ExactSum::value() const
{
    if (partials_.empty())
        return 0;
    std::size_t j = partials_.size() - 1;
    double hi = partials_[j];
    double lo = 0;
    while (j > 0)
    {
        double const x = hi;
        double const y = partials_[--j];
        hi = x + y;
        double const yr = hi - x;
        lo = y - yr;
        if (lo != 0)
            break;
    }
    if (j > 0 && ((lo < 0 && partials_[j - 1] < 0)
                  || (lo > 0 && partials_[j - 1] > 0)))
    {
        double const y = lo * 2;
        double const x = hi + y;
        if (y == x - hi)
            hi = x;
    }
    return hi;
}

double MomentAccumulator::mean() const
{
    return n ? s1.value() / static_cast<double>(n) : 0.0;
}

double MomentAccumulator::variance() const
{
    if (n < 2)
        return 0;
    double const m = mean();
    double const nn = static_cast<double>(n);
    return std::max(0.0, (s2.value() / nn - m * m) * nn / (nn - 1));
}

double MomentAccumulator::std_error() const
{
    return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

double kolmogorov_sf(double lambda)
{
    if (lambda <= 0)
        return 1;
    if (lambda < 1)
    {
        // theta-function form, fast for small lambda
        double const pi2 = std::numbers::pi * std::numbers::pi;
        double acc = 0;
        for (int k = 1; k <= 50; ++k)
        {
            double const j = 2.0 * k - 1;
            acc += std::exp(-j * j * pi2 / (8 * lambda * lambda));
        }
        return std::clamp(1 - std::sqrt(2 * std::numbers::pi) / lambda * acc,
                          0.0, 1.0);
    }
    double acc = 0;
    for (int k = 1; k <= 100; ++k)
    {
        double const term = std::exp(-2.0 * k * k * lambda * lambda);
        acc += (k % 2 ? 2 : -2) * term;
        if (term < 1e-300)
            break;
    }
    return std::clamp(acc, 0.0, 1.0);
}

namespace {

std::vector<double> sorted(std::span<double const> a)
{
    std::vector<double> s(a.begin(), a.end());
    std::sort(s.begin(), s.end());
    return s;
}

double ks_statistic(std::vector<double> const& a, std::vector<double> const& b)
{
    std::size_t i = 0, j = 0;
    double const n = static_cast<double>(a.size());
    double const m = static_cast<double>(b.size());
    double D = 0;
    while (i < a.size() && j < b.size())
    {
        double const x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x)
            ++i;
        while (j < b.size() && b[j] == x)
            ++j;
        D = std::max(D, std::abs(static_cast<double>(i) / n
                                 - static_cast<double>(j) / m));
    }
    return D;
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace

double ks_two_sample_exact_sf(std::size_t n, std::size_t m, double d)
{
    if (n == 0 || m == 0)
        return 1;
    double const crit = d * static_cast<double>(n) * static_cast<double>(m)
                        - 1e-7;
    auto inside = [&](std::size_t i, std::size_t j) {
        double const gap = std::abs(static_cast<double>(i) * m
                                    - static_cast<double>(j) * n);
        return gap < crit;
    };
    // paths from (0,0) to (n,m) staying strictly inside the band, each
    // weighted by 1 / C(n+m, n) through a per-step probability recursion
    std::vector<double> row(m + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
    {
        for (std::size_t j = 0; j <= m; ++j)
        {
            double u = 0;
            if (i == 0 && j == 0)
                u = 1;
            else
            {
                if (i > 0)
                    u += row[j] * static_cast<double>(i)
                         / static_cast<double>(i + j);
                if (j > 0)
                    u += row[j - 1] * static_cast<double>(j)
                         / static_cast<double>(i + j);
            }
            row[j] = inside(i, j) ? u : 0.0;
        }
    }
    return std::clamp(1 - row[m], 0.0, 1.0);
}

TestResult ks_two_sample(std::span<double const> a, std::span<double const> b,
                         std::size_t exact_limit)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    auto const sa = sorted(a);
    auto const sb = sorted(b);
    TestResult r;
    r.statistic = ks_statistic(sa, sb);
    if (a.size() + b.size() <= exact_limit)
        r.p_value = ks_two_sample_exact_sf(a.size(), b.size(), r.statistic);
    else
    {
        double const ne = static_cast<double>(a.size()) * b.size()
                          / (a.size() + b.size());
        double const sn = std::sqrt(ne);
        r.p_value = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * r.statistic);
    }
    return r;
}

TestResult ks_normal(std::span<double const> a, double mean, double sd)
{
    if (a.empty())
        throw std::invalid_argument("ks_normal: empty sample");
    auto const s = sorted(a);
    double const n = static_cast<double>(s.size());
    double D = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        double const F = normal_cdf((s[i] - mean) / sd);
        D = std::max({D, (i + 1) / n - F, F - i / n});
    }
    double const sn = std::sqrt(n);
    return {D, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * D)};
}

double wasserstein1(std::span<double const> a, std::span<double const> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("wasserstein1: empty sample");
    auto const sa = sorted(a);
    auto const sb = sorted(b);
    double const n = static_cast<double>(sa.size());
    double const m = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double prev = std::min(sa[0], sb[0]);
    ExactSum acc;
    while (i < sa.size() || j < sb.size())
    {
        double x;
        if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j]))
            x = sa[i];
        else
            x = sb[j];
        acc.add(std::abs(static_cast<double>(i) / n
                         - static_cast<double>(j) / m)
                * (x - prev));
        while (i < sa.size() && sa[i] == x)
            ++i;
        while (j < sb.size() && sb[j] == x)
            ++j;
        prev = x;
    }
    return acc.value();
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z)
{
    if (n == 0)
        return {0, 1};
    double const nn = static_cast<double>(n);
    double const p = static_cast<double>(k) / nn;
    double const z2 = z * z;
    double const den = 1 + z2 / nn;
    double const c = (p + z2 / (2 * nn)) / den;
    double const h = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / den;
    return {std::max(0.0, c - h), std::min(1.0, c + h)};
}

LineFit fit_line(std::span<double const> x, std::span<double const> y)
{
    LineFit f;
    std::size_t const n = std::min(x.size(), y.size());
    f.points = n;
    if (n < 2)
        return f;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2)
    {
        double rss = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            double const e = y[i] - f.intercept - f.slope * x[i];
            rss += e * e;
        }
        f.slope_se = std::sqrt(rss / (n - 2) / sxx);
    }
    return f;
}

std::size_t PathView::index_of(double s) const
{
    if (t.empty())
        throw std::invalid_argument("path: empty");
    auto it = std::lower_bound(t.begin(), t.end(), s);
    std::size_t i = static_cast<std::size_t>(it - t.begin());
    if (i == t.size())
        --i;
    if (i > 0 && std::abs(t[i - 1] - s) < std::abs(t[i] - s))
        --i;
    double const h = t.size() > 1 ? t[1] - t[0] : 1.0;
    if (std::abs(t[i] - s) > 1e-6 * h + 1e-12 * std::abs(s))
        throw std::invalid_argument("tau grid: time " + std::to_string(s)
                                    + " is not on the sampling grid");
    return i;
}

TestFunctionBundle TestFunctionBundle::coordinate(int d, int k)
{
    TestFunctionBundle b;
    b.f = [k](VectorXd const& v) { return v[k]; };
    b.grad = [d, k](VectorXd const&) {
        VectorXd g = VectorXd::Zero(d);
        g[k] = 1;
        return g;
    };
    b.hess = [d](VectorXd const&) { return MatrixXd::Zero(d, d); };
    return b;
}

Estimate martingale_residual(std::vector<PathView> const& paths,
                             TestFunctionBundle const& bundle,
                             std::vector<double> const& taus, double N,
                             CoefficientTable const& table)
{
    if (taus.size() < 2 || bundle.g.size() + 1 != taus.size())
        throw std::invalid_argument(
            "martingale_residual: need one g per tau plus the final time");
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (!(taus[i] > taus[i - 1]))
            throw std::invalid_argument("tau grid: must be increasing");
    MomentAccumulator acc;
    for (PathView const& p : paths)
    {
        int const d = p.d;
        auto vec = [&](std::size_t i) {
            return VectorXd(Eigen::Map<VectorXd const>(p.at(i), d));
        };
        double G = 1;
        for (std::size_t i = 0; i < bundle.g.size(); ++i)
            G *= bundle.g[i](vec(p.index_of(taus[i] * N)));
        std::size_t const i0 = p.index_of(taus[taus.size() - 2] * N);
        std::size_t const i1 = p.index_of(taus.back() * N);
        double integral = 0;
        double prev = 0;
        for (std::size_t i = i0; i <= i1; ++i)
        {
            VectorXd const v = vec(i);
            double const Lf = table.generator(v, bundle.grad(v), bundle.hess(v));
            if (i > i0)
                integral += 0.5 * (p.t[i] - p.t[i - 1]) * (prev + Lf);
            prev = Lf;
        }
        acc.add(G * (bundle.f(vec(i1)) - bundle.f(vec(i0)) - integral / N));
    }
    return {acc.mean(), acc.std_error(), acc.n};
}

IncrementMoments increment_moments(std::vector<PathView> const& paths, int p,
                                   std::vector<double> const& gaps)
{
    if (paths.size() < 2)
        throw std::invalid_argument("increment_moments: insufficient samples");
    IncrementMoments out;
    out.gaps = gaps;
    for (double g : gaps)
    {
        MomentAccumulator acc;
        for (PathView const& path : paths)
        {
            double const h = path.t[1] - path.t[0];
            auto const k = static_cast<std::size_t>(std::llround(g / h));
            if (k == 0 || k >= path.size())
                throw std::invalid_argument(
                    "increment_moments: gap outside the record horizon");
            ExactSum s;
            std::size_t count = 0;
            for (std::size_t i = 0; i + k < path.size(); ++i)
            {
                // uniform grid only; a shorter closing interval is skipped
                if (std::abs(path.t[i + k] - path.t[i] - k * h) > 1e-9 * k * h)
                    continue;
                double r2 = 0;
                for (int c = 0; c < path.d; ++c)
                {
                    double const e = path.at(i + k)[c] - path.at(i)[c];
                    r2 += e * e;
                }
                s.add(std::pow(r2, 0.5 * p));
                ++count;
            }
            acc.add(s.value() / static_cast<double>(count));
        }
        out.moments.push_back({acc.mean(), acc.std_error(), acc.n});
    }
    return out;
}

LineFit increment_exponent(IncrementMoments const& m, double N, double gmin,
                           double gmax)
{
    std::vector<double> x, y;
    for (std::size_t i = 0; i < m.gaps.size(); ++i)
        if (m.gaps[i] >= gmin && m.gaps[i] <= gmax && m.moments[i].value > 0)
        {
            x.push_back(std::log(m.gaps[i] / N));
            y.push_back(std::log(m.moments[i].value));
        }
    return fit_line(x, y);
}

double alpha_star(int d, double delta)
{
    return 1.0 / (4.0 * (d + 2)) + delta;
}

double beta_star(int d, double delta)
{
    double const dd = d;
    return (2 * dd * dd + 5 * dd + 4) / (2 * (dd + 2) * (dd + 4)) - delta;
}

namespace {

void finish_rate(ViolationRate& r)
{
    r.wilson = wilson_interval(r.violations, r.trials);
}

}  // namespace

FluctuationReport fluctuation_diagnostics(
    std::vector<TrajectoryRecord> const& records, double delta, double alpha,
    double beta, FluctuationThresholds const& th)
{
    if (records.empty())
        throw std::invalid_argument("fluctuation_diagnostics: no records");
    FluctuationReport rep;
    rep.d = records[0].d;
    rep.N = records[0].N;
    rep.delta = delta;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.fitted_C_tm.assign(6, 0.0);
    double const N = rep.N;
    double const window = std::pow(N, beta);
    for (TrajectoryRecord const& r : records)
    {
        if (r.sup_S.empty() || r.sup_tm.size() != 6)
            throw std::invalid_argument(
                "fluctuation_diagnostics: record lacks diagnostic accumulators");
        if (r.N != N)
            throw std::invalid_argument(
                "fluctuation_diagnostics: records mix densities");
        std::size_t const nI = r.sup_S.size();

        double sa = 0;
        for (double s : r.sup_S)
            sa = std::max(sa, s * s / N);
        double const ra = sa / std::pow(N, delta);
        rep.derivative_sup.worst_ratio = std::max(rep.derivative_sup.worst_ratio, ra);
        rep.derivative_sup.violations += ra > 1;
        ++rep.derivative_sup.trials;

        double const cb = static_cast<double>(r.sup_inside) / N;
        rep.fitted_C_int = std::max(rep.fitted_C_int, cb);
        rep.interacting_count.worst_ratio =
            std::max(rep.interacting_count.worst_ratio, cb / th.C_int);
        rep.interacting_count.violations += cb > th.C_int;
        ++rep.interacting_count.trials;

        bool vc = false;
        for (int k = 1; k <= 6; ++k)
        {
            double const scale = k <= 3 ? std::pow(N, 1 + delta)
                                        : std::pow(N, k / 3.0 + delta);
            double const c = r.sup_tm[k - 1] / scale;
            rep.fitted_C_tm[k - 1] = std::max(rep.fitted_C_tm[k - 1], c);
            rep.time_sums.worst_ratio =
                std::max(rep.time_sums.worst_ratio, c / th.C_tm);
            vc = vc || c > th.C_tm;
        }
        rep.time_sums.violations += vc;
        ++rep.time_sums.trials;

        double worst = 0;
        std::size_t const ns = r.diag_t.size();
        for (std::size_t a = 0; a < ns; ++a)
            for (std::size_t b = a + 1; b < ns; ++b)
            {
                double const gap = r.diag_t[b] - r.diag_t[a];
                if (gap > window)
                    break;
                double m = 0;
                for (std::size_t I = 0; I < nI; ++I)
                    m = std::max(m, std::abs(r.cum[b * nI + I] - r.cum[a * nI + I]));
                double const bound = std::sqrt(gap / N) * std::pow(N, alpha);
                worst = std::max(worst, m / N / bound);
            }
        rep.fitted_C_avg = std::max(rep.fitted_C_avg, worst);
        rep.time_averaged.worst_ratio =
            std::max(rep.time_averaged.worst_ratio, worst / th.C_avg);
        rep.time_averaged.violations += worst > th.C_avg;
        ++rep.time_averaged.trials;

        rep.cutoff_violations += r.cutoff_violations;
    }
    finish_rate(rep.derivative_sup);
    finish_rate(rep.interacting_count);
    finish_rate(rep.time_sums);
    finish_rate(rep.time_averaged);
    return rep;
}

RecollisionRow interaction_recollision_stats(
    std::vector<TrajectoryRecord> const& records, double c_T)
{
    RecollisionRow row;
    if (records.empty())
        return row;
    row.N = records[0].N;
    double const slow = std::pow(row.N, -kSlowExponent);
    for (TrajectoryRecord const& r : records)
    {
        EventSummary sm;
        classify_events(r, c_T, &sm);
        row.interactions += sm.interactions;
        row.recollisions += sm.recollisions;
        row.complete += sm.complete;
        row.within_bound += sm.within_bound;
        if (row.ratio_hist.empty())
        {
            row.ratio_edges = sm.ratio_edges;
            row.ratio_hist.assign(sm.ratio_hist.size(), 0);
        }
        for (std::size_t i = 0; i < sm.ratio_hist.size(); ++i)
            row.ratio_hist[i] += sm.ratio_hist[i];
        for (InteractionEvent const& e : r.events)
            row.slow += e.speed < slow;
    }
    row.frequency = row.interactions
                        ? static_cast<double>(row.recollisions) / row.interactions
                        : 0.0;
    row.wilson = wilson_interval(row.recollisions, row.interactions);
    row.within_fraction = row.complete ? static_cast<double>(row.within_bound)
                                             / row.complete
                                       : 1.0;
    return row;
}

bool DiagnosticsReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](CheckResult const& c) { return c.pass; });
}

std::string DiagnosticsReport::to_json() const
{
    nlohmann::ordered_json j;
    j["schema"] = "landau-tagged.diagnostics.v1";
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["version"] = version;
    j["all_pass"] = all_pass();
    auto& arr = j["checks"] = nlohmann::ordered_json::array();
    for (CheckResult const& c : checks)
        arr.push_back({{"name", c.name},
                       {"statistic", c.statistic},
                       {"uncertainty", c.uncertainty},
                       {"threshold", c.threshold},
                       {"pass", c.pass}});
    return j.dump(2);
}

}  // namespace landau
