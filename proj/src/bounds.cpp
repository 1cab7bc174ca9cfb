// SPDX-License-Identifier: Apache-2.0
#include "landau/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "landau/quadrature.hpp"

namespace landau {

namespace {

double op_norm(MatrixXd const& m)
{
    if (m.size() == 0)
        return 0;
    Eigen::JacobiSVD<MatrixXd> svd(m);
    return svd.singularValues()(0);
}

std::size_t step_count(double span, double dt)
{
    if (!(dt > 0))
        throw std::invalid_argument("dt: must be positive");
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt - 1e-9)));
}

}  // namespace

void rk4_advance(LinearSecondOrderProblem const& p, double t0, double t1,
                 std::size_t steps, VectorXd& x, VectorXd& v)
{
    double const h = (t1 - t0) / static_cast<double>(steps);
    auto acc = [&](double t, VectorXd const& y) { return VectorXd(p.a(t) * y + p.b(t)); };
    for (std::size_t i = 0; i < steps; ++i)
    {
        double const t = t0 + h * static_cast<double>(i);
        VectorXd const k1x = v;
        VectorXd const k1v = acc(t, x);
        VectorXd const k2x = v + 0.5 * h * k1v;
        VectorXd const k2v = acc(t + 0.5 * h, x + 0.5 * h * k1x);
        VectorXd const k3x = v + 0.5 * h * k2v;
        VectorXd const k3v = acc(t + 0.5 * h, x + 0.5 * h * k2x);
        VectorXd const k4x = v + h * k3v;
        VectorXd const k4v = acc(t + h, x + h * k3x);
        x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
        v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
}

LinearTrajectory solve_linear_second_order(LinearSecondOrderProblem const& p,
                                           double dt)
{
    std::size_t const n = step_count(p.T, dt);
    double const h = p.T / static_cast<double>(n);
    LinearTrajectory out;
    VectorXd x = p.x0, v = p.v0;
    VectorXd xf = p.x0, vf = p.v0;
    out.t.push_back(0);
    out.x.push_back(x);
    out.v.push_back(v);
    for (std::size_t i = 0; i < n; ++i)
    {
        double const t0 = h * static_cast<double>(i);
        double const t1 = h * static_cast<double>(i + 1);
        rk4_advance(p, t0, t1, 1, x, v);
        rk4_advance(p, t0, t1, 2, xf, vf);
        out.t.push_back(t1);
        out.x.push_back(x);
        out.v.push_back(v);
        double const e = std::sqrt((x - xf).squaredNorm() + (v - vf).squaredNorm());
        out.error_estimate = std::max(out.error_estimate, 2 * e);
    }
    return out;
}

LinearSecondOrderProblem cosh_problem(int dim, double N, double a0, double b0)
{
    LinearSecondOrderProblem p;
    double const ca = std::pow(N, -a0);
    double const cb = std::pow(N, -b0);
    p.a = [dim, ca](double) { return MatrixXd(ca * MatrixXd::Identity(dim, dim)); };
    p.b = [dim, cb](double) { return VectorXd(VectorXd::Constant(dim, cb)); };
    p.x0 = VectorXd::Zero(dim);
    p.v0 = VectorXd::Zero(dim);
    p.N = N;
    p.a_exp = a0;
    p.C_A = 1;
    p.T = std::pow(N, a0 / 2);
    return p;
}

double cosh_solution(double t, double N, double a0, double b0)
{
    return std::pow(N, a0 - b0) * (std::cosh(t * std::pow(N, -a0 / 2)) - 1);
}

char const* to_string(GronwallCase c)
{
    return c == GronwallCase::simple ? "simple" : "averaged";
}

double gronwall_simple_constant(double C_A)
{
    return std::exp(2 + C_A) / (2 + C_A) + 1;
}

double gronwall_averaged_constant(double C_avg)
{
    double const A = std::pow(C_avg * std::sqrt(std::numbers::pi) / 2, 2.0 / 3.0);
    return 2 * (1 + std::sqrt(A)) * std::exp(A);
}

namespace {

std::string check_hypotheses(LinearSecondOrderProblem const& p,
                             GronwallCase kind, double H)
{
    double const scale = std::pow(p.N, -p.a_exp);
    if (kind == GronwallCase::simple)
    {
        if (!std::isfinite(p.C_A))
            return "C_A: pointwise bound not declared";
        for (int i = 0; i < 100; ++i)
        {
            double const t = H * i / 99.0;
            double const n = op_norm(p.a(t));
            if (n > p.C_A * scale * (1 + 1e-12))
                return "C_A: |a(" + std::to_string(t) + ")| exceeds the declared bound";
        }
        return {};
    }
    if (!std::isfinite(p.C_avg))
        return "C_avg: averaged bound not declared";
    if (p.xi < 2 * p.a_exp / 3)
        return "xi: must be at least 2a/3";
    int const dim = p.dim();
    for (int i = 0; i < 100; ++i)
    {
        double const s = H * ((i * 37) % 100) / 100.0;
        double const t = s + (H - s) * ((i * 61) % 100 + 1) / 100.0;
        if (t - s > std::pow(p.N, p.xi))
            continue;
        int const panels = std::max(4, static_cast<int>(std::ceil((t - s) * 4)));
        QuadRule const q = composite_gauss_legendre(16, s, t, panels);
        MatrixXd I = MatrixXd::Zero(dim, dim);
        for (std::size_t k = 0; k < q.size(); ++k)
            I += q.w[k] * p.a(q.x[k]);
        if (op_norm(I) > p.C_avg * std::sqrt(t - s) * scale * (1 + 1e-9))
            return "C_avg: |int a| exceeds the declared averaged bound on ["
                   + std::to_string(s) + ", " + std::to_string(t) + "]";
    }
    return {};
}

}  // namespace

GronwallReport gronwall_check(LinearSecondOrderProblem const& p, double dt,
                              GronwallCase kind, double stability_limit)
{
    GronwallReport r;
    r.kind = kind;
    double H = kind == GronwallCase::simple
                   ? std::pow(p.N, p.a_exp / 2)
                   : std::min(std::pow(p.N, 2 * p.a_exp / 3), std::pow(p.N, p.xi));
    H = std::min(H, p.T);
    r.horizon = H;
    r.c_bound = kind == GronwallCase::simple ? gronwall_simple_constant(p.C_A)
                                             : gronwall_averaged_constant(p.C_avg);
    r.hypothesis_error = check_hypotheses(p, kind, H);
    r.hypotheses_ok = r.hypothesis_error.empty();

    LinearSecondOrderProblem q = p;
    q.T = H;
    LinearTrajectory const tr = solve_linear_second_order(q, dt);
    double sup_b = 0;
    for (std::size_t i = 0; i < tr.t.size(); ++i)
    {
        double const t = tr.t[i];
        sup_b = std::max(sup_b, p.b(t).norm());
        double const xn = tr.x[i].norm();
        double const vn = tr.v[i].norm();
        double const num = kind == GronwallCase::simple
                               ? xn + t * vn
                               : std::sqrt(xn * xn + t * t * vn * vn);
        double const den = t * t * sup_b
                           + std::sqrt(p.x0.squaredNorm() + t * t * p.v0.squaredNorm());
        double ratio = 0;
        if (num > 0)
            ratio = den > 0 ? num / den : std::numeric_limits<double>::infinity();
        r.c_hat = std::max(r.c_hat, ratio);
        if (t <= H / 2 * (1 + 1e-12))
            r.c_hat_half = std::max(r.c_hat_half, ratio);
    }
    r.stability = r.c_hat_half > 0 ? r.c_hat / r.c_hat_half : 1.0;
    r.pass = r.hypotheses_ok && std::isfinite(r.c_hat) && r.c_hat <= r.c_bound
             && r.stability <= stability_limit;
    return r;
}

PeanoBakerResult peano_baker(MatrixFn const& A, int n, double s, double t,
                             int K, double dt)
{
    if (t < s)
        throw std::invalid_argument("peano_baker: t must be at least s");
    if (K < 0)
        throw std::invalid_argument("peano_baker: K must be non-negative");
    PeanoBakerResult r;
    r.Phi = MatrixXd::Identity(n, n);
    if (t == s || K == 0)
    {
        if (t > s)
        {
            r.a_sup = op_norm(A(s));
            r.first_omitted = (t - s) * r.a_sup;
            r.tail_bound = r.first_omitted * std::exp((t - s) * r.a_sup);
        }
        return r;
    }
    std::size_t const m = step_count(t - s, dt);
    double const h = (t - s) / static_cast<double>(m);
    std::vector<MatrixXd> Ag(m + 1);
    for (std::size_t j = 0; j <= m; ++j)
    {
        Ag[j] = A(s + h * static_cast<double>(j));
        r.a_sup = std::max(r.a_sup, op_norm(Ag[j]));
    }
    std::vector<MatrixXd> prev(m + 1, MatrixXd::Identity(n, n));
    std::vector<MatrixXd> cur(m + 1);
    for (int k = 1; k <= K; ++k)
    {
        cur[0] = MatrixXd::Zero(n, n);
        MatrixXd left = Ag[0] * prev[0];
        for (std::size_t j = 1; j <= m; ++j)
        {
            MatrixXd right = Ag[j] * prev[j];
            cur[j] = cur[j - 1] + 0.5 * h * (left + right);
            left = std::move(right);
        }
        r.Phi += cur[m];
        std::swap(prev, cur);
    }
    double const x = (t - s) * r.a_sup;
    double const log_term = (K + 1) * std::log(x) - std::lgamma(K + 2.0);
    r.first_omitted = x > 0 ? std::exp(log_term) : 0.0;
    r.tail_bound = r.first_omitted * std::exp(x);
    return r;
}

MatrixFn second_order_generator(MatrixFn a, int dim)
{
    return [a = std::move(a), dim](double t) {
        MatrixXd G = MatrixXd::Zero(2 * dim, 2 * dim);
        G.topRightCorner(dim, dim) = MatrixXd::Identity(dim, dim);
        G.bottomLeftCorner(dim, dim) = a(t);
        return G;
    };
}

LinearSecondOrderProblem random_certified_problem(int dim, double N, double a0,
                                                  double C_avg_target,
                                                  RngStream& rng)
{
    int const terms = 3;
    std::vector<MatrixXd> M(terms);
    std::vector<double> w(terms), phase(terms), m(terms);
    double raw = 0;
    for (int j = 0; j < terms; ++j)
    {
        MatrixXd G(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                G(r, c) = rng.normal();
        MatrixXd S = 0.5 * (G + G.transpose());
        M[j] = S / op_norm(S);
        w[j] = 0.5 + 7.5 * rng.uniform();
        phase[j] = 2 * std::numbers::pi * rng.uniform();
        m[j] = 0.2 + 0.8 * rng.uniform();
        raw += m[j] * std::sqrt(2 / w[j]);
    }
    double C_A = 0;
    for (int j = 0; j < terms; ++j)
    {
        m[j] *= C_avg_target / raw;
        C_A += m[j];
    }
    VectorXd b0(dim), b1(dim);
    for (int i = 0; i < dim; ++i)
    {
        b0[i] = rng.normal();
        b1[i] = rng.normal();
    }
    double const nu = 0.2 + 1.8 * rng.uniform();
    double const scale = std::pow(N, -a0);

    LinearSecondOrderProblem p;
    p.a = [=](double t) {
        MatrixXd out = MatrixXd::Zero(dim, dim);
        for (int j = 0; j < terms; ++j)
            out += m[j] * std::cos(w[j] * t + phase[j]) * M[j];
        return MatrixXd(scale * out);
    };
    p.b = [=](double t) { return VectorXd(b0 + std::sin(nu * t) * b1); };
    p.x0 = VectorXd::Zero(dim);
    p.v0 = VectorXd::Zero(dim);
    p.N = N;
    p.a_exp = a0;
    p.C_A = C_A;
    p.C_avg = C_avg_target;
    p.T = std::pow(N, 2 * a0 / 3);
    return p;
}

BoundsReport bounds_suite(BoundsConfig const& cfg, std::uint64_t seed, Exec exec)
{
    BoundsReport rep;

    LinearSecondOrderProblem const cp = cosh_problem(cfg.dim, cfg.N, cfg.a0, cfg.b0);
    LinearTrajectory const ct = solve_linear_second_order(cp, cfg.dt);
    rep.cosh_value = ct.x.back()[0];
    rep.cosh_exact = cosh_solution(cp.T, cfg.N, cfg.a0, cfg.b0);
    rep.cosh_relative_error = std::abs(rep.cosh_value - rep.cosh_exact) / std::abs(rep.cosh_exact);
    rep.cosh_error_estimate = ct.error_estimate;
    rep.cosh_gronwall = gronwall_check(cp, cfg.dt, GronwallCase::simple, cfg.stability_limit);
    rep.cosh_pass = rep.cosh_relative_error <= cfg.cosh_tolerance && rep.cosh_gronwall.pass;

    auto const n = static_cast<std::ptrdiff_t>(cfg.problems);
    rep.simple.resize(cfg.problems);
    rep.averaged.resize(cfg.problems);
    auto one = [&](std::ptrdiff_t i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i), Substream::analysis);
        auto const p = random_certified_problem(cfg.dim, cfg.N, cfg.a0, cfg.C_avg, rng);
        rep.simple[i] = gronwall_check(p, cfg.dt, GronwallCase::simple, cfg.stability_limit);
        rep.averaged[i] = gronwall_check(p, cfg.dt, GronwallCase::averaged, cfg.stability_limit);
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
    auto ok = [](std::vector<GronwallReport> const& v) {
        return std::all_of(v.begin(), v.end(), [](GronwallReport const& r) { return r.pass; });
    };
    rep.simple_pass = ok(rep.simple);
    rep.averaged_pass = ok(rep.averaged);

    RngStream rng(seed, static_cast<std::uint64_t>(cfg.problems), Substream::analysis);
    LinearSecondOrderProblem p = random_certified_problem(cfg.dim, 1.0, cfg.a0, 1.0, rng);
    p.b = [dim = cfg.dim](double) { return VectorXd(VectorXd::Zero(dim)); };
    for (int i = 0; i < cfg.dim; ++i)
    {
        p.x0[i] = rng.normal();
        p.v0[i] = rng.normal();
    }
    p.T = 4;
    MatrixFn const G = second_order_generator(p.a, cfg.dim);
    auto const pb = peano_baker(G, 2 * cfg.dim, 0, p.T, cfg.pb_order, cfg.pb_dt);
    auto const pb_half = peano_baker(G, 2 * cfg.dim, 0, p.T, cfg.pb_order, cfg.pb_dt / 2);
    VectorXd Y0(2 * cfg.dim);
    Y0 << p.x0, p.v0;
    LinearTrajectory const tr = solve_linear_second_order(p, cfg.dt);
    VectorXd Yr(2 * cfg.dim);
    Yr << tr.x.back(), tr.v.back();
    rep.pb_difference = (pb.Phi * Y0 - Yr).norm();
    double const quad = 2 * op_norm(pb.Phi - pb_half.Phi) * Y0.norm();
    rep.pb_tolerance = pb.tail_bound * Y0.norm() + quad + tr.error_estimate;
    rep.pb_pass = rep.pb_difference <= rep.pb_tolerance;
    return rep;
}

}  // namespace landau
