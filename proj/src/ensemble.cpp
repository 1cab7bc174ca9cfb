// SPDX-License-Identifier: Apache-2.0
#include "landau/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "landau/quadrature.hpp"

namespace landau {
namespace {

double norm_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double norm_pdf(double x)
{
    return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
}

void random_direction(RngStream& rng, int d, double* u)
{
    double n2 = 0;
    do
    {
        n2 = 0;
        for (int k = 0; k < d; ++k)
        {
            u[k] = rng.normal();
            n2 += u[k] * u[k];
        }
    } while (n2 == 0);
    double inv = 1 / std::sqrt(n2);
    for (int k = 0; k < d; ++k)
        u[k] *= inv;
}

double wrap(double a, double L)
{
    a -= L * std::floor(a / L + 0.5);
    if (a >= 0.5 * L)
        a -= L;
    return a;
}

}  // namespace

InitialLaw::InitialLaw(Kind k, std::vector<double> mean, double scale)
    : kind_{k}, mean_{std::move(mean)}, scale_{scale}
{
    int const d = dim();
    if (d < 1)
        throw std::invalid_argument("initial_law: dimension must be >= 1");
    if (kind_ == Kind::gaussian_ratio)
    {
        if (!(scale_ > 0 && scale_ < 1))
            throw std::invalid_argument(
                "initial_law.scale: must lie in (0, 1) for a bounded g0");
        // maximizer of |v|^2/2 - |v - m|^2 / (2 s^2)
        double const s2 = scale_ * scale_;
        std::vector<double> vstar(d);
        for (int k = 0; k < d; ++k)
            vstar[k] = mean_[k] / (1 - s2);
        sup_ = value(vstar.data());
    }
    double norm = normalization();
    if (std::abs(norm - 1) > 1e-6)
        throw std::invalid_argument("initial_law: g0 gamma is not normalized");
}

InitialLaw InitialLaw::one(int d)
{
    return InitialLaw(Kind::one, std::vector<double>(d, 0.0), 1.0);
}

InitialLaw InitialLaw::gaussian_ratio(std::vector<double> mean, double scale)
{
    return InitialLaw(Kind::gaussian_ratio, std::move(mean), scale);
}

double InitialLaw::value(double const* v) const
{
    if (kind_ == Kind::one)
        return 1;
    int const d = dim();
    double const s2 = scale_ * scale_;
    double e = 0;
    for (int k = 0; k < d; ++k)
    {
        double dv = v[k] - mean_[k];
        e += 0.5 * v[k] * v[k] - 0.5 * dv * dv / s2;
    }
    return std::exp(e) / std::pow(scale_, d);
}

double InitialLaw::normalization() const
{
    if (kind_ == Kind::one)
        return 1;
    // The descriptor factorizes over coordinates
    double prod = 1;
    for (int k = 0; k < dim(); ++k)
    {
        double const m = mean_[k], s = scale_;
        QuadRule rule = composite_gauss_legendre(16, m - 14 * s, m + 14 * s, 8);
        double acc = integrate(rule, [&](double x) {
            double dv = x - m;
            return std::exp(0.5 * x * x - 0.5 * dv * dv / (s * s)) / s
                   * norm_pdf(x);
        });
        prod *= acc;
    }
    return prod;
}

void InitialLaw::sample(RngStream& rng, double* v) const
{
    int const d = dim();
    for (int attempt = 0; attempt < kMaxRejections; ++attempt)
    {
        for (int k = 0; k < d; ++k)
            v[k] = rng.normal();
        if (kind_ == Kind::one)
            return;
        if (rng.uniform() * sup_ <= value(v))
            return;
    }
    throw std::runtime_error("initial_law: rejection sampler failed");
}

double gibbs_correction(Potential const& phi, double N)
{
    int const d = phi.dim();
    QuadRule rule = gauss_legendre(64, 0, phi.range());
    double acc = integrate(rule, [&](double r) {
        return std::pow(r, d - 1) * std::expm1(-phi.radial(r) / N);
    });
    return N * sphere_area(d) * acc;
}

namespace {

void sample_gibbs_positions(Potential const& phi, double N, std::size_t count,
                            RngStream& rng, InitialConfiguration& cfg,
                            auto&& propose)
{
    int const d = cfg.d;
    std::vector<double> y(d), x(d);
    cfg.x.reserve(count * d);
    for (std::size_t i = 0; i < count; ++i)
    {
        int attempt = 0;
        for (;; ++attempt)
        {
            if (attempt >= kMaxRejections)
                throw std::runtime_error(
                    "sample_initial_configuration: rejection failure");
            propose(x.data(), y.data());
            if (rng.uniform() <= std::exp(-phi.value(y.data()) / N))
                break;
        }
        cfg.x.insert(cfg.x.end(), x.begin(), x.end());
    }
    cfg.v.resize(count * d);
    for (auto& c : cfg.v)
        c = rng.normal();
}

}  // namespace

InitialConfiguration sample_initial_configuration(Potential const& phi,
                                                  InitialLaw const& law,
                                                  double L, double N,
                                                  RngStream& rng)
{
    int const d = phi.dim();
    if (!(L > 4 * phi.range()))
        throw std::invalid_argument("torus_side: L must exceed 4R");
    if (!(N >= 1))
        throw std::invalid_argument("N: must be >= 1");
    if (law.dim() != d)
        throw std::invalid_argument("initial_law: dimension mismatch");
    InitialConfiguration cfg;
    cfg.d = d;
    cfg.torus_side = L;
    cfg.density = N;
    cfg.X.resize(d);
    cfg.V.resize(d);
    law.sample(rng, cfg.V.data());
    for (int k = 0; k < d; ++k)
        cfg.X[k] = L * (rng.uniform() - 0.5);
    double const mean = N * std::pow(L, d) + gibbs_correction(phi, N);
    std::size_t const count = rng.poisson(mean);
    sample_gibbs_positions(
        phi, N, count, rng, cfg, [&](double* x, double* y) {
            for (int k = 0; k < d; ++k)
            {
                x[k] = L * (rng.uniform() - 0.5);
                y[k] = wrap(cfg.X[k] - x[k], L);
            }
        });
    return cfg;
}

InitialConfiguration sample_ball_configuration(Potential const& phi,
                                               InitialLaw const& law,
                                               double radius, double N,
                                               RngStream& rng)
{
    int const d = phi.dim();
    if (!(radius >= phi.range()))
        throw std::invalid_argument("reservoir: R_act must be >= R");
    InitialConfiguration cfg;
    cfg.d = d;
    cfg.torus_side = radius;
    cfg.density = N;
    cfg.X.assign(d, 0.0);
    cfg.V.resize(d);
    law.sample(rng, cfg.V.data());
    double const mean = N * ball_volume(d) * std::pow(radius, d)
                        + gibbs_correction(phi, N);
    std::size_t const count = rng.poisson(mean);
    std::vector<double> u(d);
    sample_gibbs_positions(
        phi, N, count, rng, cfg, [&](double* x, double* y) {
            random_direction(rng, d, u.data());
            double r = radius * std::pow(rng.uniform(), 1.0 / d);
            for (int k = 0; k < d; ++k)
            {
                x[k] = r * u[k];
                y[k] = -x[k];
            }
        });
    return cfg;
}

double influx_rate(double const* V, int d, double R_act, double N)
{
    double speed = 0;
    for (int k = 0; k < d; ++k)
        speed += V[k] * V[k];
    speed = std::sqrt(speed);
    static QuadRule const rule = gauss_legendre(128, 0, std::numbers::pi);
    double acc = integrate(rule, [&](double th) {
        double m = speed * std::cos(th);
        return std::pow(std::sin(th), d - 2) * (m * norm_cdf(m) + norm_pdf(m));
    });
    return N * std::pow(R_act, d - 1) * sphere_area(d - 1) * acc;
}

void sample_flux_pair(double const* V, int d, RngStream& rng, double* n,
                      double* v)
{
    double speedV = 0;
    for (int k = 0; k < d; ++k)
        speedV += V[k] * V[k];
    speedV = std::sqrt(speedV);
    // E|v| under gamma: mean of a chi variable with d degrees of freedom
    double const mean_speed = std::numbers::sqrt2 * std::tgamma(0.5 * (d + 1))
                              / std::tgamma(0.5 * d);
    double const p_shift = speedV / (speedV + mean_speed);
    std::vector<double> u(d), w(d);
    double wn = 0;
    int attempt = 0;
    for (;; ++attempt)
    {
        if (attempt >= kMaxRejections)
            throw std::runtime_error("sample_influx: rejection failure");
        if (rng.uniform() < p_shift)
        {
            for (int k = 0; k < d; ++k)
                v[k] = rng.normal();
        }
        else
        {
            // gamma(v)|v|: radius is chi with d + 1 degrees of freedom
            double r2 = 0;
            for (int k = 0; k <= d; ++k)
            {
                double z = rng.normal();
                r2 += z * z;
            }
            random_direction(rng, d, u.data());
            double r = std::sqrt(r2);
            for (int k = 0; k < d; ++k)
                v[k] = r * u[k];
        }
        double vn = 0;
        wn = 0;
        for (int k = 0; k < d; ++k)
        {
            vn += v[k] * v[k];
            w[k] = v[k] - V[k];
            wn += w[k] * w[k];
        }
        vn = std::sqrt(vn);
        wn = std::sqrt(wn);
        if (wn > 0 && rng.uniform() * (speedV + vn) <= wn)
            break;
    }
    for (int k = 0; k < d; ++k)
        w[k] /= wn;
    // Cosine-weighted normal: uniform point in the tangent (d-1)-ball, lifted
    double proj = 0;
    do
    {
        random_direction(rng, d, u.data());
        proj = 0;
        for (int k = 0; k < d; ++k)
            proj += u[k] * w[k];
        double t2 = 0;
        for (int k = 0; k < d; ++k)
        {
            u[k] -= proj * w[k];
            t2 += u[k] * u[k];
        }
        proj = t2;
    } while (proj < 1e-24);
    double const inv = 1 / std::sqrt(proj);
    double const rho = std::pow(rng.uniform(), 1.0 / (d - 1));
    double const lift = std::sqrt(std::max(0.0, 1 - rho * rho));
    for (int k = 0; k < d; ++k)
        n[k] = rho * u[k] * inv - lift * w[k];
}

void sample_influx(double const* X, double const* V, int d, double R_act,
                   double dt, double N, RngStream& rng,
                   std::vector<Injected>& out)
{
    out.clear();
    double const rate = influx_rate(V, d, R_act, N);
    std::uint64_t const count = rng.poisson(rate * dt);
    std::vector<double> n(d);
    for (std::uint64_t i = 0; i < count; ++i)
    {
        Injected p;
        p.x.resize(d);
        p.v.resize(d);
        sample_flux_pair(V, d, rng, n.data(), p.v.data());
        double const eps = dt * rng.uniform();
        for (int k = 0; k < d; ++k)
            p.x[k] = X[k] + R_act * n[k] + eps * (p.v[k] - V[k]);
        out.push_back(std::move(p));
    }
}

}  // namespace landau
