// SPDX-License-Identifier: Apache-2.0
#include "landau/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "landau/quadrature.hpp"

namespace landau {

void PotentialSpec::validate() const
{
    if (!(R > 0))
        throw std::invalid_argument("potential.R: must be > 0");
    if (!(A >= 0))
        throw std::invalid_argument("potential.A: must be >= 0");
    if (p < 4)
        throw std::invalid_argument("potential.p: must be an integer >= 4");
    if (d < 2)
        throw std::invalid_argument("d: must be >= 2");
}

Potential::Potential(PotentialSpec spec) : spec_{spec}
{
    spec_.validate();
    inv_r2_ = 1 / (spec_.R * spec_.R);
}

double Potential::profile(int m, double s) const
{
    if (m > spec_.p || s >= spec_.R * spec_.R)
        return 0;
    double c = spec_.A;
    for (int j = 0; j < m; ++j)
        c *= -(spec_.p - j) * inv_r2_;
    double base = 1 - s * inv_r2_;
    double pw = 1;
    for (int j = 0; j < spec_.p - m; ++j)
        pw *= base;
    return c * pw;
}

double Potential::radial(double r) const
{
    return profile(0, r * r);
}

double Potential::radial_derivative(double r) const
{
    return 2 * r * profile(1, r * r);
}

double Potential::value(double const* x) const
{
    double s = 0;
    for (int i = 0; i < spec_.d; ++i)
        s += x[i] * x[i];
    return profile(0, s);
}

bool Potential::gradient(double const* x, double* g) const
{
    double s = 0;
    for (int i = 0; i < spec_.d; ++i)
        s += x[i] * x[i];
    if (s >= spec_.R * spec_.R)
    {
        for (int i = 0; i < spec_.d; ++i)
            g[i] = 0;
        return false;
    }
    double f1 = 2 * profile(1, s);
    for (int i = 0; i < spec_.d; ++i)
        g[i] = f1 * x[i];
    return true;
}

void Potential::hessian(double const* x, double* h) const
{
    int const d = spec_.d;
    double s = 0;
    for (int i = 0; i < d; ++i)
        s += x[i] * x[i];
    double f1 = profile(1, s), f2 = profile(2, s);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            h[i * d + j] = 4 * x[i] * x[j] * f2 + (i == j ? 2 * f1 : 0.0);
}

namespace {

// Sum over pairings of the remaining axes; `used` marks consumed slots
void pairing_sum(std::span<int const> axes, unsigned used, int blocks,
                 double prod, double const* x, double const* fm, double& acc)
{
    int const k = static_cast<int>(axes.size());
    int first = -1;
    for (int i = 0; i < k; ++i)
    {
        if (!(used & (1u << i)))
        {
            first = i;
            break;
        }
    }
    if (first < 0)
    {
        acc += fm[blocks] * prod;
        return;
    }
    unsigned u = used | (1u << first);
    pairing_sum(axes, u, blocks + 1, prod * 2 * x[axes[first]], x, fm, acc);
    for (int j = first + 1; j < k; ++j)
    {
        if ((u & (1u << j)) || axes[j] != axes[first])
            continue;
        pairing_sum(axes, u | (1u << j), blocks + 1, prod * 2, x, fm, acc);
    }
}

}  // namespace

double Potential::derivative_axes(std::span<int const> axes,
                                  double const* x) const
{
    int const k = static_cast<int>(axes.size());
    if (k > 4)
        throw std::invalid_argument("evaluate: derivative order above 4");
    if (k == 4 && spec_.p < 5)
        throw std::invalid_argument(
            "evaluate: order-4 derivatives require p >= 5");
    for (int a : axes)
        if (a < 0 || a >= spec_.d)
            throw std::invalid_argument("evaluate: axis out of range");
    double s = 0;
    for (int i = 0; i < spec_.d; ++i)
        s += x[i] * x[i];
    if (s >= spec_.R * spec_.R)
        return 0;
    double fm[5];
    for (int m = 0; m <= 4; ++m)
        fm[m] = profile(m, s);
    if (k == 0)
        return fm[0];
    double acc = 0;
    pairing_sum(axes, 0u, 0, 1.0, x, fm, acc);
    return acc;
}

double Potential::evaluate(std::span<int const> orders, double const* x) const
{
    if (static_cast<int>(orders.size()) != spec_.d)
        throw std::invalid_argument("evaluate: multi-index length must be d");
    std::vector<int> axes;
    for (int i = 0; i < spec_.d; ++i)
    {
        if (orders[i] < 0)
            throw std::invalid_argument("evaluate: negative order");
        for (int j = 0; j < orders[i]; ++j)
            axes.push_back(i);
        if (axes.size() > 4)
            throw std::invalid_argument("evaluate: derivative order above 4");
    }
    return derivative_axes(axes, x);
}

namespace {

// J_nu(z) / z^nu, finite at z = 0
double normalized_bessel(double nu, double z)
{
    if (z < 1e-3)
    {
        double z2 = 0.25 * z * z;
        double lead = 1 / (std::pow(2.0, nu) * std::tgamma(nu + 1));
        return lead * (1 - z2 / (nu + 1) + z2 * z2 / (2 * (nu + 1) * (nu + 2)));
    }
    return std::cyl_bessel_j(nu, z) / std::pow(z, nu);
}

}  // namespace

double fourier_radial_fixed(PotentialSpec const& spec, double kappa, int nodes)
{
    if (nodes < 2)
        throw std::invalid_argument("fourier_radial: need at least 2 nodes");
    if (kappa < 0)
        throw std::invalid_argument("fourier_radial: kappa must be >= 0");
    Potential phi(spec);
    int const d = spec.d;
    double const nu = 0.5 * d - 1;
    QuadRule rule = gauss_legendre(nodes, 0, spec.R);
    double acc = 0;
    for (std::size_t i = 0; i < rule.size(); ++i)
    {
        double r = rule.x[i];
        acc += rule.w[i] * std::pow(r, d - 1) * phi.radial(r)
               * normalized_bessel(nu, kappa * r);
    }
    return std::pow(2 * std::numbers::pi, 0.5 * d) * acc;
}

double fourier_radial(PotentialSpec const& spec, double kappa, int nodes)
{
    double prev = fourier_radial_fixed(spec, kappa, nodes);
    double floor = 1e-15 * std::abs(fourier_radial_fixed(spec, 0.0, nodes));
    for (int n = 2 * nodes; n <= 64 * nodes; n *= 2)
    {
        double cur = fourier_radial_fixed(spec, kappa, n);
        if (std::abs(cur - prev) <= 1e-9 * std::abs(cur) + floor)
            return cur;
        prev = cur;
    }
    throw std::runtime_error("fourier_radial: refinement did not converge");
}

FourierTable make_fourier_table(PotentialSpec const& spec,
                                std::vector<double> kappa, int nodes)
{
    FourierTable t;
    t.d = spec.d;
    t.phi_hat.resize(kappa.size());
    for (std::size_t i = 0; i < kappa.size(); ++i)
        t.phi_hat[i] = fourier_radial(spec, kappa[i], nodes);
    t.kappa = std::move(kappa);
    return t;
}

double potential_integral(PotentialSpec const& spec)
{
    Potential phi(spec);
    QuadRule rule = gauss_legendre(64, 0, spec.R);
    double acc = integrate(rule, [&](double r) {
        return std::pow(r, spec.d - 1) * phi.radial(r);
    });
    return sphere_area(spec.d) * acc;
}

}  // namespace landau
