// SPDX-License-Identifier: Apache-2.0
#include "landau/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace landau {

QuadRule gauss_legendre(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: n must be positive");
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    int const half = (n + 1) / 2;
    for (int i = 0; i < half; ++i)
    {
        // Tricomi initial guess, then Newton on P_n
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter)
        {
            double p0 = 1, p1 = 0;
            for (int k = 1; k <= n; ++k)
            {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        {
            double p0 = 1, p1 = 0;
            for (int k = 1; k <= n; ++k)
            {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
        }
        double w = 2 / ((1 - z * z) * dp * dp);
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        r.x[n / 2] = 0;
    return r;
}

QuadRule gauss_legendre(int n, double a, double b)
{
    QuadRule r = gauss_legendre(n);
    double const h = 0.5 * (b - a), m = 0.5 * (a + b);
    for (std::size_t i = 0; i < r.size(); ++i)
    {
        r.x[i] = m + h * r.x[i];
        r.w[i] *= h;
    }
    return r;
}

QuadRule composite_gauss_legendre(int n, double a, double b, int panels)
{
    QuadRule base = gauss_legendre(n);
    QuadRule r;
    double const width = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
    {
        double lo = a + p * width;
        double h = 0.5 * width, m = lo + h;
        for (std::size_t i = 0; i < base.size(); ++i)
        {
            r.x.push_back(m + h * base.x[i]);
            r.w.push_back(h * base.w[i]);
        }
    }
    return r;
}

QuadRule gauss_hermite(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_hermite: n must be positive");
    // Golub-Welsch on the Jacobi matrix of probabilists' Hermite polynomials
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k)
        sub[k - 1] = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i)
    {
        r.x[i] = es.eigenvalues()[i];
        double v0 = es.eigenvectors()(0, i);
        r.w[i] = v0 * v0;
    }
    // Symmetrize to remove eigen-solver noise
    for (int i = 0; i < n / 2; ++i)
    {
        double x = 0.5 * (r.x[n - 1 - i] - r.x[i]);
        double w = 0.5 * (r.w[n - 1 - i] + r.w[i]);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        r.x[n / 2] = 0;
    return r;
}

double sphere_area(int d)
{
    return 2 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double ball_volume(int d)
{
    return sphere_area(d) / d;
}

SphereRule hypersphere_rule(int d, int n_polar, int n_azimuth)
{
    if (d < 2)
        throw std::invalid_argument("hypersphere_rule: d must be >= 2");
    QuadRule polar = gauss_legendre(n_polar, 0, std::numbers::pi);
    int const n_angles = d - 1;
    SphereRule rule;
    rule.d = d;
    std::vector<int> idx(n_angles, 0);
    std::vector<double> angle(n_angles);
    std::vector<double> pt(d);
    double const dphi = 2 * std::numbers::pi / n_azimuth;
    while (true)
    {
        double w = dphi;
        for (int j = 0; j + 1 < n_angles; ++j)
        {
            angle[j] = polar.x[idx[j]];
            w *= polar.w[idx[j]] * std::pow(std::sin(angle[j]), d - 2 - j);
        }
        angle[n_angles - 1] = dphi * idx[n_angles - 1];
        double sprod = 1;
        for (int j = 0; j < n_angles; ++j)
        {
            pt[j] = sprod * std::cos(angle[j]);
            sprod *= std::sin(angle[j]);
        }
        pt[d - 1] = sprod;
        rule.points.insert(rule.points.end(), pt.begin(), pt.end());
        rule.w.push_back(w);

        int j = n_angles - 1;
        for (; j >= 0; --j)
        {
            int lim = (j == n_angles - 1) ? n_azimuth : n_polar;
            if (++idx[j] < lim)
                break;
            idx[j] = 0;
        }
        if (j < 0)
            break;
    }
    return rule;
}

}  // namespace landau
