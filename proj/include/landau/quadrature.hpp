// SPDX-License-Identifier: Apache-2.0
//! \file quadrature.hpp
//! One-dimensional Gauss rules and sphere measures.
#pragma once

#include <vector>

namespace landau {

//! Nodes and weights of a one-dimensional rule
struct QuadRule
{
    std::vector<double> x;
    std::vector<double> w;

    std::size_t size() const { return x.size(); }
};

//! Gauss-Legendre rule with n nodes on [-1, 1]
QuadRule gauss_legendre(int n);

//! Gauss-Legendre rule mapped to [a, b]
QuadRule gauss_legendre(int n, double a, double b);

//! Gauss-Legendre on [a, b] split into equal panels
QuadRule composite_gauss_legendre(int n, double a, double b, int panels);

//! Gauss-Hermite for the standard normal weight; weights sum to one
QuadRule gauss_hermite(int n);

//! Hyperspherical product rule on the unit sphere in R^d
struct SphereRule
{
    int d = 0;
    std::vector<double> points;  //!< row-major, size() x d
    std::vector<double> w;       //!< weights summing to the sphere area

    std::size_t size() const { return w.size(); }
    double const* point(std::size_t i) const { return points.data() + i * d; }
};

/*!
 * Gauss-Legendre in each polar angle (with the sin^k Jacobian folded into
 * the weights) and the trapezoid rule in the azimuth.
 */
SphereRule hypersphere_rule(int d, int n_polar, int n_azimuth);

//! Surface area of the unit sphere in R^d (d >= 1; S^0 has two points)
double sphere_area(int d);

//! Volume of the unit ball in R^d
double ball_volume(int d);

//! Apply a rule to a callable
template<class F>
double integrate(QuadRule const& rule, F&& f)
{
    double acc = 0;
    for (std::size_t i = 0; i < rule.size(); ++i)
        acc += rule.w[i] * f(rule.x[i]);
    return acc;
}

}  // namespace landau
