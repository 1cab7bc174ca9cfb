// SPDX-License-Identifier: Apache-2.0
//! \file potential.hpp
//! Radial compactly supported bump potential and its transforms.
#pragma once

#include <span>
#include <vector>

namespace landau {

//! Parameters of Phi(x) = A (1 - |x|^2/R^2)^p on |x| < R
struct PotentialSpec
{
    double R = 1.0;
    double A = 1.0;
    int p = 4;
    int d = 3;

    //! Throws std::invalid_argument naming the offending field
    void validate() const;
};

/*!
 * Pointwise evaluator for the bump and its partial derivatives.
 *
 * Writing Phi(x) = f(|x|^2), every partial derivative is a sum over
 * pairings of the differentiation axes: singletons contribute 2 x_i and pairs
 * contribute 2 delta_ij, weighted by f^(m) with m the number of blocks.
 */
class Potential
{
  public:
    explicit Potential(PotentialSpec spec);

    PotentialSpec const& spec() const { return spec_; }
    int dim() const { return spec_.d; }
    double range() const { return spec_.R; }

    //! m-th derivative of the profile f(s), s = |x|^2
    double profile(int m, double s) const;

    //! phi(r) and phi'(r) for the radial form
    double radial(double r) const;
    double radial_derivative(double r) const;

    double value(double const* x) const;

    //! grad Phi(x); returns false (and zeros g) outside the support
    bool gradient(double const* x, double* g) const;

    //! Row-major d x d Hessian
    void hessian(double const* x, double* h) const;

    /*!
     * Partial derivative for a multi-index given as per-axis orders.
     * Throws for total order above 4, or order 4 with p = 4.
     */
    double evaluate(std::span<int const> orders, double const* x) const;

    //! Same, for an explicit list of differentiation axes
    double derivative_axes(std::span<int const> axes, double const* x) const;

  private:
    PotentialSpec spec_;
    double inv_r2_;
};

//! Sampled radial Fourier transform
struct FourierTable
{
    std::vector<double> kappa;
    std::vector<double> phi_hat;
    int d = 0;
};

/*!
 * Phi_hat(kappa) = int exp(-i k.x) Phi(x) dx via the Hankel reduction.
 *
 * Gauss-Legendre on [0, R] starting at the given node count, doubled until
 * successive values agree to 1e-9 relative.
 */
double fourier_radial(PotentialSpec const& spec, double kappa, int nodes = 256);

//! Single fixed-resolution evaluation (no refinement)
double fourier_radial_fixed(PotentialSpec const& spec, double kappa, int nodes);

FourierTable make_fourier_table(PotentialSpec const& spec,
                                std::vector<double> kappa, int nodes = 256);

//! int Phi over R^d by radial quadrature
double potential_integral(PotentialSpec const& spec);

}  // namespace landau
