// SPDX-License-Identifier: Apache-2.0
//! \file coefficients.hpp
//! Landau drift and diffusion coefficients, their Fourier and truncated
//! forms, and the generator.
#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "potential.hpp"

namespace landau {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/*!
 * Node counts for the reduced quadratures.
 *
 * The x-integral over B(0, R) runs in (x_par, rho = |x_perp|) with
 * rho = R sin(psi); chord integrals use the exact entry point. The velocity
 * integral uses polar coordinates about v = 0, where the 1/|v| weight is
 * singular.
 */
struct CoefficientScheme
{
    int n_psi = 48;
    int n_xi = 24;
    int n_s = 16;
    int n_theta = 64;
    int n_r = 96;
    double r_span = 12.0;

    // Fourier route
    int fourier_nodes = 96;
    double kappa_max = 60.0;
    int kappa_panels = 60;
    int kappa_order = 16;

    // divergence check
    double fd_step = 1e-2;

    //! Every node count doubled
    CoefficientScheme refined() const;
    std::string hash() const;
};

//! Direction-free constants of the x-space integrals at time window tau
struct ChordConstants
{
    double alpha = 0;  //!< parallel part of the diffusion kernel
    double beta = 0;   //!< perpendicular part
    double ell = 0;    //!< drift kernel along the direction
};

ChordConstants chord_constants(Potential const& phi, double tau,
                               CoefficientScheme const& scheme);

//! D = a P_par + b P_perp and Lambda = lambda Vhat at speed |V|
struct RadialCoefficients
{
    double speed = 0;
    double a = 0;
    double b = 0;
    double lambda = 0;
};

struct QuadratureMeta
{
    CoefficientScheme scheme;
    double error_estimate = -1;  //!< negative when not computed
};

struct TransportCoefficients
{
    VectorXd V;
    MatrixXd D;
    VectorXd Lambda;
    MatrixXd Sigma;
    QuadratureMeta meta;
};

//! Assemble b I + (a - b) Vhat Vhat^T
MatrixXd assemble_matrix(VectorXd const& V, double a, double b);
//! lambda Vhat (zero at V = 0)
VectorXd assemble_vector(VectorXd const& V, double lambda);

/*!
 * Coefficient calculator for one potential and scheme.
 *
 * The infinite-window chord constants and the Fourier moment are computed
 * once; afterwards each speed costs a two-dimensional quadrature.
 */
class LandauCoefficients
{
  public:
    explicit LandauCoefficients(PotentialSpec spec,
                                CoefficientScheme scheme = {});

    PotentialSpec const& spec() const { return phi_.spec(); }
    CoefficientScheme const& scheme() const { return scheme_; }
    int dim() const { return phi_.dim(); }
    ChordConstants const& constants() const { return inf_; }

    RadialCoefficients radial(double speed) const;
    //! Difference truncated - full at window t (exact zero when t = inf)
    RadialCoefficients radial_truncation_delta(double speed, double t) const;
    RadialCoefficients radial_fourier(double speed) const;

    MatrixXd D(VectorXd const& V) const;
    VectorXd Lambda(VectorXd const& V) const;
    TransportCoefficients at(VectorXd const& V) const;

    //! int_0^inf kappa^d |Phi_hat|^2 dkappa (computed lazily, cached)
    double fourier_moment() const;

  private:
    Potential phi_;
    CoefficientScheme scheme_;
    ChordConstants inf_;
    std::shared_ptr<std::once_flag> moment_once_;
    std::shared_ptr<double> fourier_moment_;
};

//! Fourier moment, parallel over wavenumber panels or serial
double fourier_moment(PotentialSpec const& spec, CoefficientScheme const& sc,
                      bool parallel = true);

MatrixXd landau_D(VectorXd const& V, LandauCoefficients const& lc);
VectorXd landau_Lambda(VectorXd const& V, LandauCoefficients const& lc);
MatrixXd landau_D_fourier(VectorXd const& V, LandauCoefficients const& lc);

struct TruncatedCoefficients
{
    VectorXd Lambda;
    MatrixXd D;
    VectorXd dLambda;  //!< Lambda_t - Lambda
    MatrixXd dD;       //!< D_t - D
};

TruncatedCoefficients truncated_coeffs(VectorXd const& V, double t,
                                       LandauCoefficients const& lc);

/*!
 * Symmetric PSD square root by cyclic Jacobi.
 * Throws on asymmetry above 1e-9 relative or an eigenvalue below -1e-10.
 */
MatrixXd sqrt_spd(MatrixXd const& M);

//! Eigen-decomposition by cyclic Jacobi: returns eigenvalues, fills vectors
VectorXd jacobi_eigen(MatrixXd const& M, MatrixXd& vectors);

//! L f = 2 grad f . Lambda + Hess f : D
double generator_apply(TransportCoefficients const& c, VectorXd const& grad_f,
                       MatrixXd const& hess_f);

struct IdentityTolerances
{
    double drift_relative = 1e-6;
    double divergence_relative = 1e-3;
    double fourier_relative = 1e-3;
};

struct IdentityPoint
{
    VectorXd V;
    double drift_error = 0;       //!< |Lambda + D V| / (|D V| + 1e-12)
    double divergence_error = 0;  //!< |Lambda - div D| / (|Lambda| + 1e-12)
    double fourier_error = 0;     //!< |D_F - D| / |D|
    double symmetry_error = 0;
    double min_eigenvalue = 0;
};

struct IdentityReport
{
    std::vector<IdentityPoint> points;
    double max_drift_error = 0;
    double max_divergence_error = 0;
    double max_fourier_error = 0;
    double min_eigenvalue = 0;
    bool drift_pass = false;
    bool divergence_pass = false;
    bool fourier_pass = false;
    bool spd_pass = false;

    bool all_pass() const
    {
        return drift_pass && divergence_pass && fourier_pass && spd_pass;
    }
};

//! div D by central differences (step h) with one Richardson level
VectorXd divergence_fd(VectorXd const& V, LandauCoefficients const& lc,
                       double h);

IdentityReport check_identities(std::vector<VectorXd> const& grid,
                                LandauCoefficients const& lc,
                                IdentityTolerances const& tol = {},
                                bool with_fourier = true);

struct StationarityTerm
{
    std::string name;
    double value = 0;  //!< int gamma L f dv
};

/*!
 * int gamma L f for f in {v1, v1 v2, |v|^2, |v|^4} with a tensor-product
 * Gauss-Hermite rule. Coefficients are evaluated directly, once per
 * distinct speed of the product grid.
 */
std::vector<StationarityTerm> generator_stationarity(LandauCoefficients const& lc,
                                                     int nodes = 16);

/*!
 * Generic full-tensor quadrature without isotropy reduction.
 *
 * Hyperspherical product rules over B(0, R) for x and over the unit sphere
 * for the velocity direction; every tensor component is accumulated.
 */
struct FullTensorScheme
{
    int x_radial = 24;
    int x_polar = 24;
    int x_azimuth = 48;
    int n_s = 12;
    int w_polar = 16;
    int w_azimuth = 32;
    int n_r = 96;
    double r_span = 12.0;
};

struct FullTensorResult
{
    MatrixXd D;
    VectorXd Lambda;
};

FullTensorResult landau_full_tensor(VectorXd const& V,
                                    PotentialSpec const& spec,
                                    FullTensorScheme const& scheme = {});

/*!
 * Radial interpolation table of a, b, lambda.
 *
 * Cubic B-spline in |V| on uniform knots with constant extrapolation
 * beyond the last knot.
 */
class CoefficientTable
{
  public:
    struct Sample
    {
        MatrixXd D;
        VectorXd Lambda;
        MatrixXd Sigma;
    };

    CoefficientTable() = default;
    CoefficientTable(LandauCoefficients const& lc, int knots = 64,
                     double vmax = 8.0, bool parallel = true);

    //! All coefficients identically zero (degenerate table)
    static CoefficientTable zero(int d, int knots = 64, double vmax = 8.0);

    RadialCoefficients radial(double speed) const;
    Sample evaluate(VectorXd const& V) const;

    //! L f using interpolated coefficients
    double generator(VectorXd const& V, VectorXd const& grad_f,
                     MatrixXd const& hess_f) const;

    int dim() const { return d_; }
    double vmax() const { return vmax_; }
    std::vector<RadialCoefficients> const& knots() const { return knots_; }

  private:
    struct Splines;
    void build();

    int d_ = 0;
    double vmax_ = 8.0;
    std::vector<RadialCoefficients> knots_;
    std::shared_ptr<Splines const> splines_;
};

}  // namespace landau
