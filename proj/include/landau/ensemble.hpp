// SPDX-License-Identifier: Apache-2.0
//! \file ensemble.hpp
//! Grand canonical initial data and the Maxwellian influx sampler.
#pragma once

#include <cstdint>
#include <vector>

#include "potential.hpp"
#include "rng.hpp"

namespace landau {

/*!
 * Velocity perturbation g0 of the tagged particle's initial law g0 * gamma.
 *
 * Two descriptor kinds: the constant 1, and the ratio of an isotropic
 * Gaussian N(mean, scale^2 I) with scale < 1 to the standard one, which is
 * bounded with bounded gradient and has a closed-form supremum.
 */
class InitialLaw
{
  public:
    enum class Kind
    {
        one,
        gaussian_ratio,
    };

    //! g0 = 1
    static InitialLaw one(int d);
    static InitialLaw gaussian_ratio(std::vector<double> mean, double scale);

    Kind kind() const { return kind_; }
    int dim() const { return static_cast<int>(mean_.size()); }
    std::vector<double> const& mean() const { return mean_; }
    double scale() const { return scale_; }

    double value(double const* v) const;
    double sup() const { return sup_; }

    //! int g0 gamma by tensor quadrature; the constructor requires 1 +- 1e-6
    double normalization() const;

    //! Draw V from g0 gamma by rejection against gamma
    void sample(RngStream& rng, double* v) const;

  private:
    InitialLaw(Kind k, std::vector<double> mean, double scale);

    Kind kind_;
    std::vector<double> mean_;
    double scale_ = 1;
    double sup_ = 1;
};

//! Tagged particle plus background in canonical torus coordinates
struct InitialConfiguration
{
    int d = 0;
    std::vector<double> X, V;
    std::vector<double> x, v;  //!< row-major, count() x d
    double torus_side = 0;     //!< L, or the sampling radius in ball mode
    double density = 0;
    std::uint64_t seed = 0;

    std::size_t count() const { return d ? x.size() / d : 0; }
};

//! Maximum rejection attempts before a sampler reports failure
inline constexpr int kMaxRejections = 1000000;

/*!
 * Sample the grand canonical measure on the torus [-L/2, L/2)^d.
 *
 * The tagged velocity comes from g0 gamma, its position is uniform; the
 * background count is Poisson with mean N int exp(-Phi(X - x)/N) dx and
 * positions are drawn with that Gibbs weight by rejection.
 */
InitialConfiguration sample_initial_configuration(Potential const& phi,
                                                  InitialLaw const& law,
                                                  double L, double N,
                                                  RngStream& rng);

/*!
 * Same Gibbs-Poisson law restricted to the ball B(X, radius) with X = 0, as
 * used to seed the reservoir engine.
 */
InitialConfiguration sample_ball_configuration(Potential const& phi,
                                               InitialLaw const& law,
                                               double radius, double N,
                                               RngStream& rng);

//! N int (exp(-Phi/N) - 1) dx, the Gibbs correction to the mean count
double gibbs_correction(Potential const& phi, double N);

//! Inward Maxwellian flux through a sphere of radius R_act moving with V
double influx_rate(double const* V, int d, double R_act, double N);

//! One injected particle: absolute position and velocity
struct Injected
{
    std::vector<double> x, v;
};

/*!
 * Draw the particles crossing into B(X, R_act) during one step.
 *
 * Velocities follow gamma(v)|v - V| (exact mixture rejection), the entry
 * normal is cosine weighted against the relative velocity, and the entry
 * time is jittered uniformly in the step by moving along v - V.
 */
void sample_influx(double const* X, double const* V, int d, double R_act,
                   double dt, double N, RngStream& rng,
                   std::vector<Injected>& out);

//! Single flux-weighted draw (n outward unit normal, v velocity)
void sample_flux_pair(double const* V, int d, RngStream& rng, double* n,
                      double* v);

}  // namespace landau
