// SPDX-License-Identifier: Apache-2.0
//! \file sde.hpp
//! Euler-Maruyama integration of the limiting diffusion
//! dV = 2 Lambda(V) dtau + sqrt(2) Sigma(V) dB.
#pragma once

#include <cstdint>
#include <vector>

#include "coefficients.hpp"
#include "ensemble.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace landau {

struct SdeConfig
{
    double dtau = 1e-3;
    double tau_max = 0.5;
    std::size_t paths = 10000;
    InitialLaw law = InitialLaw::one(3);
    std::vector<double> tau_grid;  //!< marginal times; empty selects {tau_max}
    int path_stride = 0;           //!< store full paths every stride steps; 0 disables
    std::uint64_t seed = 0;

    //! Throws std::invalid_argument naming the offending field
    void validate() const;
    std::size_t steps() const;
};

//! V + 2 Lambda(V) dtau + sqrt(2 dtau) Sigma(V) xi
VectorXd em_step(VectorXd const& V, double dtau, CoefficientTable const& table,
                 RngStream& rng);

struct SdeEnsemble
{
    int d = 0;
    std::vector<double> tau_grid;
    //! marginals[k] holds paths x d samples of V at tau_grid[k]
    std::vector<std::vector<double>> marginals;
    //! path_t shared by all paths; paths[p] holds samples x d
    std::vector<double> path_t;
    std::vector<std::vector<double>> paths;

    //! Coordinate c of the marginal at tau_grid[k]
    std::vector<double> coordinate(std::size_t k, int c) const;
};

/*!
 * Independent paths, each with its own (seed, path) sde stream, so the
 * result does not depend on the execution policy or thread count.
 */
SdeEnsemble run_sde_ensemble(SdeConfig const& cfg, CoefficientTable const& table,
                             Exec exec = Exec::parallel);

}  // namespace landau
