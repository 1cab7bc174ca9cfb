// SPDX-License-Identifier: Apache-2.0
#include "landau/sde.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace landau {

void SdeConfig::validate() const
{
    auto fail = [](std::string const& f, std::string const& m) {
        throw std::invalid_argument(f + ": " + m);
    };
    if (!(dtau > 0) || !std::isfinite(dtau))
        fail("sde.dtau", "must be positive");
    if (!(tau_max >= dtau))
        fail("sde.tau_max", "must be at least dtau");
    if (paths == 0)
        fail("sde.paths", "must be positive");
    if (path_stride < 0)
        fail("sde.path_stride", "must be non-negative");
    for (double t : tau_grid)
        if (!(t >= 0 && t <= tau_max * (1 + 1e-12)))
            fail("sde.tau_grid", "entries must lie in [0, tau_max]");
}

std::size_t SdeConfig::steps() const
{
    return static_cast<std::size_t>(std::llround(tau_max / dtau));
}

VectorXd em_step(VectorXd const& V, double dtau, CoefficientTable const& table,
                 RngStream& rng)
{
    auto const c = table.evaluate(V);
    VectorXd xi(V.size());
    for (Eigen::Index i = 0; i < xi.size(); ++i)
        xi[i] = rng.normal();
    return V + 2 * dtau * c.Lambda + std::sqrt(2 * dtau) * (c.Sigma * xi);
}

std::vector<double> SdeEnsemble::coordinate(std::size_t k, int c) const
{
    std::vector<double> out;
    auto const& m = marginals.at(k);
    out.reserve(m.size() / d);
    for (std::size_t i = c; i < m.size(); i += d)
        out.push_back(m[i]);
    return out;
}

SdeEnsemble run_sde_ensemble(SdeConfig const& cfg, CoefficientTable const& table,
                             Exec exec)
{
    cfg.validate();
    int const d = cfg.law.dim();
    SdeEnsemble out;
    out.d = d;
    out.tau_grid = cfg.tau_grid.empty() ? std::vector<double>{cfg.tau_max}
                                        : cfg.tau_grid;
    std::size_t const steps = cfg.steps();
    std::vector<std::size_t> grid_step;
    for (double t : out.tau_grid)
        grid_step.push_back(static_cast<std::size_t>(std::llround(t / cfg.dtau)));
    out.marginals.assign(out.tau_grid.size(),
                         std::vector<double>(cfg.paths * d));
    if (cfg.path_stride > 0)
    {
        for (std::size_t s = 0; s <= steps; s += cfg.path_stride)
            out.path_t.push_back(s * cfg.dtau);
        out.paths.resize(cfg.paths);
    }

    auto one = [&](std::size_t p) {
        RngStream rng(cfg.seed, p, Substream::sde);
        VectorXd V(d);
        cfg.law.sample(rng, V.data());
        auto record = [&](std::size_t s) {
            for (std::size_t k = 0; k < grid_step.size(); ++k)
                if (grid_step[k] == s)
                    std::copy(V.data(), V.data() + d,
                              out.marginals[k].begin() + p * d);
            if (cfg.path_stride > 0 && s % cfg.path_stride == 0)
                out.paths[p].insert(out.paths[p].end(), V.data(), V.data() + d);
        };
        record(0);
        for (std::size_t s = 1; s <= steps; ++s)
        {
            V = em_step(V, cfg.dtau, table, rng);
            record(s);
        }
    };

    auto const n = static_cast<std::ptrdiff_t>(cfg.paths);
    if (exec == Exec::parallel)
    {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t p = 0; p < n; ++p)
            one(static_cast<std::size_t>(p));
    }
    else
        for (std::ptrdiff_t p = 0; p < n; ++p)
            one(static_cast<std::size_t>(p));
    return out;
}

}  // namespace landau
