// SPDX-License-Identifier: Apache-2.0
//! \file dynamics.hpp
//! Torus geometry, cell lists, tagged/background forces, velocity Verlet and
//! the Hamiltonian.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "parallel.hpp"
#include "potential.hpp"

namespace landau {

inline constexpr double kNoTime = std::numeric_limits<double>::quiet_NaN();

enum class Status : std::uint8_t
{
    active,
    dormant,
    retired,
};

/*!
 * Background particles in structure-of-arrays layout.
 *
 * Slots of retired particles are recycled. Active slots are additionally
 * kept in a dense index list so force loops never touch dormant storage.
 * A dormant particle stores its phase point at time t_ref and is advanced
 * on demand as x + (t - t_ref) v.
 */
class ParticleSet
{
  public:
    explicit ParticleSet(int d = 0) : d_{d} {}

    int dim() const { return d_; }
    std::size_t slots() const { return id.size(); }
    std::size_t live() const { return slots() - free_.size(); }
    std::vector<std::uint32_t> const& active() const { return active_; }

    std::uint32_t add(double const* x, double const* v, std::uint64_t pid,
                      double t);
    void activate(std::uint32_t i);
    void deactivate(std::uint32_t i);
    void release(std::uint32_t i);

    double* xp(std::uint32_t i) { return x.data() + std::size_t(i) * d_; }
    double* vp(std::uint32_t i) { return v.data() + std::size_t(i) * d_; }
    double const* xp(std::uint32_t i) const
    {
        return x.data() + std::size_t(i) * d_;
    }
    double const* vp(std::uint32_t i) const
    {
        return v.data() + std::size_t(i) * d_;
    }

    std::vector<double> x, v, x0, v0;
    std::vector<std::uint64_t> id;
    std::vector<Status> status;
    std::vector<double> sigma;  //!< first entry into B(X, R), NaN if none
    std::vector<double> t_ref;  //!< time of the stored dormant phase point
    std::vector<std::uint8_t> modified;
    std::vector<std::uint8_t> inside;
    std::vector<std::int64_t> event;  //!< last event index, -1 if none

  private:
    int d_;
    std::vector<std::uint32_t> free_;
    std::vector<std::uint32_t> active_;
    std::vector<std::uint32_t> active_pos_;
};

//! Representative of a - b with components in [-L/2, L/2); L = 0 is R^d
void minimal_image(double const* a, double const* b, double L, int d,
                   double* out);

//! Canonical torus representative in [-L/2, L/2)^d; no-op for L = 0
void wrap_position(double* x, double L, int d);

/*!
 * Linked cell list on the torus [-L/2, L/2)^d with n = floor(L / r_min)
 * cells per axis. Requires n >= 3 so that the 3^d neighbour cells are
 * distinct.
 */
class CellList
{
  public:
    CellList() = default;
    CellList(int d, double L, double r_min);

    int cells_per_axis() const { return n_; }
    std::int64_t cell_of(double const* x) const;
    int axis_cell(double xk) const;

    void insert(std::uint32_t i, double const* x);
    void remove(std::uint32_t i);
    //! Relink i if its cell changed
    void update(std::uint32_t i, double const* x);
    void clear();

    //! Visit every particle registered in the 3^d cells around x
    template <class F>
    void for_each_near(double const* x, F&& f) const;

  private:
    int d_ = 0;
    int n_ = 0;
    double L_ = 0;
    double w_ = 0;
    std::vector<std::int64_t> head_;
    std::vector<std::int64_t> next_, prev_, cell_;
};

/*!
 * Full system state: tagged particle, background set, cached forces.
 *
 * `near` lists the active particles strictly inside B(X, R) at the last
 * force evaluation and `f` their forces; `F` is the tagged force.
 */
struct SystemState
{
    int d = 0;
    double t = 0;
    double L = 0;  //!< torus side, 0 for unbounded space
    double N = 1;
    std::vector<double> X, V;
    std::vector<double> Xu;  //!< unwrapped tagged position
    ParticleSet p;
    CellList cells;
    bool use_cells = false;

    std::vector<double> F;
    std::vector<std::uint32_t> near;
    std::vector<double> f;
    std::vector<double> y;  //!< X - x_i for the near list

    std::int64_t excluded = -1;  //!< particle id whose coupling is removed
};

/*!
 * Build a state from positions and velocities; all particles active.
 * With cells = true the torus cell list (cell size >= R) is used for the
 * neighbour search, otherwise a brute-force scan over the active list.
 */
SystemState make_state(int d, double L, double N, double const* X,
                       double const* V, std::vector<double> const& x,
                       std::vector<double> const& v, double R, bool cells);

//! Tagged force and per-particle feedback forces for the active set
void compute_forces(SystemState& s, Potential const& phi);

//! Same with the exhaustive O(n) scan (neighbour search oracle)
void compute_forces_bruteforce(SystemState& s, Potential const& phi);

//! v += h f for the cached forces; marks kicked particles as modified
void kick(SystemState& s, double h);

//! Straight-line motion of X and every active particle; cells relinked
void drift(SystemState& s, double h, Exec exec = Exec::serial);

//! One velocity Verlet step of the coupled system; t += dt
void verlet_step(SystemState& s, Potential const& phi, double dt,
                 Exec exec = Exec::serial);

//! Position of a dormant particle at time t
void dormant_position(SystemState const& s, std::uint32_t i, double t,
                      double* out);

//! Freeze an active particle into dormant ballistic storage
void make_dormant(SystemState& s, std::uint32_t i);
//! Bring a dormant particle back at the current time
void make_active(SystemState& s, std::uint32_t i);

/*!
 * H = |V|^2/2 + sum |v_i|^2/2 + (1/N) sum Phi(X - x_i) over all tracked
 * particles, compensated (Neumaier) summation.
 */
double hamiltonian(SystemState const& s, Potential const& phi);

//! Total momentum V + sum v_i over tracked particles
std::vector<double> total_momentum(SystemState const& s);

//! Sorted multi-indices (axis tuples) of orders 1 through max_order
std::vector<std::vector<int>> multi_indices(int d, int max_order);

/*!
 * S_I = sum_i d_I Phi(X - x_i) over the near list for every multi-index,
 * from the closed-form derivatives of f(|y|^2).
 */
void derivative_sums(SystemState const& s, Potential const& phi,
                     std::vector<std::vector<int>> const& indices,
                     double* out);

//! Neumaier compensated accumulator
struct CompensatedSum
{
    double sum = 0;
    double c = 0;

    void add(double x)
    {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

template <class F>
void CellList::for_each_near(double const* x, F&& f) const
{
    std::int64_t base[8];
    for (int k = 0; k < d_; ++k)
        base[k] = axis_cell(x[k]);
    int offs[8] = {};
    for (int k = 0; k < d_; ++k)
        offs[k] = -1;
    for (;;)
    {
        std::int64_t cell = 0;
        for (int k = d_ - 1; k >= 0; --k)
            cell = cell * n_ + (base[k] + offs[k] + n_) % n_;
        for (std::int64_t i = head_[cell]; i >= 0; i = next_[i])
            f(static_cast<std::uint32_t>(i));
        int k = 0;
        while (k < d_ && offs[k] == 1)
            offs[k++] = -1;
        if (k == d_)
            break;
        ++offs[k];
    }
}

}  // namespace landau
