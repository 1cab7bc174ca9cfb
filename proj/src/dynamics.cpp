// SPDX-License-Identifier: Apache-2.0
#include "landau/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace landau {

std::uint32_t ParticleSet::add(double const* xi, double const* vi,
                               std::uint64_t pid, double t)
{
    std::uint32_t i;
    if (!free_.empty())
    {
        i = free_.back();
        free_.pop_back();
    }
    else
    {
        i = static_cast<std::uint32_t>(id.size());
        x.resize(x.size() + d_);
        v.resize(v.size() + d_);
        x0.resize(x0.size() + d_);
        v0.resize(v0.size() + d_);
        id.push_back(0);
        status.push_back(Status::retired);
        sigma.push_back(kNoTime);
        t_ref.push_back(0);
        modified.push_back(0);
        inside.push_back(0);
        event.push_back(-1);
        active_pos_.push_back(0);
    }
    std::size_t const o = std::size_t(i) * d_;
    for (int k = 0; k < d_; ++k)
    {
        x[o + k] = x0[o + k] = xi[k];
        v[o + k] = v0[o + k] = vi[k];
    }
    id[i] = pid;
    sigma[i] = kNoTime;
    t_ref[i] = t;
    modified[i] = 0;
    inside[i] = 0;
    event[i] = -1;
    status[i] = Status::dormant;
    activate(i);
    return i;
}

void ParticleSet::activate(std::uint32_t i)
{
    status[i] = Status::active;
    active_pos_[i] = static_cast<std::uint32_t>(active_.size());
    active_.push_back(i);
}

void ParticleSet::deactivate(std::uint32_t i)
{
    std::uint32_t const pos = active_pos_[i];
    std::uint32_t const last = active_.back();
    active_[pos] = last;
    active_pos_[last] = pos;
    active_.pop_back();
    status[i] = Status::dormant;
}

void ParticleSet::release(std::uint32_t i)
{
    if (status[i] == Status::active)
        deactivate(i);
    status[i] = Status::retired;
    free_.push_back(i);
}

namespace {

double wrap_component(double r, double L)
{
    r -= L * std::floor(r / L + 0.5);
    if (r >= 0.5 * L)
        r -= L;
    if (r < -0.5 * L)
        r += L;
    return r;
}

}  // namespace

void minimal_image(double const* a, double const* b, double L, int d,
                   double* out)
{
    for (int k = 0; k < d; ++k)
        out[k] = L > 0 ? wrap_component(a[k] - b[k], L) : a[k] - b[k];
}

void wrap_position(double* x, double L, int d)
{
    if (L <= 0)
        return;
    for (int k = 0; k < d; ++k)
        x[k] = wrap_component(x[k], L);
}

CellList::CellList(int d, double L, double r_min)
    : d_{d}, n_{static_cast<int>(std::floor(L / r_min))}, L_{L}
{
    if (d < 1 || d > 8)
        throw std::invalid_argument("cell list: dimension out of range");
    if (n_ < 3)
        throw std::invalid_argument("cell list: needs at least 3 cells per axis");
    w_ = L / n_;
    std::int64_t total = 1;
    for (int k = 0; k < d; ++k)
        total *= n_;
    head_.assign(total, -1);
}

int CellList::axis_cell(double xk) const
{
    auto c = static_cast<int>(std::floor((xk + 0.5 * L_) / w_));
    return std::clamp(c, 0, n_ - 1);
}

std::int64_t CellList::cell_of(double const* x) const
{
    std::int64_t cell = 0;
    for (int k = d_ - 1; k >= 0; --k)
        cell = cell * n_ + axis_cell(x[k]);
    return cell;
}

void CellList::insert(std::uint32_t i, double const* x)
{
    if (i >= next_.size())
    {
        next_.resize(i + 1, -1);
        prev_.resize(i + 1, -1);
        cell_.resize(i + 1, -1);
    }
    std::int64_t const c = cell_of(x);
    cell_[i] = c;
    prev_[i] = -1;
    next_[i] = head_[c];
    if (head_[c] >= 0)
        prev_[head_[c]] = i;
    head_[c] = i;
}

void CellList::remove(std::uint32_t i)
{
    std::int64_t const c = cell_[i];
    if (c < 0)
        return;
    if (prev_[i] >= 0)
        next_[prev_[i]] = next_[i];
    else
        head_[c] = next_[i];
    if (next_[i] >= 0)
        prev_[next_[i]] = prev_[i];
    cell_[i] = next_[i] = prev_[i] = -1;
}

void CellList::update(std::uint32_t i, double const* x)
{
    if (cell_of(x) != cell_[i])
    {
        remove(i);
        insert(i, x);
    }
}

void CellList::clear()
{
    std::fill(head_.begin(), head_.end(), -1);
    next_.clear();
    prev_.clear();
    cell_.clear();
}

SystemState make_state(int d, double L, double N, double const* X,
                       double const* V, std::vector<double> const& x,
                       std::vector<double> const& v, double R, bool cells)
{
    SystemState s;
    s.d = d;
    s.L = L;
    s.N = N;
    s.X.assign(X, X + d);
    s.V.assign(V, V + d);
    s.Xu = s.X;
    wrap_position(s.X.data(), L, d);
    s.p = ParticleSet(d);
    s.use_cells = cells;
    if (cells)
        s.cells = CellList(d, L, R);
    std::size_t const n = x.size() / d;
    for (std::size_t i = 0; i < n; ++i)
    {
        std::uint32_t slot = s.p.add(&x[i * d], &v[i * d], i, 0.0);
        wrap_position(s.p.xp(slot), L, d);
        if (cells)
            s.cells.insert(slot, s.p.xp(slot));
    }
    s.F.assign(d, 0.0);
    return s;
}

namespace {

template <class Visit>
void force_core(SystemState& s, Potential const& phi, Visit&& visit)
{
    int const d = s.d;
    double const R2 = phi.range() * phi.range();
    double const invN = 1 / s.N;
    std::fill(s.F.begin(), s.F.end(), 0.0);
    s.near.clear();
    s.f.clear();
    s.y.clear();
    double y[8];
    visit([&](std::uint32_t i) {
        if (s.excluded >= 0 && s.p.id[i] == std::uint64_t(s.excluded))
            return;
        minimal_image(s.X.data(), s.p.xp(i), s.L, d, y);
        double r2 = 0;
        for (int k = 0; k < d; ++k)
            r2 += y[k] * y[k];
        if (r2 >= R2)
            return;
        double const g = 2 * phi.profile(1, r2) * invN;
        s.near.push_back(i);
        for (int k = 0; k < d; ++k)
        {
            double const fk = g * y[k];
            s.F[k] -= fk;
            s.f.push_back(fk);
            s.y.push_back(y[k]);
        }
    });
}

}  // namespace

void compute_forces(SystemState& s, Potential const& phi)
{
    if (s.use_cells)
        force_core(s, phi, [&](auto&& f) { s.cells.for_each_near(s.X.data(), f); });
    else
        force_core(s, phi, [&](auto&& f) {
            for (std::uint32_t i : s.p.active())
                f(i);
        });
}

void compute_forces_bruteforce(SystemState& s, Potential const& phi)
{
    force_core(s, phi, [&](auto&& f) {
        for (std::uint32_t i = 0; i < s.p.slots(); ++i)
            if (s.p.status[i] == Status::active)
                f(i);
    });
}

void kick(SystemState& s, double h)
{
    int const d = s.d;
    for (int k = 0; k < d; ++k)
        s.V[k] += h * s.F[k];
    for (std::size_t j = 0; j < s.near.size(); ++j)
    {
        double* v = s.p.vp(s.near[j]);
        for (int k = 0; k < d; ++k)
            v[k] += h * s.f[j * d + k];
        s.p.modified[s.near[j]] = 1;
    }
}

void drift(SystemState& s, double h, Exec exec)
{
    int const d = s.d;
    for (int k = 0; k < d; ++k)
    {
        s.X[k] += h * s.V[k];
        s.Xu[k] += h * s.V[k];
    }
    wrap_position(s.X.data(), s.L, d);
    auto const& act = s.p.active();
    auto const n = static_cast<std::int64_t>(act.size());
    auto body = [&](std::int64_t j) {
        std::uint32_t const i = act[j];
        double* x = s.p.xp(i);
        double const* v = s.p.vp(i);
        for (int k = 0; k < d; ++k)
            x[k] += h * v[k];
        wrap_position(x, s.L, d);
    };
    if (exec == Exec::parallel)
    {
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < n; ++j)
            body(j);
    }
    else
    {
        for (std::int64_t j = 0; j < n; ++j)
            body(j);
    }
    if (s.use_cells)
        for (std::uint32_t i : act)
            s.cells.update(i, s.p.xp(i));
}

void verlet_step(SystemState& s, Potential const& phi, double dt, Exec exec)
{
    kick(s, 0.5 * dt);
    drift(s, dt, exec);
    s.t += dt;
    compute_forces(s, phi);
    kick(s, 0.5 * dt);
}

void dormant_position(SystemState const& s, std::uint32_t i, double t,
                      double* out)
{
    double const* x = s.p.xp(i);
    double const* v = s.p.vp(i);
    double const dt = t - s.p.t_ref[i];
    for (int k = 0; k < s.d; ++k)
        out[k] = x[k] + dt * v[k];
    wrap_position(out, s.L, s.d);
}

void make_dormant(SystemState& s, std::uint32_t i)
{
    s.p.t_ref[i] = s.t;
    s.p.deactivate(i);
    if (s.use_cells)
        s.cells.remove(i);
}

void make_active(SystemState& s, std::uint32_t i)
{
    double buf[8];
    dormant_position(s, i, s.t, buf);
    std::copy(buf, buf + s.d, s.p.xp(i));
    s.p.t_ref[i] = s.t;
    s.p.activate(i);
    if (s.use_cells)
        s.cells.insert(i, s.p.xp(i));
}

double hamiltonian(SystemState const& s, Potential const& phi)
{
    int const d = s.d;
    CompensatedSum kin, pot;
    for (int k = 0; k < d; ++k)
        kin.add(0.5 * s.V[k] * s.V[k]);
    double y[8], x[8];
    for (std::uint32_t i = 0; i < s.p.slots(); ++i)
    {
        Status const st = s.p.status[i];
        if (st == Status::retired)
            continue;
        double const* v = s.p.vp(i);
        for (int k = 0; k < d; ++k)
            kin.add(0.5 * v[k] * v[k]);
        if (st == Status::active)
            minimal_image(s.X.data(), s.p.xp(i), s.L, d, y);
        else
        {
            dormant_position(s, i, s.t, x);
            minimal_image(s.X.data(), x, s.L, d, y);
        }
        double const phi_i = phi.value(y);
        if (phi_i != 0)
            pot.add(phi_i);
    }
    return kin.value() + pot.value() / s.N;
}

std::vector<double> total_momentum(SystemState const& s)
{
    std::vector<CompensatedSum> acc(s.d);
    for (int k = 0; k < s.d; ++k)
        acc[k].add(s.V[k]);
    for (std::uint32_t i = 0; i < s.p.slots(); ++i)
    {
        if (s.p.status[i] == Status::retired)
            continue;
        double const* v = s.p.vp(i);
        for (int k = 0; k < s.d; ++k)
            acc[k].add(v[k]);
    }
    std::vector<double> out(s.d);
    for (int k = 0; k < s.d; ++k)
        out[k] = acc[k].value();
    return out;
}

std::vector<std::vector<int>> multi_indices(int d, int max_order)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start, int left) -> void {
        if (left == 0)
        {
            out.push_back(cur);
            return;
        }
        for (int a = start; a < d; ++a)
        {
            cur.push_back(a);
            self(self, a, left - 1);
            cur.pop_back();
        }
    };
    for (int m = 1; m <= max_order; ++m)
        rec(rec, 0, m);
    return out;
}

void derivative_sums(SystemState const& s, Potential const& phi,
                     std::vector<std::vector<int>> const& indices, double* out)
{
    int const d = s.d;
    std::size_t const nI = indices.size();
    std::fill(out, out + nI, 0.0);
    for (std::size_t j = 0; j < s.near.size(); ++j)
    {
        double const* y = s.y.data() + j * d;
        double r2 = 0;
        for (int k = 0; k < d; ++k)
            r2 += y[k] * y[k];
        double const f1 = phi.profile(1, r2);
        double const f2 = phi.profile(2, r2);
        double const f3 = phi.profile(3, r2);
        for (std::size_t m = 0; m < nI; ++m)
        {
            auto const& I = indices[m];
            double val = 0;
            switch (I.size())
            {
            case 1:
                val = 2 * y[I[0]] * f1;
                break;
            case 2:
                val = 4 * y[I[0]] * y[I[1]] * f2 + (I[0] == I[1] ? 2 * f1 : 0);
                break;
            case 3:
            {
                int const a = I[0], b = I[1], c = I[2];
                double lin = (a == b ? y[c] : 0) + (a == c ? y[b] : 0)
                             + (b == c ? y[a] : 0);
                val = 8 * y[a] * y[b] * y[c] * f3 + 4 * lin * f2;
                break;
            }
            default:
                throw std::invalid_argument("derivative_sums: order above 3");
            }
            out[m] += val;
        }
    }
}

}  // namespace landau
