// SPDX-License-Identifier: Apache-2.0
#include "landau/engine.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace landau {

char const* to_string(Mode m)
{
    return m == Mode::full_torus ? "full" : "reservoir";
}

Mode mode_from_string(std::string const& s)
{
    if (s == "full" || s == "full_torus")
        return Mode::full_torus;
    if (s == "reservoir")
        return Mode::reservoir;
    throw std::invalid_argument("mode: expected full or reservoir, got '" + s
                                + "'");
}

double EngineConfig::dt_eff() const
{
    return dt > 0 ? dt : potential.R / (20 * v_ref);
}

double EngineConfig::T() const
{
    return horizon > 0 ? horizon : tau_max * N;
}

double EngineConfig::R_act() const
{
    return potential.R + act_margin * dt_eff() * v_ref;
}

double EngineConfig::R_out() const
{
    return R_act() + hysteresis * dt_eff() * v_ref;
}

void EngineConfig::validate(Mode mode) const
{
    potential.validate();
    if (law.dim() != potential.d)
        throw std::invalid_argument("initial_law: dimension differs from d");
    if (!(N >= 1))
        throw std::invalid_argument("N: must be >= 1");
    if (!(dt >= 0))
        throw std::invalid_argument("dt: must be > 0");
    if (!(v_ref > 0))
        throw std::invalid_argument("v_ref: must be > 0");
    if (!(T() > 0))
        throw std::invalid_argument("tau_max: horizon must be > 0");
    if (sample_stride < 1)
        throw std::invalid_argument("sample_stride: must be >= 1");
    if (diag_stride < 1)
        throw std::invalid_argument("diag_stride: must be >= 1");
    if (diag_order < 1 || diag_order > 3)
        throw std::invalid_argument("diag_order: must lie in [1, 3]");
    if (!(act_margin > 0) || !(hysteresis > 0))
        throw std::invalid_argument("act_margin: reservoir margins must be > 0");
    if (mode == Mode::full_torus || reservoir_wrap)
        if (!(L > 4 * potential.R))
            throw std::invalid_argument("L: must exceed 4R");
    if (mode == Mode::reservoir && reservoir_wrap && !(L > 2 * R_out()))
        throw std::invalid_argument("L: must exceed twice the reservoir radius");
}

double schedule_reentry(double dist, double R_act, double speed,
                        double v_bound, double t)
{
    return t + (dist - R_act) / (speed + v_bound);
}

namespace {

double norm(double const* a, int d)
{
    double s = 0;
    for (int k = 0; k < d; ++k)
        s += a[k] * a[k];
    return std::sqrt(s);
}

struct Check
{
    double time;
    std::uint32_t slot;
    std::uint32_t gen;

    bool operator>(Check const& o) const
    {
        return time != o.time ? time > o.time : slot > o.slot;
    }
};

/*!
 * One trajectory split into step phases so that a barred copy can branch
 * off between the force evaluation and the closing half kick.
 */
class Runner
{
  public:
    Runner(EngineConfig const& cfg, Mode mode, std::uint64_t seed,
           std::uint64_t index, std::string const& hash)
        : cfg_{&cfg},
          phi_{cfg.potential},
          mode_{mode},
          dt_{cfg.dt_eff()},
          steps_{static_cast<std::int64_t>(std::llround(cfg.T() / dt_))},
          rng_{seed, index, Substream::dynamics}
    {
        cfg.validate(mode);
        int const d = cfg.potential.d;
        RngStream init{seed, index, Substream::initial};
        InitialConfiguration ic;
        if (mode == Mode::full_torus)
            ic = sample_initial_configuration(phi_, cfg.law, cfg.L, cfg.N, init);
        else
            ic = sample_ball_configuration(phi_, cfg.law, cfg.R_act(), cfg.N,
                                           init);
        double const L = mode == Mode::full_torus || cfg.reservoir_wrap ? cfg.L
                                                                        : 0.0;
        s = make_state(d, L, cfg.N, ic.X.data(), ic.V.data(), ic.x, ic.v,
                       cfg.potential.R, mode == Mode::full_torus);
        next_id_ = ic.count();

        rec.mode = mode;
        rec.config_hash = hash;
        rec.seed = seed;
        rec.index = index;
        rec.d = d;
        rec.N = cfg.N;
        rec.dt = dt_;
        rec.initial_count = ic.count();
        if (cfg.diagnostics)
        {
            indices_ = multi_indices(d, cfg.diag_order);
            S_.assign(indices_.size(), 0.0);
            S_prev_.assign(indices_.size(), 0.0);
            cum_.assign(indices_.size(), 0.0);
            rec.sup_S.assign(indices_.size(), 0.0);
            rec.sup_tm.assign(6, 0.0);
        }
        v_bound_ = norm(s.V.data(), d) + cfg.v_slack;

        compute_forces(s, phi_);
        for (std::uint32_t i : s.near)
        {
            s.p.inside[i] = 1;
            s.p.sigma[i] = 0;
            InteractionEvent e;
            e.id = s.p.id[i];
            e.entry = 0;
            e.speed = rel_speed(i);
            e.inside_at_start = true;
            s.p.event[i] = static_cast<std::int64_t>(rec.events.size());
            rec.events.push_back(e);
        }
        prev_inside_ = s.near;
        if (cfg.energy_trace && mode == Mode::full_torus)
        {
            H0_ = hamiltonian(s, phi_);
            rec.energy0 = H0_;
        }
        observe();
    }

    std::int64_t steps() const { return steps_; }
    std::int64_t step() const { return step_; }
    double dt() const { return dt_; }
    Potential const& phi() const { return phi_; }

    //! Half kick, drift, promotions and injection
    void begin_step()
    {
        ++step_;
        kick(s, 0.5 * dt_);
        drift(s, dt_);
        s.t = static_cast<double>(step_) * dt_;
        if (mode_ == Mode::reservoir)
        {
            process_queue();
            if (cfg_->exhaustive_check)
                exhaustive_scan();
            inject();
        }
    }

    //! Forces at the new positions and reservoir demotion
    void forces()
    {
        compute_forces(s, phi_);
        if (mode_ == Mode::reservoir)
            demote();
    }

    /*!
     * Entry/exit bookkeeping against the fresh near list. Returns slots
     * entering B(X, R) for the first time during this step.
     */
    std::vector<std::uint32_t> const& update_events()
    {
        first_entries_.clear();
        if (stamp_.size() < s.p.slots())
            stamp_.resize(s.p.slots(), -1);
        for (std::uint32_t i : s.near)
            stamp_[i] = step_;
        double const t = s.t;
        for (std::uint32_t i : prev_inside_)
        {
            if (stamp_[i] == step_)
                continue;
            if (s.excluded >= 0 && s.p.id[i] == std::uint64_t(s.excluded))
                continue;
            s.p.inside[i] = 0;
            if (s.p.event[i] >= 0)
                rec.events[s.p.event[i]].exit = t;
        }
        double const R = cfg_->potential.R;
        for (std::uint32_t i : s.near)
        {
            if (s.p.inside[i])
                continue;
            s.p.inside[i] = 1;
            double const u = rel_speed(i);
            std::int64_t const prev = s.p.event[i];
            if (prev >= 0)
            {
                InteractionEvent& e = rec.events[prev];
                if (t - e.entry < 6 * R / u)
                {
                    e.exit = kNoTime;
                    continue;
                }
            }
            InteractionEvent e;
            e.id = s.p.id[i];
            e.entry = t;
            e.speed = u;
            e.kind = prev >= 0 ? EventKind::recollision
                               : EventKind::first_interaction;
            if (prev < 0)
            {
                s.p.sigma[i] = t;
                first_entries_.push_back(i);
            }
            s.p.event[i] = static_cast<std::int64_t>(rec.events.size());
            rec.events.push_back(e);
        }
        prev_inside_ = s.near;
        return first_entries_;
    }

    //! Closing half kick and observation
    void end_step()
    {
        kick(s, 0.5 * dt_);
        observe();
    }

    void full_step()
    {
        begin_step();
        forces();
        update_events();
        end_step();
    }

    TrajectoryRecord finish()
    {
        rec.sup_inside = sup_inside_;
        return std::move(rec);
    }

    SystemState s;
    TrajectoryRecord rec;

  private:
    double rel_speed(std::uint32_t i) const
    {
        double const* v = s.p.vp(i);
        double a = 0;
        for (int k = 0; k < s.d; ++k)
            a += (v[k] - s.V[k]) * (v[k] - s.V[k]);
        return std::sqrt(a);
    }

    double distance(double const* x) const
    {
        double y[8];
        minimal_image(s.X.data(), x, s.L, s.d, y);
        return norm(y, s.d);
    }

    double dormant_distance(std::uint32_t i) const
    {
        double x[8];
        dormant_position(s, i, s.t, x);
        return distance(x);
    }

    void schedule(std::uint32_t i, double dist)
    {
        if (gen_.size() < s.p.slots())
            gen_.resize(s.p.slots(), 0);
        double const sp = norm(s.p.vp(i), s.d);
        queue_.push({schedule_reentry(dist, cfg_->R_act(), sp, v_bound_, s.t),
                     i, ++gen_[i]});
    }

    void process_queue()
    {
        double const vnow = norm(s.V.data(), s.d);
        if (vnow > v_bound_)
        {
            v_bound_ = vnow + cfg_->v_slack;
            std::vector<Check> all;
            while (!queue_.empty())
            {
                all.push_back(queue_.top());
                queue_.pop();
            }
            for (Check c : all)
                queue_.push({s.t, c.slot, c.gen});
        }
        double const R_act = cfg_->R_act();
        while (!queue_.empty() && queue_.top().time <= s.t)
        {
            Check const c = queue_.top();
            queue_.pop();
            if (s.p.status[c.slot] != Status::dormant || gen_[c.slot] != c.gen)
                continue;
            double const dist = dormant_distance(c.slot);
            double const reach = (norm(s.p.vp(c.slot), s.d) + v_bound_) * dt_;
            if (dist <= R_act + reach)
            {
                make_active(s, c.slot);
                ++rec.promotions;
                rec.promotion_excess =
                    std::max(rec.promotion_excess, (dist - R_act) / reach);
                if (dist < cfg_->potential.R)
                    ++rec.missed_reentries;
            }
            else
                schedule(c.slot, dist);
        }
    }

    void exhaustive_scan()
    {
        double const R_act = cfg_->R_act();
        for (std::uint32_t i = 0; i < s.p.slots(); ++i)
            if (s.p.status[i] == Status::dormant && dormant_distance(i) <= R_act)
                ++rec.missed_reentries;
    }

    void inject()
    {
        sample_influx(s.X.data(), s.V.data(), s.d, cfg_->R_act(), dt_, cfg_->N,
                      rng_, injected_);
        for (Injected& q : injected_)
        {
            wrap_position(q.x.data(), s.L, s.d);
            s.p.add(q.x.data(), q.v.data(), next_id_++, s.t);
        }
        rec.injected += injected_.size();
        if (s.p.live() > cfg_->particle_cap)
            throw std::runtime_error("particle_cap: tracked particle count "
                                     "exceeded the configured cap");
    }

    void demote()
    {
        double const R_out = cfg_->R_out();
        leaving_.clear();
        for (std::uint32_t i : s.p.active())
        {
            double const dist = distance(s.p.xp(i));
            if (dist > R_out)
                leaving_.push_back(i);
        }
        for (std::uint32_t i : leaving_)
        {
            if (s.p.modified[i])
            {
                double const dist = distance(s.p.xp(i));
                make_dormant(s, i);
                schedule(i, dist);
            }
            else
                s.p.release(i);
        }
    }

    void observe()
    {
        rec.max_active = std::max<std::uint64_t>(rec.max_active,
                                                 s.p.active().size());
        rec.max_tracked = std::max<std::uint64_t>(rec.max_tracked, s.p.live());
        sup_inside_ = std::max<std::uint64_t>(sup_inside_, s.near.size());
        bool const last = step_ == steps_;
        if (step_ % cfg_->sample_stride == 0 || last)
        {
            rec.t.push_back(s.t);
            rec.V.insert(rec.V.end(), s.V.begin(), s.V.end());
            rec.X.insert(rec.X.end(), s.Xu.begin(), s.Xu.end());
            if (cfg_->energy_trace && mode_ == Mode::full_torus)
                rec.energy.push_back(hamiltonian(s, phi_) - H0_);
        }
        if (cfg_->diagnostics && (step_ % cfg_->diag_stride == 0 || last))
            diagnose();
    }

    void diagnose()
    {
        derivative_sums(s, phi_, indices_, S_.data());
        std::size_t const nI = indices_.size();
        if (!rec.diag_t.empty())
        {
            double const h = s.t - rec.diag_t.back();
            for (std::size_t m = 0; m < nI; ++m)
                cum_[m] += 0.5 * h * (S_prev_[m] + S_[m]);
        }
        rec.diag_t.push_back(s.t);
        rec.cum.insert(rec.cum.end(), cum_.begin(), cum_.end());
        for (std::size_t m = 0; m < nI; ++m)
            rec.sup_S[m] = std::max(rec.sup_S[m], std::abs(S_[m]));
        S_prev_ = S_;

        double const cap = std::cbrt(cfg_->N);
        double sums[6] = {};
        for (std::uint32_t i : s.near)
        {
            double const tm = std::min(1 / rel_speed(i), cap);
            double pw = 1;
            for (int k = 0; k < 6; ++k)
            {
                pw *= tm;
                sums[k] += pw;
            }
        }
        for (int k = 0; k < 6; ++k)
            rec.sup_tm[k] = std::max(rec.sup_tm[k], sums[k]);

        double const vmax = std::sqrt(cfg_->N);
        bool viol = norm(s.V.data(), s.d) >= vmax;
        for (std::uint32_t i : s.p.active())
            viol = viol || norm(s.p.vp(i), s.d) >= vmax;
        rec.cutoff_violations += viol;
    }

    EngineConfig const* cfg_;
    Potential phi_;
    Mode mode_;
    double dt_;
    std::int64_t steps_;
    std::int64_t step_ = 0;
    RngStream rng_;
    std::uint64_t next_id_ = 0;
    double v_bound_ = 0;
    double H0_ = 0;
    std::uint64_t sup_inside_ = 0;

    std::priority_queue<Check, std::vector<Check>, std::greater<>> queue_;
    std::vector<std::uint32_t> gen_;
    std::vector<std::int64_t> stamp_;
    std::vector<std::uint32_t> prev_inside_;
    std::vector<std::uint32_t> first_entries_;
    std::vector<std::uint32_t> leaving_;
    std::vector<Injected> injected_;

    std::vector<std::vector<int>> indices_;
    std::vector<double> S_, S_prev_, cum_;
};

}  // namespace

TrajectoryRecord run_trajectory(EngineConfig const& cfg, Mode mode,
                                std::uint64_t seed, std::uint64_t index,
                                std::string const& config_hash)
{
    Runner r(cfg, mode, seed, index, config_hash);
    while (r.step() < r.steps())
        r.full_step();
    return r.finish();
}

std::vector<TrajectoryRecord> run_ensemble(EngineConfig const& cfg, Mode mode,
                                           std::uint64_t seed,
                                           std::size_t count, Exec exec,
                                           std::string const& config_hash)
{
    cfg.validate(mode);
    std::vector<TrajectoryRecord> out(count);
    auto const n = static_cast<std::int64_t>(count);
    if (exec == Exec::parallel)
    {
        std::vector<std::string> errors(count);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i)
        {
            try
            {
                out[i] = run_trajectory(cfg, mode, seed, i, config_hash);
            }
            catch (std::exception const& e)
            {
                errors[i] = e.what();
            }
        }
        for (auto const& e : errors)
            if (!e.empty())
                throw std::runtime_error(e);
    }
    else
    {
        for (std::int64_t i = 0; i < n; ++i)
            out[i] = run_trajectory(cfg, mode, seed, i, config_hash);
    }
    return out;
}

std::vector<ClassifiedEvent> classify_events(TrajectoryRecord const& rec,
                                             double c_T, EventSummary* summary)
{
    static std::vector<double> const edges = {0, 0.5, 1, 2, 3, 4, 6,
                                              8, 12, 24, 48};
    std::vector<ClassifiedEvent> out;
    out.reserve(rec.events.size());
    EventSummary sm;
    sm.ratio_edges = edges;
    sm.ratio_hist.assign(edges.size(), 0);
    std::vector<std::uint64_t> ids;
    for (InteractionEvent const& e : rec.events)
    {
        ClassifiedEvent c;
        c.event = e;
        c.T_m = 1 / e.speed;
        c.ratio = kNoTime;
        ++sm.events;
        ids.push_back(e.id);
        if (e.kind == EventKind::recollision)
            ++sm.recollisions;
        if (!e.censored())
        {
            c.ratio = e.duration() / c.T_m;
            c.within_bound = e.duration() <= c_T * c.T_m;
            ++sm.complete;
            sm.within_bound += c.within_bound;
            auto it = std::upper_bound(edges.begin(), edges.end(), c.ratio);
            ++sm.ratio_hist[std::max<std::ptrdiff_t>(0, it - edges.begin() - 1)];
        }
        out.push_back(c);
    }
    std::sort(ids.begin(), ids.end());
    sm.interactions = std::unique(ids.begin(), ids.end()) - ids.begin();
    if (summary)
        *summary = sm;
    return out;
}

TwinResult twin_trajectory(EngineConfig const& cfg, std::uint64_t seed,
                           std::uint64_t index, Selector selector,
                           std::uint64_t particle_id)
{
    TwinResult res;
    Runner a(cfg, Mode::full_torus, seed, index, {});
    std::optional<Runner> b;
    int const d = cfg.potential.d;
    double const invN = 1 / cfg.N;
    std::uint32_t slot = 0;
    double W[8] = {}, P[8] = {}, g_prev[8] = {};

    auto grad_bar = [&](double* g) {
        double y[8];
        minimal_image(b->s.X.data(), b->s.p.xp(slot), b->s.L, d, y);
        a.phi().gradient(y, g);
    };

    while (a.step() < a.steps())
    {
        a.begin_step();
        if (b)
            b->begin_step();
        a.forces();
        if (b)
            b->forces();
        auto const& entered = a.update_events();
        if (b)
            b->update_events();
        if (!b)
        {
            for (std::uint32_t i : entered)
            {
                if (selector == Selector::by_id && a.s.p.id[i] != particle_id)
                    continue;
                slot = i;
                b.emplace(a);
                b->s.excluded = static_cast<std::int64_t>(a.s.p.id[i]);
                b->forces();
                res.found = true;
                res.trace.particle = a.s.p.id[i];
                res.trace.sigma = a.s.t;
                res.trace.speed = a.rec.events[a.s.p.event[i]].speed;
                grad_bar(g_prev);
                for (int k = 0; k < d; ++k)
                    W[k] = 0.5 * a.dt() * invN * g_prev[k];
                break;
            }
        }
        a.end_step();
        if (!b)
            continue;
        b->end_step();

        double g[8];
        grad_bar(g);
        double const h = a.s.t - res.trace.sigma;
        bool const first = res.trace.lag.empty();
        if (!first)
            for (int k = 0; k < d; ++k)
            {
                double const Wold = W[k];
                W[k] += 0.5 * a.dt() * invN * (g_prev[k] + g[k]);
                P[k] += 0.5 * a.dt() * (Wold + W[k]);
            }
        std::copy(g, g + d, g_prev);
        double dx = 0, dv = 0, dvc = 0, dxc = 0;
        for (int k = 0; k < d; ++k)
        {
            double const ex = a.s.Xu[k] - b->s.Xu[k];
            double const ev = a.s.V[k] - b->s.V[k];
            dx += ex * ex;
            dv += ev * ev;
            dvc += (ev + W[k]) * (ev + W[k]);
            dxc += (ex + P[k]) * (ex + P[k]);
        }
        res.trace.lag.push_back(h);
        res.trace.dX.push_back(std::sqrt(dx));
        res.trace.dV.push_back(std::sqrt(dv));
        res.trace.dV_corr.push_back(std::sqrt(dvc));
        res.trace.dX_corr.push_back(std::sqrt(dxc));
    }
    res.record = a.finish();
    if (b)
        res.record_bar = b->finish();
    return res;
}

}  // namespace landau
