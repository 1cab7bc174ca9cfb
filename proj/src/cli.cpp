// SPDX-License-Identifier: Apache-2.0
#include "landau/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "landau/experiments.hpp"
#include "landau/io.hpp"

namespace landau {

namespace {

using Json = nlohmann::ordered_json;

Json yaml_to_json(YAML::Node const& n)
{
    switch (n.Type())
    {
        case YAML::NodeType::Map:
        {
            Json j = Json::object();
            for (auto const& kv : n)
                j[kv.first.as<std::string>()] = yaml_to_json(kv.second);
            return j;
        }
        case YAML::NodeType::Sequence:
        {
            Json j = Json::array();
            for (auto const& x : n)
                j.push_back(yaml_to_json(x));
            return j;
        }
        case YAML::NodeType::Scalar:
        {
            std::string const s = n.Scalar();
            if (s == "true" || s == "false")
                return s == "true";
            double x = 0;
            if (YAML::convert<double>::decode(n, x) && s.find_first_not_of("0123456789.eE+-") == std::string::npos)
                return x;
            return s;
        }
        default:
            return nullptr;
    }
}

class Writer
{
  public:
    Writer(std::filesystem::path dir, Provenance prov)
        : dir_(std::move(dir))
        , prov_(std::move(prov))
    {
        std::filesystem::create_directories(dir_);
    }

    CsvTable table(std::vector<std::string> columns) const { return {prov_, std::move(columns)}; }

    void put(std::string const& name, std::string const& content)
    {
        auto const path = dir_ / name;
        write_atomic(path, content);
        files_.push_back(path);
    }

    void put(std::string const& name, CsvTable const& t) { put(name, t.str()); }

    std::vector<std::filesystem::path> files() const { return files_; }

  private:
    std::filesystem::path dir_;
    Provenance prov_;
    std::vector<std::filesystem::path> files_;
};

void append(std::vector<CheckResult>& to, std::vector<CheckResult> const& from)
{
    to.insert(to.end(), from.begin(), from.end());
}

std::vector<std::string> coordinate_columns(char const* prefix, int d)
{
    std::vector<std::string> out;
    for (int k = 1; k <= d; ++k)
        out.push_back(prefix + std::to_string(k));
    return out;
}

// subcommand tables

void write_simulate(Writer& w, RunConfig const& c, Exec exec, std::string const& hash)
{
    EngineConfig const e = c.engine_config();
    auto const recs = run_ensemble(e, c.mode(), c.seed, c.ensemble, exec, hash);
    int const d = c.d;
    std::vector<std::string> cols = {"run", "t"};
    for (auto const& s : coordinate_columns("X", d))
        cols.push_back(s);
    for (auto const& s : coordinate_columns("V", d))
        cols.push_back(s);
    cols.push_back("energy");
    CsvTable traj = w.table(cols);
    CsvTable events = w.table({"run", "id", "kind", "entry", "exit", "speed", "inside_at_start"});
    CsvTable runs = w.table({"run", "samples", "initial_count", "injected", "max_active",
                             "max_tracked", "missed_reentries", "promotions", "energy0"});
    for (auto const& r : recs)
    {
        double const run = static_cast<double>(r.index);
        for (std::size_t i = 0; i < r.samples(); ++i)
        {
            std::vector<double> row = {run, r.t[i]};
            row.insert(row.end(), r.X.begin() + i * d, r.X.begin() + (i + 1) * d);
            row.insert(row.end(), r.V.begin() + i * d, r.V.begin() + (i + 1) * d);
            row.push_back(i < r.energy.size() ? r.energy[i] : std::nan(""));
            traj.add(row);
        }
        for (auto const& ev : r.events)
            events.add({run, static_cast<double>(ev.id),
                        ev.kind == EventKind::recollision ? 1.0 : 0.0, ev.entry, ev.exit,
                        ev.speed, ev.inside_at_start ? 1.0 : 0.0});
        runs.add({run, static_cast<double>(r.samples()), static_cast<double>(r.initial_count),
                  static_cast<double>(r.injected), static_cast<double>(r.max_active),
                  static_cast<double>(r.max_tracked), static_cast<double>(r.missed_reentries),
                  static_cast<double>(r.promotions), r.energy0});
    }
    w.put("trajectories.csv", traj);
    w.put("events.csv", events);
    w.put("runs.csv", runs);
}

void write_coeffs(Writer& w, CoeffsStudy const& st)
{
    CsvTable knots = w.table({"speed", "a", "b", "lambda"});
    for (auto const& k : st.knots)
        knots.add({k.speed, k.a, k.b, k.lambda});
    w.put("coefficients.csv", knots);

    std::vector<std::string> cols = coordinate_columns("V", st.d);
    for (char const* s : {"drift_error", "divergence_error", "fourier_error", "symmetry_error",
                          "min_eigenvalue"})
        cols.push_back(s);
    CsvTable id = w.table(cols);
    for (auto const& p : st.identities.points)
    {
        std::vector<double> row(p.V.data(), p.V.data() + p.V.size());
        for (double x : {p.drift_error, p.divergence_error, p.fourier_error, p.symmetry_error,
                         p.min_eigenvalue})
            row.push_back(x);
        id.add(row);
    }
    w.put("identities.csv", id);

    CsvTable tr = w.table({"t", "dD", "dLambda"});
    for (auto const& r : st.truncation)
        tr.add({r.t, r.dD, r.dLambda});
    w.put("truncation.csv", tr);

    CsvTable gs = w.table({"f", "integral"});
    for (auto const& s : st.stationarity)
        gs.add_cells({s.name, format_number(s.value)});
    w.put("generator_stationarity.csv", gs);
}

void write_sde(Writer& w, SdeEnsemble const& s)
{
    std::vector<std::string> cols = {"tau", "path"};
    for (auto const& x : coordinate_columns("V", s.d))
        cols.push_back(x);
    CsvTable m = w.table(cols);
    for (std::size_t k = 0; k < s.tau_grid.size(); ++k)
    {
        auto const& rows = s.marginals[k];
        std::size_t const n = rows.size() / s.d;
        for (std::size_t p = 0; p < n; ++p)
        {
            std::vector<double> row = {s.tau_grid[k], static_cast<double>(p)};
            row.insert(row.end(), rows.begin() + p * s.d, rows.begin() + (p + 1) * s.d);
            m.add(row);
        }
    }
    w.put("sde_marginals.csv", m);

    CsvTable mom = w.table({"tau", "coordinate", "mean", "variance", "std_error"});
    for (std::size_t k = 0; k < s.tau_grid.size(); ++k)
        for (int c = 0; c < s.d; ++c)
        {
            MomentAccumulator acc;
            for (double x : s.coordinate(k, c))
                acc.add(x);
            mom.add({s.tau_grid[k], static_cast<double>(c + 1), acc.mean(), acc.variance(),
                     acc.std_error()});
        }
    w.put("sde_moments.csv", mom);

    if (!s.paths.empty())
    {
        std::vector<std::string> pc = {"path", "tau"};
        for (auto const& x : coordinate_columns("V", s.d))
            pc.push_back(x);
        CsvTable pt = w.table(pc);
        for (std::size_t p = 0; p < s.paths.size(); ++p)
            for (std::size_t i = 0; i < s.path_t.size(); ++i)
            {
                std::vector<double> row = {static_cast<double>(p), s.path_t[i]};
                row.insert(row.end(), s.paths[p].begin() + i * s.d,
                           s.paths[p].begin() + (i + 1) * s.d);
                pt.add(row);
            }
        w.put("sde_paths.csv", pt);
    }
}

void write_energy(Writer& w, EnergyStudy const& st)
{
    CsvTable t = w.table({"run", "dt", "max_relative_drift", "max_relative_drift_half_dt"});
    for (std::size_t i = 0; i < st.drift.size(); ++i)
        t.add({static_cast<double>(i), st.dt, st.drift[i], st.drift_half[i]});
    w.put("energy.csv", t);
}

void add_recollision(CsvTable& t, std::string const& label, RecollisionRow const& r)
{
    t.add_cells({label, format_number(r.N), std::to_string(r.interactions),
                 std::to_string(r.recollisions), format_number(r.frequency),
                 format_number(r.wilson.lo), format_number(r.wilson.hi),
                 std::to_string(r.complete), std::to_string(r.within_bound),
                 format_number(r.within_fraction), std::to_string(r.slow)});
}

std::vector<std::string> recollision_columns()
{
    return {"series", "N", "interactions", "recollisions", "frequency", "wilson_lo",
            "wilson_hi", "complete", "within_bound", "within_fraction", "slow"};
}

void write_oracle(Writer& w, OracleStudy const& st, int d)
{
    std::vector<std::string> cols = {"mode", "run"};
    for (auto const& x : coordinate_columns("dV", d))
        cols.push_back(x);
    CsvTable dv = w.table(cols);
    auto rows = [&](std::vector<double> const& v, char const* mode) {
        for (std::size_t r = 0; r * d < v.size(); ++r)
        {
            std::vector<std::string> cells = {mode, std::to_string(r)};
            for (int k = 0; k < d; ++k)
                cells.push_back(format_number(v[r * d + k]));
            dv.add_cells(cells);
        }
    };
    rows(st.dV_full, "full_torus");
    rows(st.dV_reservoir, "reservoir");
    w.put("oracle_dV.csv", dv);

    CsvTable ks = w.table({"coordinate", "ks_statistic", "p_value"});
    for (std::size_t k = 0; k < st.ks.size(); ++k)
        ks.add({static_cast<double>(k + 1), st.ks[k].statistic, st.ks[k].p_value});
    w.put("oracle_ks.csv", ks);

    CsvTable rc = w.table(recollision_columns());
    add_recollision(rc, "full_torus", st.full);
    add_recollision(rc, "reservoir", st.reservoir);
    w.put("oracle_recollisions.csv", rc);
}

void write_sweep(Writer& w, SweepStudy const& st)
{
    CsvTable ks = w.table({"N", "coordinate", "ks_statistic", "p_value", "wasserstein1"});
    CsvTable res = w.table({"N", "runs", "T", "residual", "std_error", "n"});
    CsvTable inc = w.table({"N", "p", "gap", "moment", "std_error"});
    CsvTable fits = w.table({"N", "fit", "slope", "slope_se", "intercept", "points"});
    CsvTable rc = w.table(recollision_columns());
    CsvTable fl = w.table({"N", "check", "violations", "trials", "wilson_lo", "wilson_hi",
                           "worst_ratio"});
    CsvTable fc = w.table({"N", "alpha", "beta", "delta", "fitted_C_int", "fitted_C_avg",
                           "cutoff_violations", "max_tracked", "missed_reentries"});
    for (auto const& r : st.rows)
    {
        for (std::size_t k = 0; k < r.ks.size(); ++k)
            ks.add({r.N, static_cast<double>(k + 1), r.ks[k].statistic, r.ks[k].p_value,
                    r.w1[k]});
        res.add({r.N, static_cast<double>(r.runs), r.T, r.residual.value, r.residual.std_error,
                 static_cast<double>(r.residual.n)});
        for (auto const& [p, m] : {std::pair{2.0, &r.p2}, std::pair{4.0, &r.p4}})
            for (std::size_t i = 0; i < m->gaps.size(); ++i)
                inc.add({r.N, p, m->gaps[i], m->moments[i].value, m->moments[i].std_error});
        for (auto const& [name, f] : {std::pair{"p2_short", &r.p2_short},
                                      std::pair{"p2_large", &r.p2_large},
                                      std::pair{"p4_large", &r.p4_large}})
            fits.add_cells({format_number(r.N), name, format_number(f->slope),
                            format_number(f->slope_se), format_number(f->intercept),
                            std::to_string(f->points)});
        add_recollision(rc, "reservoir", r.recollisions);
        auto const& f = r.fluctuations;
        for (auto const& [name, v] : {std::pair{"a_derivative_sup", &f.derivative_sup},
                                      std::pair{"b_interacting_count", &f.interacting_count},
                                      std::pair{"c_time_sums", &f.time_sums},
                                      std::pair{"d_time_averaged", &f.time_averaged}})
            fl.add_cells({format_number(r.N), name, std::to_string(v->violations),
                          std::to_string(v->trials), format_number(v->wilson.lo),
                          format_number(v->wilson.hi), format_number(v->worst_ratio)});
        fc.add({r.N, f.alpha, f.beta, f.delta, f.fitted_C_int, f.fitted_C_avg,
                static_cast<double>(f.cutoff_violations), static_cast<double>(r.max_tracked),
                static_cast<double>(r.missed_reentries)});
    }
    w.put("sweep_ks.csv", ks);
    w.put("sweep_residual.csv", res);
    w.put("sweep_increments.csv", inc);
    w.put("sweep_increment_fits.csv", fits);
    w.put("sweep_recollisions.csv", rc);
    w.put("sweep_fluctuations.csv", fl);
    w.put("sweep_constants.csv", fc);

    CsvTable sta = w.table({"t", "coordinate", "ks_statistic", "p_value"});
    for (auto const& s : st.stationarity)
        sta.add({s.t, static_cast<double>(s.coordinate + 1), s.result.statistic,
                 s.result.p_value});
    w.put("stationarity.csv", sta);
}

void write_twin(Writer& w, TwinStudy const& st)
{
    CsvTable cur = w.table({"N", "lag", "median_N_sup_dX"});
    CsvTable runs = w.table({"N", "entry", "T_m", "ratio_at_5T_m"});
    CsvTable sum = w.table({"N", "found", "amplitude", "median_ratio"});
    for (auto const& r : st.rows)
    {
        for (std::size_t j = 0; j < r.lag.size(); ++j)
            cur.add({r.N, r.lag[j], r.median_sup[j]});
        for (std::size_t i = 0; i < r.T_m.size(); ++i)
            runs.add({r.N, static_cast<double>(i), r.T_m[i],
                      i < r.ratio.size() ? r.ratio[i] : std::nan("")});
        sum.add({r.N, static_cast<double>(r.found), r.amplitude, r.median_ratio});
    }
    w.put("twin_curves.csv", cur);
    w.put("twin_runs.csv", runs);
    w.put("twin_summary.csv", sum);
}

void write_bounds(Writer& w, BoundsStudy const& st)
{
    CsvTable g = w.table({"case", "problem", "horizon", "c_hat", "c_hat_half", "stability",
                          "c_bound", "hypotheses_ok", "pass"});
    auto rows = [&](std::vector<GronwallReport> const& v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            g.add_cells({to_string(v[i].kind), std::to_string(i), format_number(v[i].horizon),
                         format_number(v[i].c_hat), format_number(v[i].c_hat_half),
                         format_number(v[i].stability), format_number(v[i].c_bound),
                         v[i].hypotheses_ok ? "1" : "0", v[i].pass ? "1" : "0"});
    };
    rows(st.report.simple);
    rows(st.report.averaged);
    w.put("gronwall.csv", g);

    auto const& r = st.report;
    CsvTable b = w.table({"quantity", "value"});
    for (auto const& [k, v] : {std::pair{"cosh_value", r.cosh_value},
                               std::pair{"cosh_exact", r.cosh_exact},
                               std::pair{"cosh_relative_error", r.cosh_relative_error},
                               std::pair{"cosh_error_estimate", r.cosh_error_estimate},
                               std::pair{"cosh_c_hat", r.cosh_gronwall.c_hat},
                               std::pair{"cosh_c_bound", r.cosh_gronwall.c_bound},
                               std::pair{"peano_baker_difference", r.pb_difference},
                               std::pair{"peano_baker_tolerance", r.pb_tolerance}})
        b.add_cells({k, format_number(v)});
    w.put("bounds.csv", b);
}

}  // namespace

std::vector<std::string> const& subcommands()
{
    static std::vector<std::string> const s = {"simulate", "coeffs", "sde",  "validate",
                                               "twin",     "bounds", "sweep"};
    return s;
}

std::string config_json(RunConfig const& c)
{
    Json j;
    j["schema"] = "landau-tagged.config.v1";
    j["config_hash"] = config_hash(c);
    j["version"] = version_string();
    j["config"] = yaml_to_json(YAML::Load(serialize_config(c)));
    return j.dump(2) + "\n";
}

std::string error_json(std::string const& command, std::exception const& e)
{
    Json j;
    j["schema"] = "landau-tagged.error.v1";
    j["command"] = command;
    if (auto const* ce = dynamic_cast<ConfigError const*>(&e))
    {
        j["type"] = "config";
        j["field"] = ce->field;
    }
    else
        j["type"] = "runtime";
    j["message"] = e.what();
    return j.dump();
}

DispatchResult dispatch(DispatchOptions const& opt)
{
    auto const& cmds = subcommands();
    if (std::find(cmds.begin(), cmds.end(), opt.command) == cmds.end())
        throw std::invalid_argument("unknown subcommand '" + opt.command + "'");
    RunConfig c = opt.config;
    if (opt.seed)
        c.seed = *opt.seed;
    if (opt.mode)
        c.engine.mode = *opt.mode;
    c.validate();
    if (opt.threads < 0)
        throw ConfigError("threads", "must be positive");
    if (opt.threads > 0)
        omp_set_num_threads(opt.threads);
    Exec const exec = opt.threads == 1 ? Exec::serial : Exec::parallel;

    std::string const hash = config_hash(c);
    DispatchResult res;
    res.dir = opt.out / opt.command;
    Writer w(res.dir, Provenance{hash, c.seed});
    w.put("config.yaml", serialize_config(c));
    w.put("config.json", config_json(c));

    DiagnosticsReport& rep = res.report;
    rep.config_hash = hash;
    rep.seed = c.seed;
    rep.version = version_string();

    std::string const& cmd = opt.command;
    if (cmd == "simulate")
        write_simulate(w, c, exec, hash);
    if (cmd == "coeffs" || cmd == "sweep")
    {
        CoeffsStudy const st = coeffs_study(c, exec);
        write_coeffs(w, st);
        append(rep.checks, st.checks);
    }
    if (cmd == "sde")
    {
        LandauCoefficients const lc(c.potential_spec());
        CoefficientTable const table(lc, c.coeffs.knots, c.coeffs.vmax, exec == Exec::parallel);
        write_sde(w, run_sde_ensemble(c.sde_config(c.seed), table, exec));
    }
    if (cmd == "validate" || cmd == "sweep")
    {
        EnergyStudy const st = energy_study(c, c.seed, exec);
        write_energy(w, st);
        append(rep.checks, st.checks);
    }
    if (cmd == "sweep")
    {
        OracleStudy const st = oracle_study(c, c.seed, exec);
        write_oracle(w, st, c.oracle.d);
        append(rep.checks, st.checks);
    }
    if (cmd == "validate" || cmd == "sweep")
    {
        std::vector<double> const Ns = cmd == "sweep" ? c.sweep.N : std::vector<double>{c.N};
        SweepStudy const st = sweep_study(c, c.seed, Ns, exec);
        write_sweep(w, st);
        append(rep.checks, st.checks);
    }
    if (cmd == "twin" || cmd == "sweep")
    {
        TwinStudy const st = twin_study(c, c.seed, exec);
        write_twin(w, st);
        append(rep.checks, st.checks);
    }
    if (cmd == "bounds" || cmd == "sweep")
    {
        BoundsStudy const st = bounds_study(c, c.seed, exec);
        write_bounds(w, st);
        append(rep.checks, st.checks);
    }
    if (cmd != "simulate" && cmd != "sde")
    {
        CsvTable t = w.table({"check", "statistic", "uncertainty", "threshold", "pass"});
        for (auto const& ch : rep.checks)
            t.add_cells({ch.name, format_number(ch.statistic), format_number(ch.uncertainty),
                         ch.threshold, ch.pass ? "1" : "0"});
        w.put("checks.csv", t);
        w.put("report.json", rep.to_json() + "\n");
    }
    res.files = w.files();
    return res;
}

}  // namespace landau
