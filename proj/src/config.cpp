// SPDX-License-Identifier: Apache-2.0
#include "landau/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

namespace landau {

namespace {

class Reader
{
  public:
    Reader(YAML::Node node, std::string path)
        : node_(std::move(node))
        , path_(std::move(path))
    {
        if (node_ && !node_.IsNull() && !node_.IsMap())
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected a mapping");
    }

    std::string field(std::string const& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    template<class T>
    void get(std::string const& key, T& out)
    {
        seen_.insert(key);
        if (!node_ || !node_.IsMap())
            return;
        YAML::Node const v = node_[key];
        if (!v || v.IsNull())
            return;
        try
        {
            out = v.as<T>();
        }
        catch (YAML::Exception const&)
        {
            throw ConfigError(field(key), "has the wrong type");
        }
    }

    Reader sub(std::string const& key)
    {
        seen_.insert(key);
        YAML::Node v;
        if (node_ && node_.IsMap())
            v = node_[key];
        return Reader(v, field(key));
    }

    void finish() const
    {
        if (!node_ || !node_.IsMap())
            return;
        for (auto const& kv : node_)
        {
            std::string const k = kv.first.as<std::string>();
            if (!seen_.count(k))
                throw ConfigError(field(k), "unknown key");
        }
    }

  private:
    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, std::string const& field, std::string const& msg)
{
    if (!ok)
        throw ConfigError(field, msg);
}

void positive(double v, std::string const& field)
{
    require(std::isfinite(v) && v > 0, field, "must be positive");
}

void positive_list(std::vector<double> const& v, std::string const& field)
{
    require(!v.empty(), field, "must not be empty");
    for (double x : v)
        positive(x, field);
}

std::string num(double x)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    std::string s(buf, r.ptr);
    if (s.find_first_of(".eEn") == std::string::npos)
        s += ".0";
    return s;
}

std::string list(std::vector<double> const& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + num(v[i]);
    return s + "]";
}

char const* flag(bool b)
{
    return b ? "true" : "false";
}

}  // namespace

RunConfig parse_config(std::string const& text)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (YAML::Exception const& e)
    {
        throw ConfigError("<document>", std::string("malformed YAML: ") + e.what());
    }
    RunConfig c;
    Reader r(root, "");
    r.get("d", c.d);
    r.get("N", c.N);
    r.get("seed", c.seed);
    r.get("ensemble", c.ensemble);
    {
        Reader s = r.sub("potential");
        s.get("R", c.potential.R);
        s.get("A", c.potential.A);
        s.get("p", c.potential.p);
        s.finish();
    }
    {
        Reader s = r.sub("initial");
        s.get("kind", c.initial.kind);
        s.get("mean", c.initial.mean);
        s.get("scale", c.initial.scale);
        s.finish();
    }
    {
        Reader s = r.sub("engine");
        auto& e = c.engine;
        s.get("mode", e.mode);
        s.get("L", e.L);
        s.get("dt", e.dt);
        s.get("v_ref", e.v_ref);
        s.get("tau_max", e.tau_max);
        s.get("horizon", e.horizon);
        s.get("sample_stride", e.sample_stride);
        s.get("energy_trace", e.energy_trace);
        s.get("act_margin", e.act_margin);
        s.get("hysteresis", e.hysteresis);
        s.get("v_slack", e.v_slack);
        s.get("reservoir_wrap", e.reservoir_wrap);
        s.get("exhaustive_check", e.exhaustive_check);
        s.get("particle_cap", e.particle_cap);
        s.get("diagnostics", e.diagnostics);
        s.get("diag_stride", e.diag_stride);
        s.get("diag_order", e.diag_order);
        s.finish();
    }
    {
        Reader s = r.sub("coeffs");
        auto& e = c.coeffs;
        s.get("knots", e.knots);
        s.get("vmax", e.vmax);
        s.get("speeds", e.speeds);
        s.get("drift_tolerance", e.drift_tolerance);
        s.get("divergence_tolerance", e.divergence_tolerance);
        s.get("fourier_tolerance", e.fourier_tolerance);
        s.get("windows", e.windows);
        s.get("stationarity_nodes", e.stationarity_nodes);
        s.get("stationarity_tolerance", e.stationarity_tolerance);
        s.get("rate_speed", e.rate_speed);
        s.get("rate_tolerance", e.rate_tolerance);
        s.finish();
    }
    {
        Reader s = r.sub("sde");
        s.get("dtau", c.sde.dtau);
        s.get("paths", c.sde.paths);
        s.get("tau_grid", c.sde.tau_grid);
        s.get("path_stride", c.sde.path_stride);
        s.finish();
    }
    {
        Reader s = r.sub("diagnostics");
        auto& e = c.diagnostics;
        s.get("delta", e.delta);
        s.get("alpha", e.alpha);
        s.get("beta", e.beta);
        s.get("C_int", e.C_int);
        s.get("C_tm", e.C_tm);
        s.get("C_avg", e.C_avg);
        s.get("c_T", e.c_T);
        s.get("ks_level", e.ks_level);
        s.get("se_multiple", e.se_multiple);
        s.get("within_fraction", e.within_fraction);
        s.get("violation_level", e.violation_level);
        s.finish();
    }
    {
        Reader s = r.sub("twin");
        auto& e = c.twin;
        s.get("d", e.d);
        s.get("runs", e.runs);
        s.get("L", e.L);
        s.get("horizon", e.horizon);
        s.get("N", e.N);
        s.get("slope", e.slope);
        s.get("slope_tolerance", e.slope_tolerance);
        s.get("amplitude_factor", e.amplitude_factor);
        s.get("correction_factor", e.correction_factor);
        s.get("window_lo", e.window_lo);
        s.get("window_hi", e.window_hi);
        s.finish();
    }
    {
        Reader s = r.sub("bounds");
        auto& e = c.bounds;
        s.get("dim", e.dim);
        s.get("N", e.N);
        s.get("a0", e.a0);
        s.get("b0", e.b0);
        s.get("C_avg", e.C_avg);
        s.get("problems", e.problems);
        s.get("dt", e.dt);
        s.get("pb_order", e.pb_order);
        s.get("pb_dt", e.pb_dt);
        s.get("stability_limit", e.stability_limit);
        s.get("cosh_tolerance", e.cosh_tolerance);
        s.finish();
    }
    {
        Reader s = r.sub("sweep");
        auto& e = c.sweep;
        s.get("N", e.N);
        s.get("runs", e.runs);
        s.get("sample_stride", e.sample_stride);
        s.get("stationarity_runs", e.stationarity_runs);
        s.get("residual_taus", e.residual_taus);
        s.get("short_gaps", e.short_gaps);
        s.get("large_gaps", e.large_gaps);
        s.get("short_slope", e.short_slope);
        s.get("short_tolerance", e.short_tolerance);
        s.get("large_slope", e.large_slope);
        s.get("large_tolerance", e.large_tolerance);
        s.get("p4_min_slope", e.p4_min_slope);
        s.finish();
    }
    {
        Reader s = r.sub("energy");
        auto& e = c.energy;
        s.get("d", e.d);
        s.get("L", e.L);
        s.get("N", e.N);
        s.get("horizon", e.horizon);
        s.get("runs", e.runs);
        s.get("max_drift", e.max_drift);
        s.get("ratio_lo", e.ratio_lo);
        s.get("ratio_hi", e.ratio_hi);
        s.finish();
    }
    {
        Reader s = r.sub("oracle");
        auto& e = c.oracle;
        s.get("d", e.d);
        s.get("L", e.L);
        s.get("N", e.N);
        s.get("horizon", e.horizon);
        s.get("runs", e.runs);
        s.finish();
    }
    r.finish();
    c.validate();
    return c;
}

RunConfig load_config(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("--config", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void RunConfig::validate() const
{
    require(d >= 2 && d <= 6, "d", "must lie in [2, 6]");
    positive(N, "N");
    require(ensemble >= 1, "ensemble", "must be positive");

    positive(potential.R, "potential.R");
    positive(potential.A, "potential.A");
    require(potential.p >= 4, "potential.p", "must be at least 4 (C^3 bump)");

    require(initial.kind == "one" || initial.kind == "gaussian_ratio",
            "initial.kind", "must be one or gaussian_ratio");
    require(initial.mean.empty() || static_cast<int>(initial.mean.size()) == d,
            "initial.mean", "must have d entries");
    if (initial.kind == "gaussian_ratio")
        require(initial.scale > 0 && initial.scale < 1, "initial.scale",
                "must lie in (0, 1)");

    auto const& e = engine;
    require(e.mode == "full" || e.mode == "reservoir", "engine.mode",
            "must be full or reservoir");
    positive(e.L, "engine.L");
    require(e.dt >= 0 && std::isfinite(e.dt), "engine.dt",
            "must be non-negative (0 selects R / (20 v_ref))");
    positive(e.v_ref, "engine.v_ref");
    positive(e.tau_max, "engine.tau_max");
    require(e.horizon >= 0, "engine.horizon", "must be non-negative");
    require(e.sample_stride >= 1, "engine.sample_stride", "must be positive");
    positive(e.act_margin, "engine.act_margin");
    positive(e.hysteresis, "engine.hysteresis");
    positive(e.v_slack, "engine.v_slack");
    require(e.particle_cap >= 1, "engine.particle_cap", "must be positive");
    require(e.diag_stride >= 1, "engine.diag_stride", "must be positive");
    require(e.diag_order >= 1 && e.diag_order <= 3, "engine.diag_order",
            "must lie in [1, 3]");

    require(coeffs.knots >= 8, "coeffs.knots", "must be at least 8");
    positive(coeffs.vmax, "coeffs.vmax");
    require(!coeffs.speeds.empty(), "coeffs.speeds", "must not be empty");
    for (double s : coeffs.speeds)
        require(s >= 0 && std::isfinite(s), "coeffs.speeds", "must be non-negative");
    positive(coeffs.drift_tolerance, "coeffs.drift_tolerance");
    positive(coeffs.divergence_tolerance, "coeffs.divergence_tolerance");
    positive(coeffs.fourier_tolerance, "coeffs.fourier_tolerance");
    positive_list(coeffs.windows, "coeffs.windows");
    require(coeffs.stationarity_nodes >= 2, "coeffs.stationarity_nodes",
            "must be at least 2");
    positive(coeffs.stationarity_tolerance, "coeffs.stationarity_tolerance");

    positive(sde.dtau, "sde.dtau");
    require(sde.paths >= 1, "sde.paths", "must be positive");
    positive_list(sde.tau_grid, "sde.tau_grid");
    require(sde.path_stride >= 0, "sde.path_stride", "must be non-negative");

    auto const& g = diagnostics;
    positive(g.delta, "diagnostics.delta");
    positive(g.C_int, "diagnostics.C_int");
    positive(g.C_tm, "diagnostics.C_tm");
    positive(g.C_avg, "diagnostics.C_avg");
    positive(g.c_T, "diagnostics.c_T");
    require(g.ks_level > 0 && g.ks_level < 1, "diagnostics.ks_level",
            "must lie in (0, 1)");
    positive(g.se_multiple, "diagnostics.se_multiple");
    require(g.within_fraction > 0 && g.within_fraction <= 1,
            "diagnostics.within_fraction", "must lie in (0, 1]");
    require(g.violation_level > 0 && g.violation_level < 1,
            "diagnostics.violation_level", "must lie in (0, 1)");

    require(twin.runs >= 1, "twin.runs", "must be positive");
    positive(twin.L, "twin.L");
    positive(twin.horizon, "twin.horizon");
    positive_list(twin.N, "twin.N");
    positive(twin.slope_tolerance, "twin.slope_tolerance");
    positive(twin.amplitude_factor, "twin.amplitude_factor");
    positive(twin.correction_factor, "twin.correction_factor");
    positive(twin.window_lo, "twin.window_lo");
    require(twin.window_hi > twin.window_lo, "twin.window_hi",
            "must exceed twin.window_lo");

    require(bounds.dim >= 1, "bounds.dim", "must be positive");
    positive(bounds.N, "bounds.N");
    positive(bounds.a0, "bounds.a0");
    positive(bounds.b0, "bounds.b0");
    positive(bounds.C_avg, "bounds.C_avg");
    require(bounds.problems >= 1, "bounds.problems", "must be positive");
    positive(bounds.dt, "bounds.dt");
    require(bounds.pb_order >= 0, "bounds.pb_order", "must be non-negative");
    positive(bounds.pb_dt, "bounds.pb_dt");
    positive(bounds.stability_limit, "bounds.stability_limit");
    positive(bounds.cosh_tolerance, "bounds.cosh_tolerance");

    positive(coeffs.rate_speed, "coeffs.rate_speed");
    positive(coeffs.rate_tolerance, "coeffs.rate_tolerance");
    require(twin.d >= 2 && twin.d <= 6, "twin.d", "must lie in [2, 6]");

    positive_list(sweep.N, "sweep.N");
    require(sweep.runs >= 2, "sweep.runs", "must be at least 2");
    require(sweep.sample_stride >= 1, "sweep.sample_stride", "must be positive");
    require(sweep.stationarity_runs >= 2, "sweep.stationarity_runs",
            "must be at least 2");
    positive_list(sweep.residual_taus, "sweep.residual_taus");
    require(sweep.residual_taus.size() >= 2, "sweep.residual_taus",
            "needs at least two times");
    positive_list(sweep.short_gaps, "sweep.short_gaps");
    positive_list(sweep.large_gaps, "sweep.large_gaps");
    positive(sweep.short_tolerance, "sweep.short_tolerance");
    positive(sweep.large_tolerance, "sweep.large_tolerance");

    require(energy.d >= 2 && energy.d <= 6, "energy.d", "must lie in [2, 6]");
    positive(energy.L, "energy.L");
    positive(energy.N, "energy.N");
    positive(energy.horizon, "energy.horizon");
    require(energy.runs >= 1, "energy.runs", "must be positive");
    positive(energy.max_drift, "energy.max_drift");
    require(energy.ratio_hi > energy.ratio_lo && energy.ratio_lo > 0,
            "energy.ratio_hi", "must exceed energy.ratio_lo > 0");

    require(oracle.d >= 2 && oracle.d <= 6, "oracle.d", "must lie in [2, 6]");
    positive(oracle.L, "oracle.L");
    positive(oracle.N, "oracle.N");
    positive(oracle.horizon, "oracle.horizon");
    require(oracle.runs >= 2, "oracle.runs", "must be at least 2");
}

PotentialSpec RunConfig::potential_spec() const
{
    return {potential.R, potential.A, potential.p, d};
}

InitialLaw RunConfig::initial_law() const
{
    if (initial.kind == "one")
        return InitialLaw::one(d);
    std::vector<double> m = initial.mean;
    if (m.empty())
        m.assign(d, 0.0);
    return InitialLaw::gaussian_ratio(m, initial.scale);
}

Mode RunConfig::mode() const
{
    return mode_from_string(engine.mode);
}

EngineConfig RunConfig::engine_config(double N_override) const
{
    EngineConfig e;
    e.potential = potential_spec();
    e.law = initial_law();
    e.N = N_override > 0 ? N_override : N;
    e.L = engine.L;
    e.dt = engine.dt;
    e.v_ref = engine.v_ref;
    e.tau_max = engine.tau_max;
    e.horizon = engine.horizon;
    e.sample_stride = engine.sample_stride;
    e.energy_trace = engine.energy_trace;
    e.act_margin = engine.act_margin;
    e.hysteresis = engine.hysteresis;
    e.v_slack = engine.v_slack;
    e.reservoir_wrap = engine.reservoir_wrap;
    e.exhaustive_check = engine.exhaustive_check;
    e.particle_cap = engine.particle_cap;
    e.diagnostics = engine.diagnostics;
    e.diag_stride = engine.diag_stride;
    e.diag_order = engine.diag_order;
    return e;
}

SdeConfig RunConfig::sde_config(std::uint64_t seed_override) const
{
    SdeConfig s;
    s.dtau = sde.dtau;
    s.tau_grid = sde.tau_grid;
    s.tau_max = 0;
    for (double t : s.tau_grid)
        s.tau_max = std::max(s.tau_max, t);
    s.paths = sde.paths;
    s.law = initial_law();
    s.path_stride = sde.path_stride;
    s.seed = seed_override;
    return s;
}

FluctuationThresholds RunConfig::thresholds() const
{
    return {diagnostics.C_int, diagnostics.C_tm, diagnostics.C_avg};
}

double RunConfig::alpha() const
{
    return diagnostics.alpha >= 0 ? diagnostics.alpha
                                  : alpha_star(d, diagnostics.delta);
}

double RunConfig::beta() const
{
    return diagnostics.beta >= 0 ? diagnostics.beta
                                 : beta_star(d, diagnostics.delta);
}

BoundsConfig RunConfig::bounds_config() const
{
    BoundsConfig b;
    b.dim = bounds.dim;
    b.N = bounds.N;
    b.a0 = bounds.a0;
    b.b0 = bounds.b0;
    b.C_avg = bounds.C_avg;
    b.problems = bounds.problems;
    b.dt = bounds.dt;
    b.pb_order = bounds.pb_order;
    b.pb_dt = bounds.pb_dt;
    b.stability_limit = bounds.stability_limit;
    b.cosh_tolerance = bounds.cosh_tolerance;
    return b;
}

std::string serialize_config(RunConfig const& c)
{
    std::ostringstream o;
    o << "d: " << c.d << "\n"
      << "N: " << num(c.N) << "\n"
      << "seed: " << c.seed << "\n"
      << "ensemble: " << c.ensemble << "\n";
    o << "potential:\n"
      << "  R: " << num(c.potential.R) << "\n"
      << "  A: " << num(c.potential.A) << "\n"
      << "  p: " << c.potential.p << "\n";
    o << "initial:\n"
      << "  kind: " << c.initial.kind << "\n"
      << "  mean: " << list(c.initial.mean) << "\n"
      << "  scale: " << num(c.initial.scale) << "\n";
    auto const& e = c.engine;
    o << "engine:\n"
      << "  mode: " << e.mode << "\n"
      << "  L: " << num(e.L) << "\n"
      << "  dt: " << num(e.dt) << "\n"
      << "  v_ref: " << num(e.v_ref) << "\n"
      << "  tau_max: " << num(e.tau_max) << "\n"
      << "  horizon: " << num(e.horizon) << "\n"
      << "  sample_stride: " << e.sample_stride << "\n"
      << "  energy_trace: " << flag(e.energy_trace) << "\n"
      << "  act_margin: " << num(e.act_margin) << "\n"
      << "  hysteresis: " << num(e.hysteresis) << "\n"
      << "  v_slack: " << num(e.v_slack) << "\n"
      << "  reservoir_wrap: " << flag(e.reservoir_wrap) << "\n"
      << "  exhaustive_check: " << flag(e.exhaustive_check) << "\n"
      << "  particle_cap: " << e.particle_cap << "\n"
      << "  diagnostics: " << flag(e.diagnostics) << "\n"
      << "  diag_stride: " << e.diag_stride << "\n"
      << "  diag_order: " << e.diag_order << "\n";
    auto const& k = c.coeffs;
    o << "coeffs:\n"
      << "  knots: " << k.knots << "\n"
      << "  vmax: " << num(k.vmax) << "\n"
      << "  speeds: " << list(k.speeds) << "\n"
      << "  drift_tolerance: " << num(k.drift_tolerance) << "\n"
      << "  divergence_tolerance: " << num(k.divergence_tolerance) << "\n"
      << "  fourier_tolerance: " << num(k.fourier_tolerance) << "\n"
      << "  windows: " << list(k.windows) << "\n"
      << "  stationarity_nodes: " << k.stationarity_nodes << "\n"
      << "  stationarity_tolerance: " << num(k.stationarity_tolerance) << "\n"
      << "  rate_speed: " << num(k.rate_speed) << "\n"
      << "  rate_tolerance: " << num(k.rate_tolerance) << "\n";
    o << "sde:\n"
      << "  dtau: " << num(c.sde.dtau) << "\n"
      << "  paths: " << c.sde.paths << "\n"
      << "  tau_grid: " << list(c.sde.tau_grid) << "\n"
      << "  path_stride: " << c.sde.path_stride << "\n";
    auto const& g = c.diagnostics;
    o << "diagnostics:\n"
      << "  delta: " << num(g.delta) << "\n"
      << "  alpha: " << num(g.alpha) << "\n"
      << "  beta: " << num(g.beta) << "\n"
      << "  C_int: " << num(g.C_int) << "\n"
      << "  C_tm: " << num(g.C_tm) << "\n"
      << "  C_avg: " << num(g.C_avg) << "\n"
      << "  c_T: " << num(g.c_T) << "\n"
      << "  ks_level: " << num(g.ks_level) << "\n"
      << "  se_multiple: " << num(g.se_multiple) << "\n"
      << "  within_fraction: " << num(g.within_fraction) << "\n"
      << "  violation_level: " << num(g.violation_level) << "\n";
    auto const& t = c.twin;
    o << "twin:\n"
      << "  d: " << t.d << "\n"
      << "  runs: " << t.runs << "\n"
      << "  L: " << num(t.L) << "\n"
      << "  horizon: " << num(t.horizon) << "\n"
      << "  N: " << list(t.N) << "\n"
      << "  slope: " << num(t.slope) << "\n"
      << "  slope_tolerance: " << num(t.slope_tolerance) << "\n"
      << "  amplitude_factor: " << num(t.amplitude_factor) << "\n"
      << "  correction_factor: " << num(t.correction_factor) << "\n"
      << "  window_lo: " << num(t.window_lo) << "\n"
      << "  window_hi: " << num(t.window_hi) << "\n";
    auto const& b = c.bounds;
    o << "bounds:\n"
      << "  dim: " << b.dim << "\n"
      << "  N: " << num(b.N) << "\n"
      << "  a0: " << num(b.a0) << "\n"
      << "  b0: " << num(b.b0) << "\n"
      << "  C_avg: " << num(b.C_avg) << "\n"
      << "  problems: " << b.problems << "\n"
      << "  dt: " << num(b.dt) << "\n"
      << "  pb_order: " << b.pb_order << "\n"
      << "  pb_dt: " << num(b.pb_dt) << "\n"
      << "  stability_limit: " << num(b.stability_limit) << "\n"
      << "  cosh_tolerance: " << num(b.cosh_tolerance) << "\n";
    auto const& w = c.sweep;
    o << "sweep:\n"
      << "  N: " << list(w.N) << "\n"
      << "  runs: " << w.runs << "\n"
      << "  sample_stride: " << w.sample_stride << "\n"
      << "  stationarity_runs: " << w.stationarity_runs << "\n"
      << "  residual_taus: " << list(w.residual_taus) << "\n"
      << "  short_gaps: " << list(w.short_gaps) << "\n"
      << "  large_gaps: " << list(w.large_gaps) << "\n"
      << "  short_slope: " << num(w.short_slope) << "\n"
      << "  short_tolerance: " << num(w.short_tolerance) << "\n"
      << "  large_slope: " << num(w.large_slope) << "\n"
      << "  large_tolerance: " << num(w.large_tolerance) << "\n"
      << "  p4_min_slope: " << num(w.p4_min_slope) << "\n";
    auto const& en = c.energy;
    o << "energy:\n"
      << "  d: " << en.d << "\n"
      << "  L: " << num(en.L) << "\n"
      << "  N: " << num(en.N) << "\n"
      << "  horizon: " << num(en.horizon) << "\n"
      << "  runs: " << en.runs << "\n"
      << "  max_drift: " << num(en.max_drift) << "\n"
      << "  ratio_lo: " << num(en.ratio_lo) << "\n"
      << "  ratio_hi: " << num(en.ratio_hi) << "\n";
    auto const& orc = c.oracle;
    o << "oracle:\n"
      << "  d: " << orc.d << "\n"
      << "  L: " << num(orc.L) << "\n"
      << "  N: " << num(orc.N) << "\n"
      << "  horizon: " << num(orc.horizon) << "\n"
      << "  runs: " << orc.runs << "\n";
    return o.str();
}

std::string sha256_hex(std::string const& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("sha256: digest failed");
    static char const* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i)
    {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string config_hash(RunConfig const& c)
{
    return sha256_hex(serialize_config(c));
}

}  // namespace landau
