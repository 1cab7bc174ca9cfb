// SPDX-License-Identifier: Apache-2.0
// Acceptance criteria A1-A14: one PASS/FAIL line per criterion.
//
// Usage: acceptance [A1 A2 ...] [--config file.yaml] [--report file.json]
// Without ids every criterion runs. The default configuration carries the
// pinned scales (d = 4, N in {32, 64, 128}, 400 runs, 1e4 SDE paths).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "landau/cli.hpp"
#include "landau/experiments.hpp"
#include "landau/io.hpp"

using namespace landau;
namespace fs = std::filesystem;

namespace {

struct Criterion
{
    std::string id;
    std::string title;
    std::vector<std::string> prefixes;  //!< check names that decide the verdict
};

std::vector<Criterion> const kCriteria = {
    {"A1", "coefficient identities", {"identity_drift", "identity_divergence", "identity_spd"}},
    {"A2", "energy conservation", {"energy_drift", "energy_halving_ratio"}},
    {"A3", "direct vs Fourier diffusion", {"fourier_vs_direct"}},
    {"A4", "truncated-coefficient rates", {"truncation_rate_D", "truncation_rate_Lambda"}},
    {"A5", "generator stationarity", {"generator_stationarity"}},
    {"A6", "reservoir vs full-torus oracle", {"oracle_ks_c", "oracle_recollision_frequency"}},
    {"A7", "microscopic stationarity", {"stationarity_ks_min_p"}},
    {"A8", "convergence in law", {"particle_vs_sde_ks_c", "ks_distance_nonincreasing_c"}},
    {"A9", "martingale residual trend", {"martingale_residual_trend"}},
    {"A10", "increment exponents", {"increment_p2_large_", "increment_p2_short_", "increment_p4_large_"}},
    {"A11", "interaction durations and recollisions", {"interaction_within_bound_", "recollision_nonincreasing"}},
    {"A12", "twin-trajectory influence law", {"twin_slope", "twin_amplitude_inverse_N", "twin_second_order_ratio"}},
    {"A13", "Gronwall suite", {"cosh_benchmark", "gronwall_simple", "gronwall_averaged", "peano_baker_vs_rk4"}},
    {"A14", "determinism across runs and threads", {"determinism_"}},
};

bool starts_with(std::string const& s, std::string const& p)
{
    return s.rfind(p, 0) == 0;
}

std::string slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

//! Every subcommand at threads 1 (twice) and 4 on the smoke configuration
std::vector<CheckResult> determinism(RunConfig const& smoke)
{
    fs::path const root = fs::temp_directory_path() / "landau_acceptance_a14";
    fs::remove_all(root);
    std::vector<CheckResult> out;
    for (std::string const& cmd : subcommands())
    {
        std::vector<DispatchResult> runs;
        int k = 0;
        for (int threads : {1, 1, 4})
        {
            DispatchOptions o;
            o.command = cmd;
            o.config = smoke;
            o.threads = threads;
            o.out = root / ("run" + std::to_string(k++));
            runs.push_back(dispatch(o));
        }
        std::size_t csv = 0, differ = 0;
        for (fs::path const& f : runs[0].files)
        {
            if (f.extension() != ".csv")
                continue;
            ++csv;
            fs::path const rel = fs::relative(f, runs[0].dir);
            std::string const ref = slurp(f);
            for (std::size_t r = 1; r < runs.size(); ++r)
                differ += slurp(runs[r].dir / rel) != ref;
        }
        CheckResult c;
        c.name = "determinism_" + cmd;
        c.statistic = static_cast<double>(differ);
        c.uncertainty = static_cast<double>(csv);
        c.threshold = "0 differing CSV files";
        c.pass = differ == 0 && csv > 0;
        out.push_back(c);
    }
    fs::remove_all(root);
    return out;
}

std::string summarize(std::vector<CheckResult> const& checks)
{
    std::string s;
    for (CheckResult const& c : checks)
    {
        if (!s.empty())
            s += "; ";
        s += c.name + "=" + format_number(c.statistic) + (c.pass ? "" : " [fail: " + c.threshold + "]");
    }
    return s;
}

}  // namespace

int main(int argc, char** argv)
{
    std::set<std::string> wanted;
    std::string config_path, report_path = "acceptance_report.json";
    for (int i = 1; i < argc; ++i)
    {
        std::string const a = argv[i];
        if (a == "--config" && i + 1 < argc)
            config_path = argv[++i];
        else if (a == "--report" && i + 1 < argc)
            report_path = argv[++i];
        else
            wanted.insert(a);
    }
    auto want = [&](std::initializer_list<char const*> ids) {
        if (wanted.empty())
            return true;
        for (char const* id : ids)
            if (wanted.count(id))
                return true;
        return false;
    };

    RunConfig const c = config_path.empty() ? RunConfig{} : load_config(config_path);
    c.validate();
    std::uint64_t const seed = c.seed;

    std::map<std::string, std::vector<CheckResult>> by_id;
    std::map<std::string, double> seconds;
    std::vector<CheckResult> all;

    auto stage = [&](std::initializer_list<char const*> ids, std::function<std::vector<CheckResult>()> run) {
        if (!want(ids))
            return;
        auto const t0 = std::chrono::steady_clock::now();
        std::vector<CheckResult> checks;
        std::string error;
        try
        {
            checks = run();
        }
        catch (std::exception const& e)
        {
            error = e.what();
        }
        double const dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        all.insert(all.end(), checks.begin(), checks.end());
        for (char const* id : ids)
        {
            seconds[id] = dt;
            auto const& crit = *std::find_if(kCriteria.begin(), kCriteria.end(),
                                             [&](Criterion const& k) { return k.id == id; });
            auto& mine = by_id[id];
            for (CheckResult const& ch : checks)
                for (std::string const& p : crit.prefixes)
                    if (starts_with(ch.name, p))
                    {
                        mine.push_back(ch);
                        break;
                    }
            if (!error.empty())
                mine.push_back({"error: " + error, 0, 0, "no exception", false});
        }
    };

    stage({"A1", "A3", "A4", "A5"}, [&] { return coeffs_study(c).checks; });
    stage({"A2"}, [&] { return energy_study(c, seed).checks; });
    stage({"A6"}, [&] { return oracle_study(c, seed).checks; });
    stage({"A7", "A8", "A9", "A10", "A11"}, [&] { return sweep_study(c, seed, c.sweep.N).checks; });
    stage({"A12"}, [&] { return twin_study(c, seed).checks; });
    stage({"A13"}, [&] { return bounds_study(c, seed).checks; });
    stage({"A14"}, [&] { return determinism(load_config(LANDAU_SMOKE_CONFIG)); });

    int failed = 0, ran = 0;
    for (Criterion const& k : kCriteria)
    {
        auto const it = by_id.find(k.id);
        if (it == by_id.end())
            continue;
        ++ran;
        bool const pass = !it->second.empty()
                          && std::all_of(it->second.begin(), it->second.end(),
                                         [](CheckResult const& ch) { return ch.pass; });
        failed += !pass;
        std::printf("%-4s %s  %s | %s | %.1f s\n", k.id.c_str(), pass ? "PASS" : "FAIL", k.title.c_str(),
                    it->second.empty() ? "no checks produced" : summarize(it->second).c_str(), seconds[k.id]);
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", ran - failed, ran);

    DiagnosticsReport rep;
    rep.config_hash = config_hash(c);
    rep.seed = seed;
    rep.version = version_string();
    rep.checks = all;
    write_atomic(report_path, rep.to_json() + "\n");
    return failed == 0 ? 0 : 1;
}
