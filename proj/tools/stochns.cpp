// Command-line driver: run | ensemble | analyze | verify.
//
// Precedence: command-line flags, then STOCH_EULER_WORKERS (worker count only),
// then the config file, then built-in defaults.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stochns/config.hpp"
#include "stochns/ensemble.hpp"
#include "stochns/io.hpp"
#include "stochns/verify.hpp"

using namespace stochns;
using nlohmann::json;

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> nu;
    std::optional<double> sigma;
    std::optional<int> n;
    std::optional<double> tend;
    std::optional<int> realizations;
    std::optional<int> workers;
    bool common_noise = false;
    bool skip_failed = false;
    std::optional<std::string> sf_normalization;
    std::optional<bool> project_every_step;
    std::optional<std::string> out;
    std::optional<std::string> ic;
    std::optional<double> dt;
};

json load_json(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigErrors({"cannot read config file " + path});
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigErrors({path + ": " + e.what()});
    }
}

RunConfig resolve(const Overrides& o) {
    json j = load_json(o.config);
    if (!j.is_object()) throw ConfigErrors({"top level: expected an object"});
    auto set = [&](const char* section, const char* key, json value) { j[section][key] = std::move(value); };
    if (o.seed) set("ensemble", "seed", *o.seed);
    if (!o.nu.empty()) {
        json list = json::array();
        for (const auto& s : o.nu) {
            try {
                list.push_back(parse_double(s));
            } catch (const IoError&) {
                list.push_back(s);
            }
        }
        set("ensemble", "viscosities", list);
    }
    if (o.sigma) set("forcing", "sigma", *o.sigma);
    if (o.n) set("grid", "n", *o.n);
    if (o.tend) set("integrator", "t_end", *o.tend);
    if (o.dt) set("integrator", "dt", *o.dt);
    if (o.realizations) set("ensemble", "realizations", *o.realizations);
    if (o.workers) {
        set("ensemble", "workers", *o.workers);
    } else if (const char* env = std::getenv("STOCH_EULER_WORKERS")) {
        try {
            set("ensemble", "workers", static_cast<int>(parse_double(env)));
        } catch (const IoError&) {
            throw ConfigErrors({std::string("STOCH_EULER_WORKERS: not a number: '") + env + "'"});
        }
    }
    if (o.common_noise) set("ensemble", "common_noise", true);
    if (o.skip_failed) set("ensemble", "skip_failed", true);
    if (o.sf_normalization) set("output", "sf_normalization", *o.sf_normalization);
    if (o.project_every_step) set("integrator", "project_every_step", *o.project_every_step);
    if (o.out) set("output", "dir", *o.out);
    if (o.ic) set("initial_condition", "kind", *o.ic);
    return config_from_json(j);
}

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config, "JSON config file");
    app->add_option("--seed", o.seed, "master seed");
    app->add_option("--nu", o.nu, "viscosity, number or c/N (repeatable)")->delimiter(',');
    app->add_option("--sigma", o.sigma, "noise amplitude per basis element");
    app->add_option("--n", o.n, "grid size");
    app->add_option("--tend", o.tend, "final time");
    app->add_option("--dt", o.dt, "fixed time step (default: CFL-controlled)");
    app->add_option("--ic", o.ic, "flat_vortex_sheet | fractional_brownian_bridge | taylor_green");
    app->add_option("--sf-normalization", o.sf_normalization, "average | integral");
    app->add_option("--project-every-step", o.project_every_step, "re-apply the Leray projection each step (true|false)");
    app->add_option("--out", o.out, "output directory");
}

int cmd_run(const Overrides& o, std::size_t realization) {
    RunConfig cfg = resolve(o);
    EnsembleSpec spec = cfg.ensemble;
    spec.viscosities.resize(1);
    spec.realizations = static_cast<int>(realization) + 1;
    const RealizationResult res = run_realization(spec, 0, realization);
    write_realization(cfg.out_dir, spec, res);
    {
        RunConfig echo{spec, cfg.out_dir};
        std::ofstream(cfg.out_dir / "run_config.json") << config_to_json(echo).dump(2) << '\n';
    }
    if (res.failed) {
        std::cerr << "error: " << res.error << '\n';
        return 1;
    }
    const auto& last = res.records.back();
    std::printf("nu = %s  t = %s  energy = %s  cum_dissipation = %s  steps = %zu\n", format_double(spec.viscosities[0]).c_str(),
                format_double(last.t).c_str(), format_double(last.energy).c_str(),
                format_double(last.cumulative_dissipation).c_str(), res.step_times.size() - 1);
    std::printf("wrote %s\n", cell_dir(cfg.out_dir, 0).string().c_str());
    return 0;
}

int cmd_ensemble(const Overrides& o, bool dry_run) {
    const RunConfig cfg = resolve(o);
    if (dry_run) {
        std::cout << describe_run_matrix(cfg.ensemble);
        return 0;
    }
    const EnsembleStats stats = run_ensemble(cfg.ensemble, cfg.out_dir);
    const ForcingBasis basis(Grid(cfg.ensemble.grid_n), cfg.ensemble.n_b, cfg.ensemble.sigma);
    for (const auto& c : stats.cells) {
        const auto bal = energy_balance_residual(c, basis, cfg.ensemble.integrator.t_end);
        std::printf("nu = %-12s R = %zu  failed = %zu  balance residual at t_end = %.3e (stderr %.3e)\n",
                    format_double(c.nu).c_str(), c.realizations, c.failed.size(), bal.residual, bal.sem);
    }
    std::printf("wrote %s\n", cfg.out_dir.string().c_str());
    return 0;
}

int cmd_analyze(const std::string& dir) {
    const EnsembleStats stats = analyze(dir);
    for (const auto& c : stats.cells)
        std::printf("nu = %-12s R = %zu  mean energy at t_end = %s\n", format_double(c.nu).c_str(), c.realizations,
                    format_double(c.get("energy").mean.back()).c_str());
    std::printf("statistics written to %s\n", dir.c_str());
    return 0;
}

int cmd_verify() {
    bool ok = true;
    for (const auto& c : run_verify_battery()) {
        std::printf("%s %-24s measured %.3e tol %.1e  %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                    c.tolerance, c.detail.c_str());
        ok = ok && c.pass;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic 2D Navier-Stokes ensembles on the periodic unit square"};
    app.require_subcommand(1);

    Overrides run_o, ens_o;
    std::size_t realization = 0;
    auto* run = app.add_subcommand("run", "single realization");
    add_common(run, run_o);
    run->add_option("--realization", realization, "realization index (selects the random streams)");

    bool dry_run = false;
    auto* ens = app.add_subcommand("ensemble", "all realizations of all viscosities");
    add_common(ens, ens_o);
    ens->add_option("--realizations", ens_o.realizations, "realizations per viscosity");
    ens->add_option("--workers", ens_o.workers, "worker threads (fallback: STOCH_EULER_WORKERS)");
    ens->add_flag("--common-noise", ens_o.common_noise, "share Brownian paths across viscosities");
    ens->add_flag("--skip-failed", ens_o.skip_failed, "continue past unstable realizations");
    ens->add_flag("--dry-run", dry_run, "print the run matrix and seeds only");

    std::string analyze_dir;
    auto* an = app.add_subcommand("analyze", "recompute statistics from raw ensemble outputs");
    an->add_option("dir", analyze_dir, "ensemble output directory")->required();

    auto* ver = app.add_subcommand("verify", "analytic test battery");

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) return cmd_run(run_o, realization);
        if (ens->parsed()) return cmd_ensemble(ens_o, dry_run);
        if (an->parsed()) return cmd_analyze(analyze_dir);
        if (ver->parsed()) return cmd_verify();
    } catch (const ConfigErrors& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
