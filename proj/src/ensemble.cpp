#include "stochns/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "stochns/config.hpp"
#include "stochns/io.hpp"
#include "stochns/spectral_ops.hpp"

namespace stochns {

namespace {

const std::vector<std::string> series_names = {"energy",          "grad_sq",
                                               "enstrophy",       "cum_dissipation",
                                               "noise_input_theoretical", "energy_input"};

std::string realization_stem(std::size_t r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "realization_%04zu", r);
    return buf;
}

std::vector<double> linspace(double a, double b, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = count == 1 ? a : a + (b - a) * i / (count - 1);
    out.back() = b;
    return out;
}

}  // namespace

IcKind parse_ic_kind(const std::string& name) {
    if (name == "flat_vortex_sheet") return IcKind::flat_vortex_sheet;
    if (name == "fractional_brownian_bridge") return IcKind::fractional_brownian_bridge;
    if (name == "taylor_green") return IcKind::taylor_green;
    throw ConfigError("unknown initial condition '" + name +
                      "' (expected flat_vortex_sheet, fractional_brownian_bridge, taylor_green)");
}

std::string to_string(IcKind k) {
    switch (k) {
        case IcKind::flat_vortex_sheet: return "flat_vortex_sheet";
        case IcKind::fractional_brownian_bridge: return "fractional_brownian_bridge";
        case IcKind::taylor_green: return "taylor_green";
    }
    return "?";
}

SpectralField make_initial_condition(const Grid& grid, const InitialConditionSpec& spec, RandomStream& rng) {
    switch (spec.kind) {
        case IcKind::flat_vortex_sheet: return flat_vortex_sheet(grid, spec.sheet, rng);
        case IcKind::fractional_brownian_bridge: return fractional_brownian_bridge(grid, spec.fbb, rng);
        case IcKind::taylor_green: return taylor_green(grid, spec.amplitude);
    }
    throw ConfigError("unknown initial condition kind");
}

void EnsembleSpec::validate() const {
    if (realizations < 1) throw ConfigError("ensemble.realizations must be >= 1");
    if (viscosities.empty()) throw ConfigError("ensemble.viscosities must not be empty");
    for (double nu : viscosities)
        if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("ensemble.viscosities must be finite and >= 0");
    if (!(integrator.t_end > 0.0)) throw ConfigError("integrator.t_end must be > 0 for an ensemble");
    if (sf_every < 1) throw ConfigError("output.sf_every must be >= 1");
    if (n_rect < 1) throw ConfigError("output.n_rect must be >= 1");
    if (aggregation_points < 2) throw ConfigError("ensemble.aggregation_points must be >= 2");
    if (workers < 1) throw ConfigError("ensemble.workers must be >= 1");
    if (sf_radii.empty()) throw ConfigError("output.sf_radii must not be empty");
    for (std::size_t i = 0; i < sf_radii.size(); ++i) {
        if (sf_radii[i] * grid_n < 1.0 - 1e-12 || sf_radii[i] > std::sqrt(0.5))
            throw ConfigError("output.sf_radii entries must lie in [1/n, sqrt(2)/2]");
        if (i && !(sf_radii[i] > sf_radii[i - 1])) throw ConfigError("output.sf_radii must be increasing");
    }
    integrator.validate();
    Grid g(grid_n);
    ForcingBasis(g, n_b, sigma);
}

std::vector<double> default_sf_radii(int n, int count) {
    std::vector<double> out;
    const double lo = 1.0 / n, hi = 0.5;
    for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / (count - 1)));
    out.back() = hi;
    return out;
}

std::array<std::uint64_t, 3> ic_stream_path(std::size_t realization) {
    return {static_cast<std::uint64_t>(StreamPurpose::initial_condition), 0, realization};
}

std::array<std::uint64_t, 3> noise_stream_path(const EnsembleSpec& spec, std::size_t nu_index,
                                               std::size_t realization) {
    return {static_cast<std::uint64_t>(StreamPurpose::forcing), spec.common_noise ? 0 : nu_index, realization};
}

RealizationResult run_realization(const EnsembleSpec& spec, std::size_t nu_index, std::size_t realization) {
    const Grid g(spec.grid_n);
    const ForcingBasis basis(g, spec.n_b, spec.sigma);
    const auto icp = ic_stream_path(realization);
    const auto np = noise_stream_path(spec, nu_index, realization);
    RandomStream ic_rng(spec.master_seed, {icp[0], icp[1], icp[2]});
    RandomStream noise_rng(spec.master_seed, {np[0], np[1], np[2]});

    IntegratorConfig cfg = spec.integrator;
    cfg.nu = spec.viscosities.at(nu_index);
    cfg.snapshot_every = spec.sf_every;
    cfg.keep_snapshots = false;

    RealizationResult res;
    res.nu_index = nu_index;
    res.realization = realization;
    const SpectralField ic = make_initial_condition(g, spec.ic, ic_rng);
    if (spec.write_snapshots) res.initial_state = ic;

    auto observer = [&](double t, const SpectralField& u) {
        auto sq = structure_function_sq(u, spec.sf_radii, spec.sf_normalization);
        for (auto& x : sq) x = std::sqrt(x);
        res.sf_times.push_back(t);
        res.sf_values.push_back(std::move(sq));
    };
    auto take = [&](const Trajectory& traj) {
        res.records = traj.records;
        res.step_times = traj.step_times;
        res.step_grad_sq = traj.step_grad_sq;
        if (spec.write_snapshots) res.final_state = traj.final_state;
    };
    try {
        take(run(g, ic, cfg, basis, noise_rng, observer));
    } catch (const UnstableRunError& e) {
        res.failed = true;
        res.error = e.what();
        if (e.partial()) take(*e.partial());
    }
    return res;
}

SeriesStats aggregate(const std::vector<std::vector<double>>& series) {
    if (series.empty()) throw std::invalid_argument("aggregate: empty series collection");
    const std::size_t m = series.front().size();
    for (const auto& s : series)
        if (s.size() != m) throw std::invalid_argument("aggregate: series differ in length");
    const double R = static_cast<double>(series.size());
    SeriesStats out;
    out.mean.assign(m, 0.0);
    out.std.assign(m, 0.0);
    out.sem.assign(m, 0.0);
    for (const auto& s : series)
        for (std::size_t i = 0; i < m; ++i) out.mean[i] += s[i];
    for (auto& x : out.mean) x /= R;
    if (series.size() > 1) {
        for (const auto& s : series)
            for (std::size_t i = 0; i < m; ++i) out.std[i] += (s[i] - out.mean[i]) * (s[i] - out.mean[i]);
        for (std::size_t i = 0; i < m; ++i) {
            out.std[i] = std::sqrt(out.std[i] / (R - 1));
            out.sem[i] = out.std[i] / std::sqrt(R);
        }
    }
    return out;
}

std::vector<double> interpolate(std::span<const double> times, std::span<const double> values,
                                std::span<const double> at) {
    if (times.empty() || times.size() != values.size())
        throw std::invalid_argument("interpolate: times and values must be nonempty and equally long");
    std::vector<double> out;
    out.reserve(at.size());
    for (double t : at) {
        if (t <= times.front()) {
            out.push_back(values.front());
        } else if (t >= times.back()) {
            out.push_back(values.back());
        } else {
            const std::size_t j = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin()) - 1;
            const double w = (t - times[j]) / (times[j + 1] - times[j]);
            out.push_back(values[j] + w * (values[j + 1] - values[j]));
        }
    }
    return out;
}

const SeriesStats& CellStats::get(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return series[i];
    throw std::invalid_argument("no series named '" + std::string(name) + "'");
}

EnsembleStats aggregate_ensemble(const EnsembleSpec& spec, const std::vector<RealizationResult>& results) {
    EnsembleStats stats;
    const double T = spec.integrator.t_end;
    const auto grid_t = linspace(0.0, T, spec.aggregation_points);
    const std::size_t nr = spec.sf_radii.size();

    for (std::size_t k = 0; k < spec.viscosities.size(); ++k) {
        std::vector<const RealizationResult*> good;
        CellStats cell;
        cell.nu_index = k;
        cell.nu = spec.viscosities[k];
        for (const auto& r : results) {
            if (r.nu_index != k) continue;
            if (r.failed)
                cell.failed.push_back(r.realization);
            else
                good.push_back(&r);
        }
        std::sort(good.begin(), good.end(),
                  [](const auto* a, const auto* b) { return a->realization < b->realization; });
        std::sort(cell.failed.begin(), cell.failed.end());
        if (good.empty()) throw std::runtime_error("cell nu = " + format_double(cell.nu) + ": no successful realization");
        cell.realizations = good.size();
        cell.times = grid_t;

        std::vector<std::vector<std::vector<double>>> per(series_names.size());
        std::vector<double> sf0(nr, 0.0), sf_end(nr, 0.0), sf_T(nr, 0.0);
        for (const auto* r : good) {
            std::vector<double> t, cols[5];
            for (const auto& rec : r->records) {
                t.push_back(rec.t);
                cols[0].push_back(rec.energy);
                cols[1].push_back(rec.grad_sq);
                cols[2].push_back(rec.enstrophy);
                cols[3].push_back(rec.cumulative_dissipation);
                cols[4].push_back(rec.noise_input_theoretical);
            }
            for (int q = 0; q < 5; ++q) per[q].push_back(interpolate(t, cols[q], grid_t));
            std::vector<double> input(grid_t.size());
            const double e0 = r->records.front().energy;
            for (std::size_t i = 0; i < grid_t.size(); ++i) input[i] = per[0].back()[i] + per[3].back()[i] - e0;
            per[5].push_back(std::move(input));

            for (std::size_t j = 0; j < nr; ++j) {
                std::vector<double> sq;
                for (const auto& row : r->sf_values) sq.push_back(row[j] * row[j]);
                sf0[j] += sq.front();
                sf_end[j] += sq.back();
                const double st = r->sf_times.size() >= 2 ? structure_function_time_integrated(r->sf_times, sq, 2) : 0.0;
                sf_T[j] += st * st;
            }

            const double trap = r->records.back().cumulative_dissipation;
            const double riem = dissipation_integral(r->step_times, r->step_grad_sq, cell.nu, T, spec.n_rect);
            cell.dissipation_trapezoid += trap / good.size();
            cell.dissipation_riemann += riem / good.size();
            if (trap > 0.0) cell.dissipation_max_rel_diff = std::max(cell.dissipation_max_rel_diff, std::abs(riem - trap) / trap);
        }
        cell.names = series_names;
        for (auto& p : per) cell.series.push_back(aggregate(p));

        const double R = static_cast<double>(good.size());
        cell.sf_initial.radii = cell.sf_mean.radii = spec.sf_radii;
        cell.sf_initial.p = cell.sf_mean.p = 2;
        for (std::size_t j = 0; j < nr; ++j) {
            cell.sf_initial.values_snapshot.push_back(std::sqrt(sf0[j] / R));
            cell.sf_mean.values_snapshot.push_back(std::sqrt(sf_end[j] / R));
            cell.sf_mean.values_time_integrated.push_back(std::sqrt(sf_T[j] / R));
        }
        stats.cells.push_back(std::move(cell));
    }
    return stats;
}

BalanceResidual energy_balance_residual(const CellStats& cell, const ForcingBasis& basis, double t) {
    const auto& input = cell.get("energy_input");
    const double at[] = {t};
    BalanceResidual out;
    out.residual = interpolate(cell.times, input.mean, at)[0] - basis.sigma_bar() * t;
    out.sem = interpolate(cell.times, input.sem, at)[0];
    return out;
}

fs::path cell_dir(const fs::path& out_dir, std::size_t nu_index) { return out_dir / ("nu_" + std::to_string(nu_index)); }

void write_realization(const fs::path& out_dir, const EnsembleSpec& spec, const RealizationResult& result) {
    const fs::path dir = cell_dir(out_dir, result.nu_index);
    const std::string stem = realization_stem(result.realization);
    write_diagnostics_csv(dir / (stem + ".csv"), result.records);

    CsvTable steps{{"t", "grad_sq"}, {}};
    for (std::size_t i = 0; i < result.step_times.size(); ++i)
        steps.rows.push_back({result.step_times[i], result.step_grad_sq[i]});
    write_csv(dir / (stem + "_steps.csv"), steps);

    std::vector<SfRow> rows;
    for (std::size_t i = 0; i < result.sf_times.size(); ++i)
        for (std::size_t j = 0; j < spec.sf_radii.size(); ++j)
            rows.push_back({false, result.sf_times[i], spec.sf_radii[j], 2, result.sf_values[i][j]});
    if (result.sf_times.size() >= 2)
        for (std::size_t j = 0; j < spec.sf_radii.size(); ++j) {
            std::vector<double> sq;
            for (const auto& row : result.sf_values) sq.push_back(row[j] * row[j]);
            rows.push_back({true, 0.0, spec.sf_radii[j], 2, structure_function_time_integrated(result.sf_times, sq, 2)});
        }
    write_sf_csv(dir / (stem + "_sf.csv"), rows);

    if (result.initial_state) write_snapshot(dir / (stem + "_initial.snap"), make_snapshot(*result.initial_state, 0.0));
    if (result.final_state && !result.records.empty())
        write_snapshot(dir / (stem + "_final.snap"), make_snapshot(*result.final_state, result.records.back().t));

    const fs::path failed = dir / (stem + ".failed");
    if (result.failed) {
        std::ofstream(failed) << result.error << '\n';
    } else if (fs::exists(failed)) {
        fs::remove(failed);
    }
}

RealizationResult read_realization(const fs::path& out_dir, const EnsembleSpec& spec, std::size_t nu_index,
                                   std::size_t realization) {
    const fs::path dir = cell_dir(out_dir, nu_index);
    const std::string stem = realization_stem(realization);
    RealizationResult res;
    res.nu_index = nu_index;
    res.realization = realization;
    if (fs::exists(dir / (stem + ".failed"))) {
        res.failed = true;
        std::ifstream in(dir / (stem + ".failed"));
        std::getline(in, res.error);
    }
    res.records = read_diagnostics_csv(dir / (stem + ".csv"));
    const CsvTable steps = read_csv(dir / (stem + "_steps.csv"));
    for (const auto& row : steps.rows) {
        res.step_times.push_back(row.at(0));
        res.step_grad_sq.push_back(row.at(1));
    }
    const std::size_t nr = spec.sf_radii.size();
    for (const auto& row : read_sf_csv(dir / (stem + "_sf.csv"))) {
        if (row.total) continue;
        if (res.sf_times.empty() || res.sf_times.back() != row.t) {
            res.sf_times.push_back(row.t);
            res.sf_values.emplace_back();
        }
        res.sf_values.back().push_back(row.value);
    }
    for (const auto& v : res.sf_values)
        if (v.size() != nr) throw IoError(stem + "_sf.csv: radius count differs from the manifest");
    return res;
}

void write_statistics(const fs::path& out_dir, const EnsembleSpec& spec, const EnsembleStats& stats) {
    const Grid g(spec.grid_n);
    const ForcingBasis basis(g, spec.n_b, spec.sigma);
    const double T = spec.integrator.t_end;
    nlohmann::json summary = nlohmann::json::object();
    summary["sigma_bar"] = basis.sigma_bar();
    summary["sf_normalization"] = to_string(spec.sf_normalization);
    summary["cells"] = nlohmann::json::array();

    // fit range for the modulus exponents; the whole table if too few radii fall inside
    double lo = 4.0 / spec.grid_n, hi = 0.1;
    if (std::count_if(spec.sf_radii.begin(), spec.sf_radii.end(),
                      [&](double r) { return r >= lo * (1 - 1e-12) && r <= hi * (1 + 1e-12); }) < 4) {
        lo = spec.sf_radii.front();
        hi = spec.sf_radii.back();
    }

    double alpha_min = 1e300;
    std::vector<std::optional<ModulusFit>> fits;
    for (const auto& cell : stats.cells) {
        std::optional<ModulusFit> fit;
        try {
            fit = fit_modulus(cell.sf_mean, lo, hi, true);
            alpha_min = std::min(alpha_min, fit->exponent);
        } catch (const std::invalid_argument&) {
        }
        fits.push_back(fit);
    }

    for (std::size_t c = 0; c < stats.cells.size(); ++c) {
        const auto& cell = stats.cells[c];
        CsvTable mean{{"t"}, {}};
        for (const auto& n : cell.names) {
            mean.header.push_back(n + "_mean");
            mean.header.push_back(n + "_std");
            mean.header.push_back(n + "_stderr");
        }
        for (std::size_t i = 0; i < cell.times.size(); ++i) {
            std::vector<double> row = {cell.times[i]};
            for (const auto& s : cell.series) {
                row.push_back(s.mean[i]);
                row.push_back(s.std[i]);
                row.push_back(s.sem[i]);
            }
            mean.rows.push_back(std::move(row));
        }
        write_csv(out_dir / ("mean_nu" + std::to_string(cell.nu_index) + ".csv"), mean);

        std::vector<SfRow> rows;
        for (std::size_t j = 0; j < cell.sf_mean.radii.size(); ++j)
            rows.push_back({false, 0.0, cell.sf_initial.radii[j], 2, cell.sf_initial.values_snapshot[j]});
        for (std::size_t j = 0; j < cell.sf_mean.radii.size(); ++j)
            rows.push_back({false, T, cell.sf_mean.radii[j], 2, cell.sf_mean.values_snapshot[j]});
        for (std::size_t j = 0; j < cell.sf_mean.radii.size(); ++j)
            rows.push_back({true, 0.0, cell.sf_mean.radii[j], 2, cell.sf_mean.values_time_integrated[j]});
        write_sf_csv(out_dir / ("sf_mean_nu" + std::to_string(cell.nu_index) + ".csv"), rows);

        const auto bal = energy_balance_residual(cell, basis, T);
        const double t_probe = std::min(0.5, T);
        const double probe_at[] = {t_probe};
        nlohmann::json jc;
        jc["nu_index"] = cell.nu_index;
        jc["nu"] = cell.nu;
        jc["realizations"] = cell.realizations;
        jc["failed"] = cell.failed;
        jc["energy_balance_residual_t_end"] = bal.residual;
        jc["energy_balance_stderr_t_end"] = bal.sem;
        jc["dissipation_riemann_t_end"] = cell.dissipation_riemann;
        jc["dissipation_trapezoid_t_end"] = cell.dissipation_trapezoid;
        jc["dissipation_max_rel_diff"] = cell.dissipation_max_rel_diff;
        jc["vorticity_probe_t"] = t_probe;
        jc["vorticity_probe"] = cell.nu * t_probe * interpolate(cell.times, cell.get("enstrophy").mean, probe_at)[0];
        if (fits[c]) {
            jc["s2t_fit"] = {{"exponent", fits[c]->exponent}, {"prefactor", fits[c]->prefactor},
                             {"r_min", lo}, {"r_max", hi}, {"residual", fits[c]->residual}};
            // max over the discrete radii of E S_2^T(r)^2 / r^(2 alpha), alpha the smallest exponent over cells
            double sup = 0.0;
            for (std::size_t j = 0; j < cell.sf_mean.radii.size(); ++j) {
                const double v = cell.sf_mean.values_time_integrated[j];
                sup = std::max(sup, v * v / std::pow(cell.sf_mean.radii[j], 2 * alpha_min));
            }
            jc["modulus_sup_ratio"] = sup;
        }
        summary["cells"].push_back(jc);
    }
    if (alpha_min < 1e300) summary["modulus_alpha_common"] = alpha_min;
    std::ofstream(out_dir / "summary.json") << summary.dump(2) << '\n';
}

EnsembleStats run_ensemble(const EnsembleSpec& spec, const fs::path& out_dir, std::vector<RealizationResult>* raw) {
    spec.validate();
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        nlohmann::json manifest;
        manifest["format"] = "stochns-ensemble";
        manifest["version"] = 1;
        manifest["config"] = config_to_json(RunConfig{spec, out_dir});
        manifest["streams"] = nlohmann::json::array();
        for (std::size_t k = 0; k < spec.viscosities.size(); ++k)
            for (std::size_t r = 0; r < static_cast<std::size_t>(spec.realizations); ++r)
                manifest["streams"].push_back({{"nu_index", k},
                                               {"realization", r},
                                               {"initial_condition", ic_stream_path(r)},
                                               {"noise", noise_stream_path(spec, k, r)}});
        manifest["rng"] = "mt19937_64 seeded by seed_seq(master_seed halves, path words)";
        std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << '\n';
    }

    const std::size_t R = spec.realizations;
    const std::size_t tasks = spec.viscosities.size() * R;
    std::vector<RealizationResult> results(tasks);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::mutex err_mutex;
    std::exception_ptr error;
    std::string unstable;

    auto worker = [&] {
        while (!abort) {
            const std::size_t i = next++;
            if (i >= tasks) break;
            try {
                results[i] = run_realization(spec, i / R, i % R);
                if (!out_dir.empty()) write_realization(out_dir, spec, results[i]);
                if (results[i].failed && !spec.skip_failed) {
                    std::lock_guard lock(err_mutex);
                    if (unstable.empty())
                        unstable = "realization " + std::to_string(i % R) + " of viscosity cell " +
                                   std::to_string(i / R) + ": " + results[i].error +
                                   " (use --skip-failed to continue without it)";
                    abort = true;
                }
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (!error) error = std::current_exception();
                abort = true;
            }
        }
    };
    const std::size_t nthreads = std::min<std::size_t>(spec.workers, tasks);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < nthreads; ++w) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    if (!unstable.empty()) throw std::runtime_error("ensemble aborted: " + unstable);

    EnsembleStats stats = aggregate_ensemble(spec, results);
    if (!out_dir.empty()) write_statistics(out_dir, spec, stats);
    if (raw) *raw = std::move(results);
    return stats;
}

std::string describe_run_matrix(const EnsembleSpec& spec) {
    std::ostringstream out;
    out << "grid n = " << spec.grid_n << ", N_b = " << spec.n_b << ", sigma = " << format_double(spec.sigma)
        << ", t_end = " << format_double(spec.integrator.t_end) << ", ic = " << to_string(spec.ic.kind)
        << ", realizations = " << spec.realizations << ", master_seed = " << spec.master_seed
        << (spec.common_noise ? ", common noise" : "") << '\n';
    for (std::size_t k = 0; k < spec.viscosities.size(); ++k) {
        out << "cell " << k << ": nu = " << format_double(spec.viscosities[k]) << '\n';
        for (std::size_t r = 0; r < static_cast<std::size_t>(spec.realizations); ++r) {
            const auto a = ic_stream_path(r);
            const auto b = noise_stream_path(spec, k, r);
            out << "  realization " << r << "  ic stream [" << spec.master_seed << ',' << a[0] << ',' << a[1] << ','
                << a[2] << "]  noise stream [" << spec.master_seed << ',' << b[0] << ',' << b[1] << ',' << b[2]
                << "]\n";
        }
    }
    return out.str();
}

EnsembleStats analyze(const fs::path& out_dir) {
    std::ifstream in(out_dir / "manifest.json");
    if (!in) throw IoError("no manifest.json in " + out_dir.string());
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("manifest.json: " + std::string(e.what()));
    }
    const EnsembleSpec spec = config_from_json(manifest.at("config")).ensemble;
    std::vector<RealizationResult> results;
    for (std::size_t k = 0; k < spec.viscosities.size(); ++k)
        for (std::size_t r = 0; r < static_cast<std::size_t>(spec.realizations); ++r)
            results.push_back(read_realization(out_dir, spec, k, r));
    EnsembleStats stats = aggregate_ensemble(spec, results);
    write_statistics(out_dir, spec, stats);
    return stats;
}

}  // namespace stochns
