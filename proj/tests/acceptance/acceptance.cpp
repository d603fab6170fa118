// Acceptance battery. One PASS/FAIL line per criterion; exit status 1 if any fails.
// Pass --quick to skip the two n = 128 ensembles.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "stochns/diagnostics.hpp"
#include "stochns/ensemble.hpp"
#include "stochns/forcing.hpp"
#include "stochns/initial_conditions.hpp"
#include "stochns/integrator.hpp"
#include "stochns/spectral_ops.hpp"
#include "stochns/structure_functions.hpp"

using namespace stochns;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::uint64_t seed = 1;

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

SpectralField random_band_limited(const Grid& g, int kmax, RandomStream& rng) {
    SpectralField f(g);
    for (int a = 0; a < g.n(); ++a)
        for (int b = 0; b < g.half(); ++b) {
            const int k1 = g.k1(a), k2 = g.k2(b);
            if (std::abs(k1) > kmax || k2 > kmax || (k1 == 0 && k2 == 0)) continue;
            const double amp = 1.0 / std::hypot(double(k1), double(k2));
            for (auto& c : f.comp) c[g.sidx(a, b)] = amp * cplx(rng.normal(), rng.normal());
        }
    for (auto& c : f.comp) enforce_hermitian(c, g);
    return leray_project(std::move(f));
}

/// Worst |mean input - sigma_bar t| / max(2 stderr, 1% sigma_bar T) over the aggregation grid.
struct BalanceCheck {
    double worst_ratio = 0.0;
    double worst_t = 0.0;
    int violations = 0;
};

BalanceCheck balance_check(const CellStats& cell, double sigma_bar, double T) {
    BalanceCheck out;
    const auto& in = cell.get("energy_input");
    for (std::size_t i = 0; i < cell.times.size(); ++i) {
        const double dev = std::abs(in.mean[i] - sigma_bar * cell.times[i]);
        const double tol = std::max(2 * in.sem[i], 0.01 * sigma_bar * T);
        if (dev > tol) ++out.violations;
        if (dev / tol > out.worst_ratio) {
            out.worst_ratio = dev / tol;
            out.worst_t = cell.times[i];
        }
    }
    return out;
}

EnsembleSpec acceptance_spec(int n, double t_end) {
    EnsembleSpec s;
    s.grid_n = n;
    s.n_b = 9;
    s.sigma = 0.01;
    s.realizations = 32;
    s.master_seed = seed;
    s.integrator.t_end = t_end;
    s.sf_radii = default_sf_radii(n, 12);
    s.sf_every = 20;
    s.n_rect = 10000;
    s.aggregation_points = 512;
    return s;
}

void energy_balance_fbb() {
    EnsembleSpec s = acceptance_spec(128, 1.0);
    s.viscosities = {0.1 / 128};
    s.ic.kind = IcKind::fractional_brownian_bridge;
    s.ic.fbb.hurst = 0.75;
    const auto stats = run_ensemble(s);
    const double sbar = ForcingBasis(Grid(128), 9, 0.01).sigma_bar();
    const auto b = balance_check(stats.cells[0], sbar, 1.0);
    const auto& in = stats.cells[0].get("energy_input");
    report(1, "energy balance, fBB H=0.75, n=128, R=32, nu=0.1/n", b.violations == 0,
           fmt("sigma_bar=%.6g, input(T)=%.6g +- %.2g (stderr), worst |dev|/tol=%.3f at t=%.4f, %d/%zu grid points outside",
               sbar, in.mean.back(), in.sem.back(), b.worst_ratio, b.worst_t, b.violations, stats.cells[0].times.size()));
}

void energy_balance_sheet(EnsembleStats& out) {
    EnsembleSpec s = acceptance_spec(128, 1.0);
    s.viscosities = {0.05 / 128, 0.1 / 128, 0.2 / 128};
    s.ic.kind = IcKind::flat_vortex_sheet;
    out = run_ensemble(s);
    const double sbar = ForcingBasis(Grid(128), 9, 0.01).sigma_bar();
    bool ok = true;
    std::string detail;
    for (const auto& c : out.cells) {
        const auto b = balance_check(c, sbar, 1.0);
        const double rel = std::abs(c.dissipation_riemann - c.dissipation_trapezoid) / c.dissipation_trapezoid;
        ok = ok && b.violations == 0 && c.dissipation_max_rel_diff < 5e-3;
        detail += fmt("[nu=%.3g/n: input(T)=%.5g+-%.2g, worst dev/tol=%.3f, outside=%d, riemann vs trapezoid mean %.2e max %.2e] ",
                      c.nu * 128, c.get("energy_input").mean.back(), c.get("energy_input").sem.back(), b.worst_ratio,
                      b.violations, rel, c.dissipation_max_rel_diff);
    }
    report(2, "energy balance, flat vortex sheet, n=128, R=32, three viscosities; Riemann(10000) vs trapezoid < 0.5%", ok,
           detail);
}

void taylor_green() {
    Grid g(64);
    IntegratorConfig cfg;
    cfg.nu = 1e-2;
    cfg.t_end = 0.1;
    cfg.dt = 1e-3;
    ForcingBasis basis(g, 1, 0.0);
    RandomStream rng(seed, {});
    const SpectralField ic = taylor_green(g, 1.0);
    const double e0 = l2_norm_sq(ic);
    const Trajectory traj = run(g, ic, cfg, basis, rng);
    const double exact = e0 * std::exp(-16 * pi * pi * cfg.nu * cfg.t_end);
    const double err_e = std::abs(traj.records.back().energy - exact) / exact;
    const double diss = dissipation_integral(traj.step_times, traj.step_grad_sq, cfg.nu, cfg.t_end, 10000);
    const double err_d = std::abs(diss - (e0 - exact)) / (e0 - exact);
    const double err_t = std::abs(traj.records.back().cumulative_dissipation - (e0 - exact)) / (e0 - exact);
    report(3, "Taylor-Green decay, n=64, nu=1e-2, T=0.1", err_e <= 1e-6 && err_d <= 1e-3 && err_t <= 1e-3,
           fmt("energy rel err %.2e (tol 1e-6), dissipation rel err Riemann %.2e / trapezoid %.2e (tol 1e-3)", err_e,
               err_d, err_t));
}

void basis_identities() {
    Grid g(64);
    const double sigma = 0.01;
    ForcingBasis basis(g, 9, sigma);
    double norm_err = 0, div_err = 0, curl_err = 0, measured_rho = 0;
    for (int i = 1; i <= 9; ++i)
        for (int j = 1; j <= 9; ++j) {
            SpectralField e(g);
            basis.add_element(e, i, j, 1.0);
            norm_err = std::max(norm_err, std::abs(std::sqrt(l2_norm_sq(e)) - 1));
            div_err = std::max(div_err, std::sqrt(l2_norm_sq(divergence(e))));
            const double curl = l2_norm_sq(curl2d(e));
            curl_err = std::max(curl_err, std::abs(curl - 4 * pi * pi * (i * i + j * j)));
            measured_rho += sigma * sigma * curl;
        }
    double closed = 0;
    for (int i = 1; i <= 9; ++i)
        for (int j = 1; j <= 9; ++j) closed += sigma * sigma * 4 * pi * pi * (i * i + j * j);
    const double rho_err = std::max(std::abs(basis.rho_bar() - closed), std::abs(measured_rho - closed)) / closed;
    report(4, "basis identities, i,j <= 9", norm_err <= 1e-12 && div_err <= 1e-12 && curl_err <= 1e-10 && rho_err <= 1e-10,
           fmt("max | ||e||-1 | %.1e, max ||div e|| %.1e, max | ||curl e||^2 - 4pi^2(i^2+j^2) | %.1e, rho_bar rel err %.1e",
               norm_err, div_err, curl_err, rho_err));
}

void disk_identity() {
    Grid g(256);
    RandomStream rng(seed, {3, 5, 0});
    double lo = 1e300, hi = 0;
    for (int f = 0; f < 20; ++f) {
        const SpectralField v = random_band_limited(g, 8 + f, rng);
        for (double r : {0.05, 0.1, 0.2}) {
            const auto c = disk_average_identity_check(v, r);
            lo = std::min(lo, c.lhs / c.rhs);
            hi = std::max(hi, c.lhs / c.rhs);
        }
    }
    report(5, "disk-average identity, n=256, 20 fields x r in {0.05,0.1,0.2}", lo >= 0.98 && hi <= 1.02,
           fmt("lhs/rhs in [%.5f, %.5f], required [0.98, 1.02]", lo, hi));
}

void poincare() {
    Grid g(128);
    RandomStream rng(seed, {3, 6, 0});
    int violations = 0;
    double min_margin = 1e300;
    for (int f = 0; f < 100; ++f) {
        const SpectralField v = random_band_limited(g, 4 + f % 40, rng);
        for (double r : {0.05, 0.1, 0.2}) {
            const auto c = poincare_check(v, r, 1.0);
            violations += !c.holds;
            min_margin = std::min(min_margin, (c.sf_term + c.grad_term) / c.lhs);
        }
    }
    report(6, "Poincare inequality, C=1, 100 fields x 3 radii", violations == 0,
           fmt("violations %d, min rhs/lhs %.3f", violations, min_margin));
}

void sf_exponent() {
    const int n = 256;
    Grid g(n);
    std::vector<double> radii;
    for (int i = 0; i < 12; ++i) radii.push_back(4.0 / n * std::pow(0.1 / (4.0 / n), i / 11.0));
    bool ok = true;
    std::string detail;
    for (double H : {0.15, 0.5, 0.75}) {
        std::vector<double> mean(radii.size(), 0.0);
        for (int s = 0; s < 64; ++s) {
            RandomStream rng(seed, {1, 0, static_cast<std::uint64_t>(s)});
            const auto sq = structure_function_sq(fractional_brownian_bridge(g, {H}, rng), radii);
            for (std::size_t i = 0; i < radii.size(); ++i) mean[i] += std::sqrt(sq[i]) / 64;
        }
        const auto fit = fit_modulus(radii, mean, 4.0 / n, 0.1);
        ok = ok && std::abs(fit.exponent - H) <= 0.15;
        detail += fmt("H=%.2f slope %.3f (|diff| %.3f); ", H, fit.exponent, std::abs(fit.exponent - H));
    }
    report(7, "structure-function exponent of fBB, n=256, 64 samples, r in [4/n, 0.1], tol 0.15", ok, detail);
}

PhysicalField synthetic(const Grid& g, double alpha, RandomStream& rng) {
    SpectralField f(g);
    const int n = g.n();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < g.half(); ++b) {
            const int k1 = g.k1(a), k2 = g.k2(b);
            if ((k1 == 0 && k2 == 0) || std::max(std::abs(k1), k2) >= n / 2) continue;
            const double amp = std::pow(std::hypot(double(k1), double(k2)), -(alpha + 1));
            for (auto& c : f.comp) {
                const double phase = 2 * pi * rng.uniform();
                c[g.sidx(a, b)] = amp * cplx(std::cos(phase), std::sin(phase));
            }
        }
    for (auto& c : f.comp) enforce_hermitian(c, g);
    return to_physical(f);
}

void sobolev_chain() {
    bool stable_ok = true, diverge_ok = true;
    std::string detail;
    for (double alpha : {0.3, 0.5, 0.7}) {
        for (double ds : {-0.1, 0.1}) {
            const double s = alpha + ds;
            std::vector<double> sums;
            for (int n : {64, 128, 256}) {
                RandomStream rng(seed, {3, 7, static_cast<std::uint64_t>(n)});
                sums.push_back(sobolev_seminorm(synthetic(Grid(n), alpha, rng), s, 2).annulus_sum);
            }
            const double g1 = sums[1] / sums[0] - 1, g2 = sums[2] / sums[1] - 1, total = sums[2] / sums[0] - 1;
            if (ds < 0)
                stable_ok = stable_ok && total < 0.10;
            else
                diverge_ok = diverge_ok && total > 0.50;
            detail += fmt("alpha=%.1f s=%.1f: growth 64->128 %.1f%%, 128->256 %.1f%%, 64->256 %.1f%% (%s); ", alpha, s,
                          100 * g1, 100 * g2, 100 * total, ds < 0 ? "need < 10%" : "need > 50%");
        }
    }
    detail += fmt("stable side %s, divergent side %s", stable_ok ? "ok" : "NOT met", diverge_ok ? "ok" : "NOT met");
    report(8, "Sobolev chain: annulus sum stable at s=alpha-0.1, divergent at s=alpha+0.1 (64->128->256)",
           stable_ok && diverge_ok, detail);
}

void noise_statistics() {
    Grid g(64);
    ForcingBasis basis(g, 9, 0.01);
    RandomStream rng(seed, {3, 8, 0});
    const double dt = 1e-3;
    const int draws = 100000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < draws; ++i) {
        const double x = l2_norm_sq(sample_increment(basis, dt, rng).field) / dt;
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / (draws - 1));
    const double z = std::abs(mean - basis.sigma_bar()) / se;
    report(9, "noise statistics, 1e5 draws", z <= 3,
           fmt("E||sigma dW||^2/dt = %.6g, sigma_bar = %.6g, |diff| = %.2f standard errors (tol 3)", mean,
               basis.sigma_bar(), z));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void determinism() {
    EnsembleSpec s;
    s.grid_n = 32;
    s.n_b = 4;
    s.sigma = 0.05;
    s.realizations = 8;
    s.viscosities = {0.05 / 32, 0.1 / 32, 0.2 / 32};
    s.master_seed = seed;
    s.ic.kind = IcKind::flat_vortex_sheet;
    s.integrator.t_end = 0.2;
    s.sf_radii = default_sf_radii(32, 8);
    const fs::path base = fs::temp_directory_path() / "stochns_acceptance_determinism";
    fs::remove_all(base);
    auto s8 = s;
    s8.workers = 8;
    run_ensemble(s, base / "w1");
    run_ensemble(s8, base / "w8");
    int files = 0, differ = 0;
    for (const auto& entry : fs::recursive_directory_iterator(base / "w1")) {
        if (entry.path().extension() != ".csv") continue;
        const fs::path other = base / "w8" / fs::relative(entry.path(), base / "w1");
        ++files;
        differ += slurp(entry.path()) != slurp(other);
    }
    report(10, "determinism, 1 vs 8 workers", files > 0 && differ == 0,
           fmt("%d CSV files compared byte for byte, %d differ", files, differ));
}

void vorticity_probe(const EnsembleStats& sheet) {
    std::vector<double> probe;
    std::string detail;
    const double at[] = {0.5};
    for (const auto& c : sheet.cells) {
        probe.push_back(c.nu * 0.5 * interpolate(c.times, c.get("enstrophy").mean, at)[0]);
        detail += fmt("nu=%.3g/n: %.4g; ", c.nu * 128, probe.back());
    }
    const double ratio = *std::max_element(probe.begin(), probe.end()) / *std::min_element(probe.begin(), probe.end());
    report(11, "vorticity-bound probe nu t E||eta||^2 at t=0.5, flat vortex sheet", ratio < 10,
           detail + fmt("max/min %.3f (tol < 10)", ratio));
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const auto start = std::chrono::steady_clock::now();
    EnsembleStats sheet;
    if (!quick) {
        energy_balance_fbb();
        energy_balance_sheet(sheet);
    }
    taylor_green();
    basis_identities();
    disk_identity();
    poincare();
    sf_exponent();
    sobolev_chain();
    noise_statistics();
    determinism();
    if (!quick) vorticity_probe(sheet);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d criteria failed, %.0f s\n", failures, secs);
    return failures ? 1 : 0;
}
