#include "stochns/verify.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "stochns/forcing.hpp"
#include "stochns/initial_conditions.hpp"
#include "stochns/integrator.hpp"
#include "stochns/spectral_ops.hpp"
#include "stochns/structure_functions.hpp"

namespace stochns {

namespace {

constexpr double pi = std::numbers::pi;

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

VerifyCheck taylor_green_check() {
    Grid g(64);
    IntegratorConfig cfg;
    cfg.nu = 1e-2;
    cfg.t_end = 0.1;
    cfg.dt = 1e-3;
    ForcingBasis basis(g, 1, 0.0);
    RandomStream rng(0, {});
    const SpectralField ic = taylor_green(g, 1.0);
    const double e0 = l2_norm_sq(ic);
    const Trajectory traj = run(g, ic, cfg, basis, rng);
    const double exact = e0 * std::exp(-16 * pi * pi * cfg.nu * cfg.t_end);
    const double err_e = std::abs(traj.records.back().energy - exact) / exact;
    const double err_d = std::abs(traj.records.back().cumulative_dissipation - (e0 - exact)) / (e0 - exact);
    VerifyCheck c{"taylor_green_decay", err_e <= 1e-6 && err_d <= 1e-3, err_e, 1e-6, {}};
    char buf[128];
    std::snprintf(buf, sizeof buf, "energy rel err %.3e, dissipation rel err %.3e (tol 1e-3)", err_e, err_d);
    c.detail = buf;
    return c;
}

VerifyCheck disk_identity_check() {
    Grid g(256);
    RandomStream rng(1, {3, 0, 0});
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const SpectralField v = random_band_limited(g, 16, rng);
        for (double r : {0.05, 0.1, 0.2}) {
            const auto c = disk_average_identity_check(v, r);
            worst = std::max(worst, std::abs(c.lhs / c.rhs - 1));
        }
    }
    return {"disk_average_identity", worst <= 0.02, worst, 0.02, "max |lhs/rhs - 1| over 4 fields x 3 radii, n = 256"};
}

VerifyCheck parseval_check() {
    Grid g(64);
    RandomStream rng(2, {3, 0, 0});
    const SpectralField u = random_band_limited(g, 31, rng);
    const PhysicalField p = to_physical(u);
    double phys = 0.0;
    for (const auto& c : p.comp)
        for (double x : c) phys += x * x;
    phys /= 64.0 * 64.0;
    const double err = std::abs(phys - l2_norm_sq(u)) / l2_norm_sq(u);
    return {"parseval", err <= 1e-12, err, 1e-12, "relative difference of physical and spectral L2 norms"};
}

VerifyCheck poincare_check_battery() {
    Grid g(64);
    RandomStream rng(3, {3, 0, 0});
    int violations = 0;
    for (int i = 0; i < 20; ++i) {
        const SpectralField v = random_band_limited(g, 20, rng);
        for (double r : {0.05, 0.1, 0.2}) violations += !poincare_inequality_check(v, r, 1.0);
    }
    return {"poincare_inequality", violations == 0, double(violations), 0.0, "violations over 20 fields x 3 radii, C = 1"};
}

VerifyCheck basis_norm_check() {
    Grid g(64);
    ForcingBasis basis(g, 9, 1.0);
    double worst = 0.0;
    for (int i = 1; i <= 9; ++i)
        for (int j = 1; j <= 9; ++j) {
            SpectralField e(g);
            basis.add_element(e, i, j, 1.0);
            worst = std::max(worst, std::abs(l2_norm_sq(e) - 1.0));
            worst = std::max(worst, max_divergence(e));
            const double curl = l2_norm_sq(curl2d(e));
            worst = std::max(worst, std::abs(curl - 4 * pi * pi * (i * i + j * j)) / (4 * pi * pi * (i * i + j * j)));
        }
    return {"basis_norms", worst <= 1e-12, worst, 1e-12, "max deviation of ||e||^2, div e, relative ||curl e||^2, i,j <= 9"};
}

}  // namespace

std::vector<VerifyCheck> run_verify_battery() {
    return {taylor_green_check(), disk_identity_check(), parseval_check(), poincare_check_battery(), basis_norm_check()};
}

}  // namespace stochns
