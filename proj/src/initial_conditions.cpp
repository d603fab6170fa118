#include "stochns/initial_conditions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "stochns/spectral_ops.hpp"

namespace stochns {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Coefficient of exp(+-i theta) in sin(theta) (kind 0) or cos(theta) (kind 1).
cplx trig_coefficient(int kind, int sign) {
    if (kind == 1) return 0.5;
    return sign > 0 ? cplx(0.0, -0.5) : cplx(0.0, 0.5);
}

}  // namespace

PerturbationProfile::PerturbationProfile(double delta, std::vector<double> alphas, std::vector<double> betas)
    : delta_(delta), alphas_(std::move(alphas)), betas_(std::move(betas)) {
    if (alphas_.size() != betas_.size()) throw ConfigError("perturbation amplitude/phase count mismatch");
}

double PerturbationProfile::operator()(double x1) const {
    double s = 0.0;
    for (std::size_t k = 0; k < alphas_.size(); ++k) s += alphas_[k] * std::sin(two_pi * double(k + 1) * x1 - betas_[k]);
    return delta_ * s;
}

std::vector<double> PerturbationProfile::sample(const Grid& grid) const {
    std::vector<double> out(grid.n());
    for (int i = 0; i < grid.n(); ++i) out[i] = (*this)(grid.x(i));
    return out;
}

PerturbationProfile perturbation_sigma_delta(const VortexSheetParams& params, RandomStream& rng) {
    if (params.p_modes < 0) throw ConfigError("vortex sheet p_modes must be >= 0");
    std::vector<double> alphas(params.p_modes), betas(params.p_modes);
    for (int k = 0; k < params.p_modes; ++k) {
        alphas[k] = rng.uniform();
        betas[k] = rng.uniform(0.0, two_pi);
    }
    return PerturbationProfile(params.delta, std::move(alphas), std::move(betas));
}

PhysicalField flat_vortex_sheet_values(const Grid& grid, const VortexSheetParams& params,
                                       const PerturbationProfile& profile) {
    if (!(params.rho > 0.0)) throw ConfigError("vortex sheet rho must be > 0");
    const std::vector<double> sigma = profile.sample(grid);
    PhysicalField p(grid);
    for (int i1 = 0; i1 < grid.n(); ++i1) {
        for (int i2 = 0; i2 < grid.n(); ++i2) {
            const double x2 = grid.x(i2);
            const double arg = (x2 + sigma[i1] <= 0.5) ? (x2 - 0.25) : (0.75 - x2);
            p.comp[0][grid.pidx(i1, i2)] = std::tanh(two_pi * arg / params.rho);
        }
    }
    return p;
}

SpectralField flat_vortex_sheet(const Grid& grid, const VortexSheetParams& params, const PerturbationProfile& profile) {
    SpectralField f = to_spectral(flat_vortex_sheet_values(grid, params, profile));
    return leray_project(fourier_truncate(std::move(f), grid.n() / 2 - 1));
}

SpectralField flat_vortex_sheet(const Grid& grid, const VortexSheetParams& params, RandomStream& rng) {
    return flat_vortex_sheet(grid, params, perturbation_sigma_delta(params, rng));
}

SpectralField fractional_brownian_bridge(const Grid& grid, const FbbParams& params, RandomStream& rng) {
    const double hurst = params.hurst;
    if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("fbb hurst index must lie in (0, 1)");
    const int kmax = grid.n() / 2 - 1;
    SpectralField f(grid);
    for (int c = 0; c < 2; ++c) {
        auto& coeffs = f.comp[c];
        for (int k1 = 1; k1 <= kmax; ++k1) {
            for (int k2 = 1; k2 <= kmax; ++k2) {
                const double amp = std::pow(std::hypot(double(k1), double(k2)), -(hurst + 1.0));
                std::array<double, 4> alpha{};
                for (auto& a : alpha) a = rng.uniform(-1.0, 1.0);
                // only k2 > 0 is stored: accumulate the e^{i(+-k1 x1 + k2 x2)} coefficients
                cplx plus = 0.0, minus = 0.0;
                for (int m = 0; m < 2; ++m)
                    for (int n = 0; n < 2; ++n) {
                        const double w = amp * alpha[2 * m + n];
                        plus += w * trig_coefficient(m, +1) * trig_coefficient(n, +1);
                        minus += w * trig_coefficient(m, -1) * trig_coefficient(n, +1);
                    }
                coeffs[grid.sidx(grid.row_of(k1), k2)] = plus;
                coeffs[grid.sidx(grid.row_of(-k1), k2)] = minus;
            }
        }
    }
    return leray_project(std::move(f));
}

SpectralField taylor_green(const Grid& grid, double amplitude) {
    SpectralField u(grid);
    const double q = amplitude / 4.0;
    // -cos(a) sin(b) and sin(a) cos(b), expanded on (+-1, 1)
    set_mode(u.comp[0], grid, 1, 1, cplx(0.0, q));
    set_mode(u.comp[0], grid, -1, 1, cplx(0.0, q));
    set_mode(u.comp[1], grid, 1, 1, cplx(0.0, -q));
    set_mode(u.comp[1], grid, -1, 1, cplx(0.0, q));
    return u;
}

}  // namespace stochns
