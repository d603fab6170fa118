#pragma once

#include <vector>

#include "stochns/fields.hpp"
#include "stochns/rng.hpp"

namespace stochns {

struct VortexSheetParams {
    double rho = 0.1;     // smoothing width of the tanh profile
    double delta = 0.025; // perturbation amplitude
    int p_modes = 10;     // number of perturbation modes
};

struct FbbParams {
    double hurst = 0.5;
};

/// sigma_delta(x1) = delta sum_{k=1}^{p} alpha_k sin(2 pi k x1 - beta_k).
class PerturbationProfile {
public:
    PerturbationProfile(double delta, std::vector<double> alphas, std::vector<double> betas);

    double operator()(double x1) const;
    std::vector<double> sample(const Grid& grid) const;

    double delta() const { return delta_; }
    const std::vector<double>& alphas() const { return alphas_; }
    const std::vector<double>& betas() const { return betas_; }

private:
    double delta_;
    std::vector<double> alphas_;
    std::vector<double> betas_;
};

/// Draws alpha_k ~ U[0,1], beta_k ~ U[0,2 pi] in the order alpha_1, beta_1, alpha_2, ...
PerturbationProfile perturbation_sigma_delta(const VortexSheetParams& params, RandomStream& rng);

/// Flat vortex sheet with a given interface perturbation, truncated below the
/// Nyquist modes and Leray-projected.
SpectralField flat_vortex_sheet(const Grid& grid, const VortexSheetParams& params, const PerturbationProfile& profile);
SpectralField flat_vortex_sheet(const Grid& grid, const VortexSheetParams& params, RandomStream& rng);

/// Unprojected collocation values of the sheet (u2 = 0), used by the constructor above.
PhysicalField flat_vortex_sheet_values(const Grid& grid, const VortexSheetParams& params,
                                       const PerturbationProfile& profile);

/// Fractional Brownian bridge, one independent sample per velocity component.
///
/// Each component is sum_{1<=k1,k2<=K} |k|^-(H+1) sum_{m,n} alpha^{(mn)}_k sc_m(2 pi k1 x1) sc_n(2 pi k2 x2)
/// with alpha ~ U[-1,1] and K = n/2 - 1. Draw order: component, k1, k2, then (m,n) in
/// (sin,sin), (sin,cos), (cos,sin), (cos,cos). The result is Leray-projected.
SpectralField fractional_brownian_bridge(const Grid& grid, const FbbParams& params, RandomStream& rng);

/// u = A (-cos(2 pi x1) sin(2 pi x2), sin(2 pi x1) cos(2 pi x2)).
SpectralField taylor_green(const Grid& grid, double amplitude);

}  // namespace stochns
