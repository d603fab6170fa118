#include "stochns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stochns/grid.hpp"
#include "stochns/spectral_ops.hpp"

namespace stochns {

DiagnosticsRecord measure(const SpectralField& u, double t, double cumulative_dissipation, double sigma_bar) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.energy = l2_norm_sq(u);
    rec.grad_sq = grad_l2_norm_sq(u);
    rec.enstrophy = l2_norm_sq(curl2d(u));
    rec.cumulative_dissipation = cumulative_dissipation;
    rec.noise_input_theoretical = sigma_bar * t;
    return rec;
}

namespace {

void check_series(std::span<const double> times, std::span<const double> values, double t) {
    if (times.empty() || times.size() != values.size())
        throw std::invalid_argument("dissipation series: times and values must be nonempty and of equal length");
    if (times.front() > 0.0) throw std::invalid_argument("dissipation series must start at t = 0");
    if (t > times.back() * (1.0 + 1e-12) + 1e-300)
        throw std::invalid_argument("dissipation series ends at t = " + std::to_string(times.back()) +
                                    ", shorter than requested t = " + std::to_string(t));
}

}  // namespace

double dissipation_integral(std::span<const double> times, std::span<const double> grad_sq, double nu, double t,
                            int n_rect) {
    if (n_rect < 1) throw std::invalid_argument("n_rect must be >= 1");
    check_series(times, grad_sq, t);
    const double h = t / n_rect;
    double sum = 0.0;
    std::size_t j = 0;
    for (int i = 0; i < n_rect; ++i) {
        // tolerate round-off so that s landing on a recorded time picks that sample
        const double s = i * h * (1.0 + 1e-12);
        while (j + 1 < times.size() && times[j + 1] <= s) ++j;
        sum += grad_sq[j];
    }
    return 2.0 * nu * h * sum;
}

double dissipation_trapezoid(std::span<const double> times, std::span<const double> grad_sq, double nu, double t) {
    check_series(times, grad_sq, t);
    double sum = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i - 1] >= t) break;
        const double hi = std::min(times[i], t);
        double g_hi = grad_sq[i];
        if (hi < times[i]) {
            const double w = (hi - times[i - 1]) / (times[i] - times[i - 1]);
            g_hi = grad_sq[i - 1] + w * (grad_sq[i] - grad_sq[i - 1]);
        }
        sum += 0.5 * (hi - times[i - 1]) * (grad_sq[i - 1] + g_hi);
    }
    return 2.0 * nu * sum;
}

ModulusFit fit_modulus(std::span<const double> radii, std::span<const double> values, double r_min, double r_max) {
    if (radii.size() != values.size()) throw std::invalid_argument("fit_modulus: radii and values differ in length");
    std::vector<double> lx, ly;
    const double slack = 1e-12;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < r_min * (1 - slack) || radii[i] > r_max * (1 + slack)) continue;
        if (!(values[i] > 0.0))
            throw std::invalid_argument("fit_modulus: nonpositive structure-function value at r = " +
                                        std::to_string(radii[i]));
        lx.push_back(std::log(radii[i]));
        ly.push_back(std::log(values[i]));
    }
    if (lx.size() < 4) throw std::invalid_argument("fit_modulus: fewer than 4 radii inside the fit range");

    const double m = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("fit_modulus: degenerate radius range");

    ModulusFit fit;
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    fit.prefactor = std::exp(intercept);
    fit.r_min = r_min;
    fit.r_max = r_max;
    fit.points = lx.size();
    for (std::size_t i = 0; i < lx.size(); ++i)
        fit.residual = std::max(fit.residual, std::abs(ly[i] - (intercept + fit.exponent * lx[i])));
    return fit;
}

ModulusFit fit_modulus(const StructureFunctionTable& table, double r_min, double r_max, bool time_integrated) {
    const auto& v = time_integrated ? table.values_time_integrated : table.values_snapshot;
    return fit_modulus(table.radii, v, r_min, r_max);
}

}  // namespace stochns
