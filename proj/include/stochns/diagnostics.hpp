#pragma once

#include <span>
#include <vector>

#include "stochns/fields.hpp"

namespace stochns {

/// Scalars recorded along a trajectory. Energies carry no 1/2 factor.
struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;                   // ||u||^2
    double grad_sq = 0.0;                  // ||grad u||^2
    double enstrophy = 0.0;                // ||curl u||^2
    double cumulative_dissipation = 0.0;   // 2 nu int_0^t ||grad u||^2
    double noise_input_theoretical = 0.0;  // sigma_bar t

    friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

DiagnosticsRecord measure(const SpectralField& u, double t, double cumulative_dissipation, double sigma_bar);

/// Left-endpoint Riemann sum of 2 nu g(s) over n_rect equal rectangles of [0, t].
/// g is the recorded series (times ascending), sampled at the latest time <= s.
double dissipation_integral(std::span<const double> times, std::span<const double> grad_sq, double nu, double t,
                            int n_rect);

/// Trapezoid rule of 2 nu g over the recorded times up to t (t must be a recorded time or the last).
double dissipation_trapezoid(std::span<const double> times, std::span<const double> grad_sq, double nu, double t);

/// Least-squares power law S(r) ~ prefactor r^exponent on log-log axes.
struct ModulusFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;
    double residual = 0.0;  // max |log S - fit|
    std::size_t points = 0;
};

struct StructureFunctionTable {
    std::vector<double> radii;
    int p = 2;
    std::vector<double> values_snapshot;         // S_p(v; r)
    std::vector<double> values_time_integrated;  // S_p^T(v; r)
};

/// Fits the snapshot values (or the time-integrated ones) within [r_min, r_max].
ModulusFit fit_modulus(const StructureFunctionTable& table, double r_min, double r_max, bool time_integrated = false);
ModulusFit fit_modulus(std::span<const double> radii, std::span<const double> values, double r_min, double r_max);

}  // namespace stochns
