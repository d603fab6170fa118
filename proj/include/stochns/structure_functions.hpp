#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochns/diagnostics.hpp"
#include "stochns/fields.hpp"
#include "stochns/integrator.hpp"

namespace stochns {

/// Ball-averaged (default) or ball-integrated increment statistics.
enum class SfNormalization { average, integral };

SfNormalization parse_sf_normalization(const std::string& name);
std::string to_string(SfNormalization s);

/// Raised when a radius is below one grid cell.
class RadiusUnresolved : public std::invalid_argument {
public:
    explicit RadiusUnresolved(double r, int n);
};

/// Integer offsets m with |m| <= r n, including m = 0.
std::vector<std::array<int, 2>> ball_offsets(int n, double r);

/// S_p(v; r) by direct enumeration of the shifts.
double structure_function(const PhysicalField& v, double r, int p,
                          SfNormalization norm = SfNormalization::average);

/// S_2(v; r)^2 for each radius, from the autocorrelation of v (one inverse transform).
/// Agrees with the direct shift loop up to round-off.
std::vector<double> structure_function_sq(const SpectralField& v, std::span<const double> radii,
                                          SfNormalization norm = SfNormalization::average);

/// Snapshot values S_p(v; r) at the given radii. values_time_integrated is left empty.
StructureFunctionTable structure_function_table(const SpectralField& v, std::span<const double> radii, int p,
                                                SfNormalization norm = SfNormalization::average);

/// (trapezoid of S_p^p over the times)^(1/p), from precomputed S_p^p values.
double structure_function_time_integrated(std::span<const double> times, std::span<const double> sp_pow, int p);

/// Same, evaluating S_p on each snapshot.
double structure_function_time_integrated(const std::vector<Snapshot>& snapshots, double r, int p,
                                          SfNormalization norm = SfNormalization::average);

struct IdentityCheck {
    double lhs = 0.0;  // int_D avg_{B_r} |h . grad v|^2 over the lattice offsets
    double rhs = 0.0;  // r^2/4 ||grad v||^2
};

IdentityCheck disk_average_identity_check(const SpectralField& v, double r);

struct PoincareCheck {
    bool holds = true;
    double lhs = 0.0;        // ||curl v||^2
    double sf_term = 0.0;    // 8/r^2 S_2(v; r)^2
    double grad_term = 0.0;  // C r^2 ||grad curl v||^2
};

/// ||eta||^2 <= (8/r^2) S_2(v;r)^2 + C r^2 ||grad eta||^2 with the averaged S_2.
PoincareCheck poincare_check(const SpectralField& v, double r, double C);
bool poincare_inequality_check(const SpectralField& v, double r, double C);

struct SobolevEstimate {
    double annulus_sum = 0.0;  // sum_i r_{i+1}^{-(2+sp)} int_D int_{A_i} |v(x+h)-v(x)|^p
    double seminorm = 0.0;     // annulus_sum^(1/p)
    int annuli = 0;
    std::optional<double> spectral_raw;  // p = 2: sum_k |2 pi k|^{2s} |v_k|^2
    std::optional<double> spectral;      // p = 2: slobodeckij_constant(s) * spectral_raw
};

/// Dyadic annuli r_i = 2^-i sqrt(2)/2, stopping once r_i < 2/n. A lower estimate near the grid scale.
SobolevEstimate sobolev_seminorm(const PhysicalField& v, double s, int p);

/// c(s) with int_{R^2} |e^{i xi.h} - 1|^2 |h|^{-2-2s} dh = c(s) |xi|^{2s}.
double slobodeckij_constant(double s);

}  // namespace stochns
