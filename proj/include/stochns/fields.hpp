#pragma once

#include <array>
#include <complex>
#include <vector>

#include "stochns/grid.hpp"

namespace stochns {

using cplx = std::complex<double>;

/// Fourier-series coefficients of a real scalar on the unit torus (half layout).
struct SpectralScalar {
    explicit SpectralScalar(Grid g) : grid(g), coeffs(g.spectral_size()) {}

    Grid grid;
    std::vector<cplx> coeffs;
};

/// Fourier-series coefficients of a real 2D vector field; the solver state.
struct SpectralField {
    explicit SpectralField(Grid g)
        : grid(g), comp{std::vector<cplx>(g.spectral_size()), std::vector<cplx>(g.spectral_size())} {}

    Grid grid;
    std::array<std::vector<cplx>, 2> comp;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator*=(double s);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

struct PhysicalScalar {
    explicit PhysicalScalar(Grid g) : grid(g), values(g.physical_size()) {}

    Grid grid;
    std::vector<double> values;
};

/// Velocity sampled at the collocation points x_m = m/n.
struct PhysicalField {
    explicit PhysicalField(Grid g)
        : grid(g), comp{std::vector<double>(g.physical_size()), std::vector<double>(g.physical_size())} {}

    Grid grid;
    std::array<std::vector<double>, 2> comp;
};

/// Writes coefficient `value` for wavenumber (k1,k2) of a real field.
/// Entries with k2 < 0 are stored through their Hermitian partner.
void set_mode(std::vector<cplx>& coeffs, const Grid& g, int k1, int k2, cplx value);

/// Coefficient of wavenumber (k1,k2) of a real field, |k|_inf <= n/2.
cplx get_mode(const std::vector<cplx>& coeffs, const Grid& g, int k1, int k2);

/// Restores Hermitian symmetry on the self-conjugate columns (k2 = 0 and k2 = n/2).
void enforce_hermitian(std::vector<cplx>& coeffs, const Grid& g);

/// Max absolute coefficient difference relative to the max coefficient of `b`.
double relative_difference(const SpectralField& a, const SpectralField& b);

}  // namespace stochns
