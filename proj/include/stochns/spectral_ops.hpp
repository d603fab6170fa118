#pragma once

#include "stochns/fields.hpp"

namespace stochns {

// Transform pair (forward normalised by 1/n^2).
PhysicalField to_physical(const SpectralField& f);
SpectralField to_spectral(const PhysicalField& g);
PhysicalScalar to_physical(const SpectralScalar& f);
SpectralScalar to_spectral(const PhysicalScalar& g);

/// Per-mode removal of the component along k; the mean mode is left alone.
SpectralField leray_project(SpectralField f);

/// Zeroes every coefficient with |k|_inf > n_keep.
SpectralField fourier_truncate(SpectralField f, int n_keep);

/// -P P_N (u . grad u): Leray-projected, truncated advection term.
///
/// Evaluated in rotational form, -(curl u) u^perp, whose projection agrees with
/// that of the advective form because the two differ by grad(|u|^2/2). Products
/// are formed pseudo-spectrally on a grid chosen by `dealias`.
SpectralField nonlinear_term(const SpectralField& u, Dealias dealias = Dealias::three_halves);

/// curl u = d1 u2 - d2 u1 with multiplier 2 pi i k.
SpectralScalar curl2d(const SpectralField& u);
SpectralScalar divergence(const SpectralField& u);
SpectralField gradient(const SpectralScalar& phi);

/// max_k |k . u_k| / |k| over k != 0.
double max_divergence(const SpectralField& u);

double l2_norm_sq(const SpectralField& f);
double l2_norm_sq(const SpectralScalar& f);
double grad_l2_norm_sq(const SpectralField& f);
double grad_l2_norm_sq(const SpectralScalar& f);

/// Real L^2 inner product from the coefficients.
double inner_product(const SpectralField& f, const SpectralField& g);

/// Largest pointwise speed |u(x)| over the collocation points.
double max_speed(const SpectralField& u);

/// Copies modes with |k|_inf <= kmax between grids of different sizes.
void copy_modes(const Grid& from, const std::vector<cplx>& src, const Grid& to, std::vector<cplx>& dst, int kmax);

}  // namespace stochns
