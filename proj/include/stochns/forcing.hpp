#pragma once

#include <vector>

#include "stochns/fields.hpp"
#include "stochns/rng.hpp"

namespace stochns {

/// Spectral coefficients of the divergence-free, unit-norm forcing mode
///   e_{i,j} = 2/sqrt(i^2+j^2) (j cos(2 pi i x1) cos(2 pi j x2), i sin(2 pi i x1) sin(2 pi j x2)).
/// Requires 1 <= i, j and 2 max(i, j) <= n/2.
SpectralField eval_basis(const Grid& grid, int i, int j);

/// The truncated noise family {b_{i,j} e_{i,j}}, 1 <= i, j <= n_b. Immutable.
class ForcingBasis {
public:
    /// Flat coefficients b_{i,j} = sigma.
    ForcingBasis(Grid grid, int n_b, double sigma);
    /// Explicit coefficient table, row-major in (i, j).
    ForcingBasis(Grid grid, int n_b, std::vector<double> coefficients);

    const Grid& grid() const { return grid_; }
    int n_b() const { return n_b_; }
    std::size_t size() const { return coeffs_.size(); }
    double coefficient(int i, int j) const { return coeffs_[index(i, j)]; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    /// Adds scale * e_{i,j} to `field` using the stored sparse coefficients.
    void add_element(SpectralField& field, int i, int j, double scale) const;

    double sigma_bar() const { return sigma_bar_; }
    double rho_bar() const { return rho_bar_; }

private:
    struct Entry {
        std::size_t index;
        cplx u1;
        cplx u2;
    };

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i - 1) * n_b_ + (j - 1); }
    void build();

    Grid grid_;
    int n_b_;
    std::vector<double> coeffs_;
    std::vector<std::vector<Entry>> elements_;
    double sigma_bar_ = 0.0;
    double rho_bar_ = 0.0;
};

/// sum b_{i,j}^2
double sigma_bar(const ForcingBasis& basis);
/// sum b_{i,j}^2 ||curl e_{i,j}||^2 = sum b_{i,j}^2 4 pi^2 (i^2 + j^2)
double rho_bar(const ForcingBasis& basis);

/// One step of sigma . dW: field = sum b_{i,j} e_{i,j} xi_{i,j} sqrt(dt).
struct NoiseIncrement {
    double dt;
    SpectralField field;
    std::vector<double> gaussians;  // xi_{i,j}, row-major in (i, j)
};

/// Builds an increment from given standard normal draws.
NoiseIncrement make_increment(const ForcingBasis& basis, double dt, std::vector<double> gaussians);

/// Draws n_b^2 normals from `rng` in (i, j) row-major order.
NoiseIncrement sample_increment(const ForcingBasis& basis, double dt, RandomStream& rng);

/// Noise-free increment, for deterministic stepping.
NoiseIncrement zero_increment(const Grid& grid, double dt);

}  // namespace stochns
