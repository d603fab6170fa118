#include "stochns/forcing.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace stochns {

namespace {

void check_representable(const Grid& grid, int i, int j) {
    if (i < 1 || j < 1 || 2 * std::max(i, j) > grid.n() / 2) {
        throw ConfigError("forcing mode e_{" + std::to_string(i) + "," + std::to_string(j) +
                          "} is not representable on an n=" + std::to_string(grid.n()) + " grid");
    }
}

}  // namespace

SpectralField eval_basis(const Grid& grid, int i, int j) {
    check_representable(grid, i, j);
    const double c = 2.0 / std::sqrt(double(i) * i + double(j) * j);
    SpectralField e(grid);
    // cos*cos has coefficient 1/4 on all four (+-i, +-j); sin*sin has -1/4 on (i,j),(-i,-j) and +1/4 on the others
    set_mode(e.comp[0], grid, i, j, c * j / 4.0);
    set_mode(e.comp[0], grid, -i, j, c * j / 4.0);
    set_mode(e.comp[1], grid, i, j, -c * i / 4.0);
    set_mode(e.comp[1], grid, -i, j, c * i / 4.0);
    return e;
}

ForcingBasis::ForcingBasis(Grid grid, int n_b, double sigma)
    : ForcingBasis(grid, n_b, std::vector<double>(n_b > 0 ? std::size_t(n_b) * n_b : 0, sigma)) {}

ForcingBasis::ForcingBasis(Grid grid, int n_b, std::vector<double> coefficients)
    : grid_(grid), n_b_(n_b), coeffs_(std::move(coefficients)) {
    if (n_b < 1) throw ConfigError("forcing.n_b must be >= 1");
    if (coeffs_.size() != std::size_t(n_b) * n_b) {
        throw ConfigError("forcing coefficient table must have n_b^2 = " + std::to_string(n_b * n_b) + " entries");
    }
    for (double b : coeffs_) {
        if (!std::isfinite(b) || b < 0.0) throw ConfigError("forcing coefficients must be finite and >= 0");
    }
    check_representable(grid_, n_b, n_b);
    build();
}

void ForcingBasis::build() {
    elements_.resize(coeffs_.size());
    const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    for (int i = 1; i <= n_b_; ++i) {
        for (int j = 1; j <= n_b_; ++j) {
            const SpectralField e = eval_basis(grid_, i, j);
            auto& entries = elements_[index(i, j)];
            for (std::size_t k = 0; k < e.comp[0].size(); ++k) {
                if (e.comp[0][k] != cplx{} || e.comp[1][k] != cplx{}) entries.push_back({k, e.comp[0][k], e.comp[1][k]});
            }
            const double b = coeffs_[index(i, j)];
            sigma_bar_ += b * b;
            rho_bar_ += b * b * four_pi_sq * (double(i) * i + double(j) * j);
        }
    }
}

void ForcingBasis::add_element(SpectralField& field, int i, int j, double scale) const {
    for (const auto& e : elements_[index(i, j)]) {
        field.comp[0][e.index] += scale * e.u1;
        field.comp[1][e.index] += scale * e.u2;
    }
}

double sigma_bar(const ForcingBasis& basis) { return basis.sigma_bar(); }
double rho_bar(const ForcingBasis& basis) { return basis.rho_bar(); }

NoiseIncrement make_increment(const ForcingBasis& basis, double dt, std::vector<double> gaussians) {
    if (!(dt > 0.0)) throw ConfigError("noise increment requires dt > 0");
    if (gaussians.size() != basis.size()) throw ConfigError("gaussian draw count does not match the basis size");
    NoiseIncrement inc{dt, SpectralField(basis.grid()), std::move(gaussians)};
    const double sqrt_dt = std::sqrt(dt);
    for (int i = 1; i <= basis.n_b(); ++i) {
        for (int j = 1; j <= basis.n_b(); ++j) {
            const double w = basis.coefficient(i, j) * inc.gaussians[std::size_t(i - 1) * basis.n_b() + (j - 1)] * sqrt_dt;
            if (w != 0.0) basis.add_element(inc.field, i, j, w);
        }
    }
    return inc;
}

NoiseIncrement sample_increment(const ForcingBasis& basis, double dt, RandomStream& rng) {
    std::vector<double> xi(basis.size());
    for (auto& x : xi) x = rng.normal();
    return make_increment(basis, dt, std::move(xi));
}

NoiseIncrement zero_increment(const Grid& grid, double dt) {
    if (!(dt > 0.0)) throw ConfigError("noise increment requires dt > 0");
    return NoiseIncrement{dt, SpectralField(grid), {}};
}

}  // namespace stochns
