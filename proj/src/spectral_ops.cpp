#include "stochns/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stochns/fft.hpp"

namespace stochns {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

template <typename Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
    const int n = g.n();
    const int h = g.half();
    for (int a = 0; a < n; ++a) {
        const int k1 = g.k1(a);
        for (int b = 0; b < h; ++b) fn(g.sidx(a, b), k1, g.k2(b), g.mode_weight(b));
    }
}

}  // namespace

PhysicalField to_physical(const SpectralField& f) {
    PhysicalField out(f.grid);
    const auto& fft = FourierTransform::for_size(f.grid.n());
    for (int c = 0; c < 2; ++c) fft.inverse(f.comp[c], out.comp[c]);
    return out;
}

SpectralField to_spectral(const PhysicalField& g) {
    SpectralField out(g.grid);
    const auto& fft = FourierTransform::for_size(g.grid.n());
    for (int c = 0; c < 2; ++c) fft.forward(g.comp[c], out.comp[c]);
    return out;
}

PhysicalScalar to_physical(const SpectralScalar& f) {
    PhysicalScalar out(f.grid);
    FourierTransform::for_size(f.grid.n()).inverse(f.coeffs, out.values);
    return out;
}

SpectralScalar to_spectral(const PhysicalScalar& g) {
    SpectralScalar out(g.grid);
    FourierTransform::for_size(g.grid.n()).forward(g.values, out.coeffs);
    return out;
}

SpectralField leray_project(SpectralField f) {
    auto& u1 = f.comp[0];
    auto& u2 = f.comp[1];
    for_each_mode(f.grid, [&](std::size_t i, int k1, int k2, double) {
        const double kk = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        if (kk == 0.0) return;
        const cplx kdotu = static_cast<double>(k1) * u1[i] + static_cast<double>(k2) * u2[i];
        u1[i] -= static_cast<double>(k1) * kdotu / kk;
        u2[i] -= static_cast<double>(k2) * kdotu / kk;
    });
    return f;
}

SpectralField fourier_truncate(SpectralField f, int n_keep) {
    if (n_keep < 0 || n_keep > f.grid.n() / 2) {
        throw ConfigError("truncation n_keep=" + std::to_string(n_keep) + " exceeds grid half-width " +
                          std::to_string(f.grid.n() / 2));
    }
    for_each_mode(f.grid, [&](std::size_t i, int k1, int k2, double) {
        if (std::abs(k1) > n_keep || std::abs(k2) > n_keep) {
            f.comp[0][i] = 0.0;
            f.comp[1][i] = 0.0;
        }
    });
    return f;
}

void copy_modes(const Grid& from, const std::vector<cplx>& src, const Grid& to, std::vector<cplx>& dst, int kmax) {
    std::fill(dst.begin(), dst.end(), cplx{});
    for (int k1 = -kmax; k1 <= kmax; ++k1) {
        const std::size_t src_row = static_cast<std::size_t>(from.row_of(k1)) * from.half();
        const std::size_t dst_row = static_cast<std::size_t>(to.row_of(k1)) * to.half();
        for (int k2 = 0; k2 <= kmax; ++k2) dst[dst_row + k2] = src[src_row + k2];
    }
}

SpectralField nonlinear_term(const SpectralField& u, Dealias dealias) {
    const Grid& g = u.grid;
    const int kmax = g.max_retained(dealias);
    const Grid work = dealias == Dealias::three_halves ? Grid(3 * g.n() / 2) : g;
    const auto& fft = FourierTransform::for_size(work.n());

    std::vector<cplx> u1(work.spectral_size()), u2(work.spectral_size()), eta(work.spectral_size());
    copy_modes(g, u.comp[0], work, u1, kmax);
    copy_modes(g, u.comp[1], work, u2, kmax);
    for_each_mode(work, [&](std::size_t i, int k1, int k2, double) {
        eta[i] = cplx(0.0, two_pi) * (static_cast<double>(k1) * u2[i] - static_cast<double>(k2) * u1[i]);
    });

    std::vector<double> p1(work.physical_size()), p2(work.physical_size()), pe(work.physical_size());
    fft.inverse(u1, p1);
    fft.inverse(u2, p2);
    fft.inverse(eta, pe);
    // -(omega x u) = (eta u2, -eta u1)
    for (std::size_t i = 0; i < pe.size(); ++i) {
        const double e = pe[i];
        const double v1 = p1[i];
        p1[i] = e * p2[i];
        p2[i] = -e * v1;
    }
    fft.forward(p1, u1);
    fft.forward(p2, u2);

    SpectralField out(g);
    copy_modes(work, u1, g, out.comp[0], kmax);
    copy_modes(work, u2, g, out.comp[1], kmax);
    // the advection term has zero mean on the torus
    out.comp[0][0] = 0.0;
    out.comp[1][0] = 0.0;
    return leray_project(std::move(out));
}

SpectralScalar curl2d(const SpectralField& u) {
    SpectralScalar eta(u.grid);
    for_each_mode(u.grid, [&](std::size_t i, int k1, int k2, double) {
        eta.coeffs[i] =
            cplx(0.0, two_pi) * (static_cast<double>(k1) * u.comp[1][i] - static_cast<double>(k2) * u.comp[0][i]);
    });
    return eta;
}

SpectralScalar divergence(const SpectralField& u) {
    SpectralScalar d(u.grid);
    for_each_mode(u.grid, [&](std::size_t i, int k1, int k2, double) {
        d.coeffs[i] =
            cplx(0.0, two_pi) * (static_cast<double>(k1) * u.comp[0][i] + static_cast<double>(k2) * u.comp[1][i]);
    });
    return d;
}

SpectralField gradient(const SpectralScalar& phi) {
    SpectralField g(phi.grid);
    for_each_mode(phi.grid, [&](std::size_t i, int k1, int k2, double) {
        g.comp[0][i] = cplx(0.0, two_pi * k1) * phi.coeffs[i];
        g.comp[1][i] = cplx(0.0, two_pi * k2) * phi.coeffs[i];
    });
    return g;
}

double max_divergence(const SpectralField& u) {
    double worst = 0.0;
    for_each_mode(u.grid, [&](std::size_t i, int k1, int k2, double) {
        const double kn = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
        if (kn == 0.0) return;
        const cplx kdotu = static_cast<double>(k1) * u.comp[0][i] + static_cast<double>(k2) * u.comp[1][i];
        worst = std::max(worst, std::abs(kdotu) / kn);
    });
    return worst;
}

double l2_norm_sq(const SpectralField& f) {
    double s = 0.0;
    for_each_mode(f.grid, [&](std::size_t i, int, int, double w) {
        s += w * (std::norm(f.comp[0][i]) + std::norm(f.comp[1][i]));
    });
    return s;
}

double l2_norm_sq(const SpectralScalar& f) {
    double s = 0.0;
    for_each_mode(f.grid, [&](std::size_t i, int, int, double w) { s += w * std::norm(f.coeffs[i]); });
    return s;
}

double grad_l2_norm_sq(const SpectralField& f) {
    double s = 0.0;
    for_each_mode(f.grid, [&](std::size_t i, int k1, int k2, double w) {
        const double kk = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        s += w * kk * (std::norm(f.comp[0][i]) + std::norm(f.comp[1][i]));
    });
    return two_pi * two_pi * s;
}

double grad_l2_norm_sq(const SpectralScalar& f) {
    double s = 0.0;
    for_each_mode(f.grid, [&](std::size_t i, int k1, int k2, double w) {
        const double kk = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        s += w * kk * std::norm(f.coeffs[i]);
    });
    return two_pi * two_pi * s;
}

double inner_product(const SpectralField& f, const SpectralField& g) {
    if (!(f.grid == g.grid)) throw ConfigError("field grid mismatch");
    double s = 0.0;
    for_each_mode(f.grid, [&](std::size_t i, int, int, double w) {
        s += w * (std::real(f.comp[0][i] * std::conj(g.comp[0][i])) +
                  std::real(f.comp[1][i] * std::conj(g.comp[1][i])));
    });
    return s;
}

double max_speed(const SpectralField& u) {
    const PhysicalField p = to_physical(u);
    double m = 0.0;
    for (std::size_t i = 0; i < p.comp[0].size(); ++i) m = std::max(m, std::hypot(p.comp[0][i], p.comp[1][i]));
    return m;
}

}  // namespace stochns
