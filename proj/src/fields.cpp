#include "stochns/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace stochns {

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    if (!(grid == other.grid)) throw ConfigError("field grid mismatch");
    for (int c = 0; c < 2; ++c) {
        auto& dst = comp[c];
        const auto& src = other.comp[c];
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& v : comp)
        for (auto& z : v) z *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }

SpectralField operator-(SpectralField a, const SpectralField& b) {
    SpectralField nb = b;
    nb *= -1.0;
    return a += nb;
}

SpectralField operator*(double s, SpectralField a) { return a *= s; }

void set_mode(std::vector<cplx>& coeffs, const Grid& g, int k1, int k2, cplx value) {
    const int h = g.n() / 2;
    if (std::abs(k1) > h || std::abs(k2) > h) throw ConfigError("wavenumber outside grid");
    if (k2 < 0) {
        k1 = -k1;
        k2 = -k2;
        value = std::conj(value);
    }
    const int a = ((k1 % g.n()) + g.n()) % g.n();
    coeffs[g.sidx(a, k2)] = value;
}

cplx get_mode(const std::vector<cplx>& coeffs, const Grid& g, int k1, int k2) {
    const int h = g.n() / 2;
    if (std::abs(k1) > h || std::abs(k2) > h) throw ConfigError("wavenumber outside grid");
    bool conj = false;
    if (k2 < 0) {
        k1 = -k1;
        k2 = -k2;
        conj = true;
    }
    const int a = ((k1 % g.n()) + g.n()) % g.n();
    const cplx v = coeffs[g.sidx(a, k2)];
    return conj ? std::conj(v) : v;
}

void enforce_hermitian(std::vector<cplx>& coeffs, const Grid& g) {
    const int n = g.n();
    for (int b : {0, n / 2}) {
        for (int a = 0; a <= n / 2; ++a) {
            const int ap = (n - a) % n;
            const cplx avg = 0.5 * (coeffs[g.sidx(a, b)] + std::conj(coeffs[g.sidx(ap, b)]));
            coeffs[g.sidx(a, b)] = avg;
            coeffs[g.sidx(ap, b)] = std::conj(avg);
        }
    }
}

double relative_difference(const SpectralField& a, const SpectralField& b) {
    double diff = 0.0;
    double scale = 0.0;
    for (int c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < a.comp[c].size(); ++i) {
            diff = std::max(diff, std::abs(a.comp[c][i] - b.comp[c][i]));
            scale = std::max(scale, std::abs(b.comp[c][i]));
        }
    }
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace stochns
