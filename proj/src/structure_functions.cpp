#include "stochns/structure_functions.hpp"

#include <cmath>
#include <numbers>

#include "stochns/spectral_ops.hpp"

namespace stochns {

namespace {

constexpr double pi = std::numbers::pi;

void check_radius(double r, int n) {
    if (!(r <= std::sqrt(0.5) * (1 + 1e-12))) throw std::invalid_argument("radius must be <= sqrt(2)/2");
    if (r * n < 1.0 - 1e-12) throw RadiusUnresolved(r, n);
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

/// Autocorrelation C(m) = int v(x + m/n) . v(x) dx on the lattice.
PhysicalScalar autocorrelation(const SpectralField& v) {
    SpectralScalar power(v.grid);
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < power.coeffs.size(); ++i) power.coeffs[i] += std::norm(v.comp[c][i]);
    return to_physical(power);
}

/// int_D sum_{m in offsets} |v(x+m/n) - v(x)|^p dx.
double shift_sum(const PhysicalField& v, const std::vector<std::array<int, 2>>& offsets, int p) {
    const int n = v.grid.n();
    double total = 0.0;
    std::vector<int> col(n);
    for (const auto& m : offsets) {
        if (m[0] == 0 && m[1] == 0) continue;
        for (int i2 = 0; i2 < n; ++i2) col[i2] = wrap(i2 + m[1], n);
        double acc = 0.0;
        for (int i1 = 0; i1 < n; ++i1) {
            const std::size_t row = static_cast<std::size_t>(i1) * n;
            const std::size_t srow = static_cast<std::size_t>(wrap(i1 + m[0], n)) * n;
            for (int i2 = 0; i2 < n; ++i2) {
                const double d1 = v.comp[0][srow + col[i2]] - v.comp[0][row + i2];
                const double d2 = v.comp[1][srow + col[i2]] - v.comp[1][row + i2];
                const double sq = d1 * d1 + d2 * d2;
                acc += p == 2 ? sq : std::pow(sq, 0.5 * p);
            }
        }
        total += acc / (static_cast<double>(n) * n);
    }
    return total;
}

double normalise(double shift_total, std::size_t count, int n, SfNormalization norm) {
    return norm == SfNormalization::average ? shift_total / static_cast<double>(count)
                                            : shift_total / (static_cast<double>(n) * n);
}

}  // namespace

SfNormalization parse_sf_normalization(const std::string& name) {
    if (name == "average") return SfNormalization::average;
    if (name == "integral") return SfNormalization::integral;
    throw ConfigError("unknown sf normalization '" + name + "' (expected average, integral)");
}

std::string to_string(SfNormalization s) { return s == SfNormalization::average ? "average" : "integral"; }

RadiusUnresolved::RadiusUnresolved(double r, int n)
    : std::invalid_argument("radius_unresolved: r = " + std::to_string(r) + " is below one grid cell (1/" +
                            std::to_string(n) + ")") {}

std::vector<std::array<int, 2>> ball_offsets(int n, double r) {
    const double R = r * n;
    const double R2 = R * R * (1 + 1e-12);
    const int m = static_cast<int>(std::floor(R + 1e-9));
    std::vector<std::array<int, 2>> out;
    for (int a = -m; a <= m; ++a)
        for (int b = -m; b <= m; ++b)
            if (double(a) * a + double(b) * b <= R2) out.push_back({a, b});
    return out;
}

double structure_function(const PhysicalField& v, double r, int p, SfNormalization norm) {
    if (p < 1) throw std::invalid_argument("structure function order p must be >= 1");
    check_radius(r, v.grid.n());
    const auto offsets = ball_offsets(v.grid.n(), r);
    const double value = normalise(shift_sum(v, offsets, p), offsets.size(), v.grid.n(), norm);
    return std::pow(value, 1.0 / p);
}

std::vector<double> structure_function_sq(const SpectralField& v, std::span<const double> radii,
                                          SfNormalization norm) {
    const int n = v.grid.n();
    for (double r : radii) check_radius(r, n);
    const PhysicalScalar C = autocorrelation(v);
    const double c0 = C.values[0];
    std::vector<double> out;
    out.reserve(radii.size());
    for (double r : radii) {
        const auto offsets = ball_offsets(n, r);
        double total = 0.0;
        for (const auto& m : offsets)
            total += 2.0 * (c0 - C.values[v.grid.pidx(wrap(m[0], n), wrap(m[1], n))]);
        out.push_back(std::max(0.0, normalise(total, offsets.size(), n, norm)));
    }
    return out;
}

StructureFunctionTable structure_function_table(const SpectralField& v, std::span<const double> radii, int p,
                                                SfNormalization norm) {
    StructureFunctionTable table;
    table.radii.assign(radii.begin(), radii.end());
    table.p = p;
    if (p == 2) {
        for (double s : structure_function_sq(v, radii, norm)) table.values_snapshot.push_back(std::sqrt(s));
    } else {
        const PhysicalField phys = to_physical(v);
        for (double r : radii) table.values_snapshot.push_back(structure_function(phys, r, p, norm));
    }
    return table;
}

double structure_function_time_integrated(std::span<const double> times, std::span<const double> sp_pow, int p) {
    if (times.size() < 2 || times.size() != sp_pow.size())
        throw std::invalid_argument("time-integrated structure function needs >= 2 snapshots");
    double sum = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) sum += 0.5 * (times[i] - times[i - 1]) * (sp_pow[i] + sp_pow[i - 1]);
    return std::pow(sum, 1.0 / p);
}

double structure_function_time_integrated(const std::vector<Snapshot>& snapshots, double r, int p,
                                          SfNormalization norm) {
    if (snapshots.size() < 2) throw std::invalid_argument("time-integrated structure function needs >= 2 snapshots");
    std::vector<double> times, values;
    const double radius[] = {r};
    for (const auto& s : snapshots) {
        if (!(s.field.grid == snapshots.front().field.grid))
            throw std::invalid_argument("snapshots are on different grids");
        times.push_back(s.t);
        values.push_back(p == 2 ? structure_function_sq(s.field, radius, norm)[0]
                                : std::pow(structure_function(to_physical(s.field), r, p, norm), p));
    }
    return structure_function_time_integrated(times, values, p);
}

IdentityCheck disk_average_identity_check(const SpectralField& v, double r) {
    const Grid& g = v.grid;
    check_radius(r, g.n());
    // avg over offsets of h_i h_j, h = m / n
    double m11 = 0, m12 = 0, m22 = 0;
    const auto offsets = ball_offsets(g.n(), r);
    for (const auto& m : offsets) {
        m11 += double(m[0]) * m[0];
        m12 += double(m[0]) * m[1];
        m22 += double(m[1]) * m[1];
    }
    const double scale = 1.0 / (static_cast<double>(offsets.size()) * g.n() * g.n());
    m11 *= scale;
    m12 *= scale;
    m22 *= scale;

    double lhs = 0.0;
    for (int a = 0; a < g.n(); ++a)
        for (int b = 0; b < g.half(); ++b) {
            const double k1 = g.k1(a), k2 = g.k2(b);
            const std::size_t i = g.sidx(a, b);
            const double amp = std::norm(v.comp[0][i]) + std::norm(v.comp[1][i]);
            lhs += g.mode_weight(b) * (k1 * k1 * m11 + 2 * k1 * k2 * m12 + k2 * k2 * m22) * amp;
        }
    return {4 * pi * pi * lhs, 0.25 * r * r * grad_l2_norm_sq(v)};
}

PoincareCheck poincare_check(const SpectralField& v, double r, double C) {
    const SpectralScalar eta = curl2d(v);
    const double radius[] = {r};
    PoincareCheck out;
    out.lhs = l2_norm_sq(eta);
    out.sf_term = 8.0 / (r * r) * structure_function_sq(v, radius)[0];
    out.grad_term = C * r * r * grad_l2_norm_sq(eta);
    out.holds = out.lhs <= (out.sf_term + out.grad_term) * (1 + 1e-12);
    return out;
}

bool poincare_inequality_check(const SpectralField& v, double r, double C) { return poincare_check(v, r, C).holds; }

double slobodeckij_constant(double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0, 1)");
    return 2.0 * pi * std::tgamma(1.0 - s) / (s * std::pow(4.0, s) * std::tgamma(1.0 + s));
}

SobolevEstimate sobolev_seminorm(const PhysicalField& v, double s, int p) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0, 1), got " + std::to_string(s));
    if (p < 1) throw std::invalid_argument("p must be >= 1");
    const Grid& g = v.grid;
    const int n = g.n();
    const double r0 = std::sqrt(0.5);
    const double cell = 1.0 / (static_cast<double>(n) * n);

    SobolevEstimate out;
    std::optional<SpectralField> spec;
    std::optional<PhysicalScalar> C;
    if (p == 2) {
        spec = to_spectral(v);
        C = autocorrelation(*spec);
    }
    for (int i = 0;; ++i) {
        const double ri = r0 * std::ldexp(1.0, -i);
        if (ri < 2.0 / n) break;
        const double inner = 0.5 * ri;
        auto outer_set = ball_offsets(n, ri);
        std::vector<std::array<int, 2>> annulus;
        const double in2 = inner * inner * n * n * (1 + 1e-12);
        for (const auto& m : outer_set)
            if (double(m[0]) * m[0] + double(m[1]) * m[1] > in2) annulus.push_back(m);
        double shift_total = 0.0;
        if (p == 2) {
            for (const auto& m : annulus) shift_total += 2.0 * (C->values[0] - C->values[g.pidx(wrap(m[0], n), wrap(m[1], n))]);
        } else {
            shift_total = shift_sum(v, annulus, p);
        }
        out.annulus_sum += std::pow(inner, -(2.0 + s * p)) * shift_total * cell;
        ++out.annuli;
    }
    out.seminorm = std::pow(out.annulus_sum, 1.0 / p);

    if (spec) {
        double raw = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < g.half(); ++b) {
                const double k1 = g.k1(a), k2 = g.k2(b);
                if (k1 == 0 && k2 == 0) continue;
                const std::size_t i = g.sidx(a, b);
                const double amp = std::norm(spec->comp[0][i]) + std::norm(spec->comp[1][i]);
                raw += g.mode_weight(b) * std::pow(4 * pi * pi * (k1 * k1 + k2 * k2), s) * amp;
            }
        out.spectral_raw = raw;
        out.spectral = slobodeckij_constant(s) * raw;
    }
    return out;
}

}  // namespace stochns
