#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stochns {

/// Raised for invalid sizes, parameters and configuration values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Anti-aliasing rule applied to quadratic products and to the retained mode set.
enum class Dealias { none, two_thirds, three_halves };

Dealias parse_dealias(const std::string& name);
std::string to_string(Dealias d);

/// Uniform n x n collocation grid on the unit torus [0,1)^2.
///
/// Spectral arrays use the real-to-complex half layout: row index a runs over
/// all k1 (wrapped, a >= n/2 means k1 = a - n), column index b holds k2 = 0..n/2.
/// Physical arrays are row-major with x1 = i1/n along rows, x2 = i2/n along columns.
class Grid {
public:
    explicit Grid(int n);

    int n() const { return n_; }
    int half() const { return n_ / 2 + 1; }
    std::size_t physical_size() const { return static_cast<std::size_t>(n_) * n_; }
    std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * half(); }

    int k1(int a) const { return a < n_ / 2 ? a : a - n_; }
    int k2(int b) const { return b; }
    int row_of(int k1) const { return k1 >= 0 ? k1 : k1 + n_; }

    std::size_t sidx(int a, int b) const { return static_cast<std::size_t>(a) * half() + b; }
    std::size_t pidx(int i1, int i2) const { return static_cast<std::size_t>(i1) * n_ + i2; }
    double x(int i) const { return static_cast<double>(i) / n_; }

    /// Multiplicity of a stored column in sums over the full (Hermitian) spectrum.
    double mode_weight(int b) const { return (b == 0 || b == n_ / 2) ? 1.0 : 2.0; }

    /// Largest |k|_inf kept in solver states under a given dealiasing rule.
    int max_retained(Dealias d) const;

    friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_; }

private:
    int n_;
};

}  // namespace stochns
