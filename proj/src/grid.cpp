#include "stochns/grid.hpp"

namespace stochns {

Grid::Grid(int n) : n_(n) {
    if (n < 8 || n % 2 != 0) {
        throw ConfigError("grid size must be even and >= 8, got " + std::to_string(n));
    }
}

int Grid::max_retained(Dealias d) const {
    switch (d) {
    case Dealias::two_thirds:
        // keep |k| < n/3 so that products alias only outside the kept band
        return (n_ + 2) / 3 - 1;
    case Dealias::none:
    case Dealias::three_halves:
        break;
    }
    return n_ / 2 - 1;
}

Dealias parse_dealias(const std::string& name) {
    if (name == "none") return Dealias::none;
    if (name == "two_thirds") return Dealias::two_thirds;
    if (name == "three_halves") return Dealias::three_halves;
    throw ConfigError("unknown dealias rule '" + name + "' (expected none, two_thirds, three_halves)");
}

std::string to_string(Dealias d) {
    switch (d) {
    case Dealias::none: return "none";
    case Dealias::two_thirds: return "two_thirds";
    case Dealias::three_halves: return "three_halves";
    }
    return "?";
}

}  // namespace stochns
