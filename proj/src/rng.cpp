#include "stochns/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace stochns {

RandomStream::RandomStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * path.size());
    auto push = [&](std::uint64_t w) {
        words.push_back(static_cast<std::uint32_t>(w & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(w >> 32));
    };
    push(master_seed);
    for (auto w : path) push(w);
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
}

double RandomStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RandomStream::normal() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

RandomStream child_stream(std::uint64_t master_seed, StreamPurpose purpose, std::uint64_t viscosity_index,
                          std::uint64_t realization) {
    return RandomStream(master_seed, {static_cast<std::uint64_t>(purpose), viscosity_index, realization});
}

}  // namespace stochns
