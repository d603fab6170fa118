#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>

namespace stochns {

/// Purpose tags that separate the child streams of one realization.
enum class StreamPurpose : std::uint64_t { initial_condition = 1, forcing = 2, test = 3 };

/// Seedable random stream.
///
/// The engine is mt19937_64 seeded through std::seed_seq from the 32-bit halves
/// of the master seed followed by the path words, so a stream is fully determined
/// by (master_seed, path). Uniforms take the top 53 bits of one engine output;
/// normals use the Box-Muller transform of two uniforms, emitting the cosine
/// branch first and caching the sine branch for the next call.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path);

    /// Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

RandomStream child_stream(std::uint64_t master_seed, StreamPurpose purpose, std::uint64_t viscosity_index,
                          std::uint64_t realization);

}  // namespace stochns
