#include "fou/rng.hpp"

namespace fou {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x6a09e667u};
    return std::mt19937_64(seq);
}

void fill_standard_normal(std::mt19937_64& gen, std::span<double> out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& x : out) x = normal(gen);
}

}  // namespace fou
