#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace fou {

/// Generator for stream `stream` of a run seeded with `seed`. Streams with
/// different indices are statistically independent; the mapping is fixed,
/// so replications can run in any order on any number of workers.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// Fills `out` with iid standard normals.
void fill_standard_normal(std::mt19937_64& gen, std::span<double> out);

}  // namespace fou
