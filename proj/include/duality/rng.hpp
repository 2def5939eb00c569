#pragma once

#include <cstdint>
#include <random>

namespace duality {

/// SplitMix64 finalizer; a bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t x);

/// Independent child seeds keyed by (master, a, b). Used per pixel as
/// derive_seed(master, x, y) so results do not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

using Engine = std::mt19937_64;

Engine make_engine(std::uint64_t seed);

} // namespace duality
