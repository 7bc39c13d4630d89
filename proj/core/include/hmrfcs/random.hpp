#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hmrfcs {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent seed from a parent seed and a list of tags
/// (generation, nest index, phase ...). Used to give every nest its own stream
/// so that evaluation order never changes which numbers a nest sees.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags) noexcept;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

}  // namespace hmrfcs
