#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace arw {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an engine for the substream identified by `path` under `seed`.
/// Distinct paths give statistically independent engines, and a substream
/// does not depend on how many sibling substreams exist.
Engine substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

} // namespace arw
