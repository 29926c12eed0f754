#pragma once

#include <cstdint>

#include "coevnet/graph.hpp"

namespace coevnet {

/// Stream identifiers mixed into every derived seed. Values are part of the
/// reproducibility contract; do not renumber.
enum class Phase : std::uint64_t {
    generate = 1,
    init = 2,
    choose = 3,
    update = 4,
    grow = 5,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for the (phase, step, agent) substream of a run. Each coordinate is
/// folded in with a full mix so neighboring coordinates decorrelate.
constexpr std::uint64_t substream_seed(std::uint64_t master, Phase phase, std::uint64_t step,
                                       std::uint64_t agent) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ static_cast<std::uint64_t>(phase));
    h = mix64(h ^ step);
    h = mix64(h ^ agent);
    return h;
}

inline Rng substream(std::uint64_t master, Phase phase, std::uint64_t step, std::uint64_t agent) {
    return Rng(substream_seed(master, phase, step, agent));
}

}  // namespace coevnet
