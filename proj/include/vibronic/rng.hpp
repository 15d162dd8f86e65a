// Copyright 2026 The vibronic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VIBRONIC_RNG_HPP
#define VIBRONIC_RNG_HPP

#include <cstdint>
#include <random>

namespace vibronic {

// Shots are generated in fixed-size blocks, each block seeded independently
// from (seed, block index). Blocks may therefore be generated in any order
// or in parallel without changing the result; the block size is part of the
// determinism contract.
inline constexpr std::uint64_t kShotBlockSize = 65536;

/// One step of the splitmix64 generator (also a good 64-bit mixer).
inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic per-block engine derived from a user seed.
inline std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block_index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= block_index * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL;
    std::uint64_t b = splitmix64(s);
    return std::mt19937_64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace vibronic

#endif
