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

#ifndef VIBRONIC_PATTERN_HPP
#define VIBRONIC_PATTERN_HPP

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace vibronic {

/// A detected photon-number tuple m = (m_1, ..., m_M), one phonon count per
/// mode. Ordered lexicographically so it can key deterministic maps.
struct PhotonPattern {
    std::vector<int> counts;

    PhotonPattern() = default;
    explicit PhotonPattern(std::vector<int> c) : counts(std::move(c)) {}
    static PhotonPattern zeros(std::size_t modes) {
        return PhotonPattern(std::vector<int>(modes, 0));
    }

    std::size_t size() const { return counts.size(); }
    int operator[](std::size_t i) const { return counts[i]; }
    int &operator[](std::size_t i) { return counts[i]; }

    int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

    std::string to_string() const;

    auto operator<=>(const PhotonPattern &) const = default;
};

}  // namespace vibronic

#endif
