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

#include "vibronic/pattern.hpp"

#include <sstream>

namespace vibronic {

std::string PhotonPattern::to_string() const {
    std::ostringstream oss;
    oss << '(';
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i > 0) oss << ',';
        oss << counts[i];
    }
    oss << ')';
    return oss.str();
}

}  // namespace vibronic
