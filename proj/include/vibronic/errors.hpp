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

#ifndef VIBRONIC_ERRORS_HPP
#define VIBRONIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vibronic {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Malformed input file or schema violation. CLI exit code 2.
class ParseError : public Error {
  public:
    explicit ParseError(const std::string &msg) : Error(msg) {}
};

/// Violated precondition or domain invariant. CLI exit code 3.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &msg) : Error(msg) {}
};

/// Numerical failure: ill-conditioned decomposition, truncation deficit,
/// enumeration budget too small. CLI exit code 4.
class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string &msg) : Error(msg) {}
};

}  // namespace vibronic

#endif
