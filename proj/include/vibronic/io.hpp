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

#ifndef VIBRONIC_IO_HPP
#define VIBRONIC_IO_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vibronic/model.hpp"
#include "vibronic/spectrum.hpp"

namespace vibronic {

/// Optional per-mode squeezing override carried by a molecule file
/// (magnitude and phase of the complex squeeze parameter).
struct SqueezeOverride {
    double abs = 0.0;
    double phase = 0.0;
};

/// A parsed molecule file: the validated problem plus file-level extras that
/// are not part of the physical input proper.
struct ParsedMolecule {
    VibronicProblem problem;
    std::optional<std::vector<SqueezeOverride>> squeezing;
};

/// Reads and validates a molecule document. JSON schema:
///   name            string (optional)
///   omega_initial   array of M frequencies, cm^-1
///   omega_final     array of M frequencies, cm^-1
///   duschinsky      M x M row-major array (optional, defaults to identity)
///   exactly one of:
///     delta_q       array of M mass-weighted origin shifts, atomic units
///     beta          array of M {"abs":, "phase":} displacement amplitudes
///     huang_rhys    array of M factors S_i (beta_i = sqrt(S_i), phase 0)
///   squeezing       array of M {"abs":, "phase":} overrides (optional)
/// All unit conversions happen here and nowhere else downstream.
ParsedMolecule parse_molecule_file(const std::filesystem::path &path);

/// The plain problem, for callers that do not care about file extras.
VibronicProblem parse_molecule(const std::filesystem::path &path);

/// Canonical serialized form of a parsed molecule; stable after one
/// parse/serialize round trip.
std::string molecule_to_json(const ParsedMolecule &molecule);

/// Serialized decomposition (u_left, u_right, sigma, r, beta, Huang-Rhys,
/// reorganization energies); real parts only, ab initio inputs are real.
std::string decomposition_to_json(const DoktorovDecomposition &decomp,
                                  const std::string &name);

/// Spectrum file content: bins plus the '#'-prefixed metadata header.
struct SpectrumFile {
    Spectrum spectrum;
    std::map<std::string, std::string> metadata;
};

/// Two-column text (energy cm^-1, probability, optional std error) with a
/// '#'-prefixed metadata header. Doubles are written with 17 significant
/// digits so rereading is exact and sampled runs are byte-reproducible.
void write_spectrum_file(const std::filesystem::path &path, const Spectrum &spectrum,
                         const std::map<std::string, std::string> &metadata);

SpectrumFile read_spectrum_file(const std::filesystem::path &path);

/// Sample sets as JSON ({n_shots, mode_frequencies, counts}).
void write_sample_file(const std::filesystem::path &path, const SampleSet &samples,
                       const std::map<std::string, std::string> &metadata);
SampleSet read_sample_file(const std::filesystem::path &path);

/// Writes via a temporary file in the same directory followed by a rename,
/// so readers never observe a partial file.
void atomic_write(const std::filesystem::path &path, const std::string &content);

/// 17-significant-digit representation that round-trips exactly.
std::string format_double(double v);

}  // namespace vibronic

#endif
