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

#ifndef VIBRONIC_CONSTANTS_HPP
#define VIBRONIC_CONSTANTS_HPP

namespace vibronic {

// Every unit conversion in the library goes through this table. Frequencies
// are ingested in cm^-1 and displacements in mass-weighted atomic units;
// everything downstream of the decomposition is dimensionless.

/// 1 hartree expressed in cm^-1 (CODATA: E_h / (h c)).
inline constexpr double kHartreeInWavenumbers = 219474.6313632;

/// Convert a vibrational frequency from cm^-1 to atomic units (hbar = 1).
inline constexpr double wavenumber_to_au(double omega_cm) {
    return omega_cm / kHartreeInWavenumbers;
}

/// Dimensionless displacement amplitude from a mass-weighted origin shift,
/// beta = sqrt(omega' / (2 hbar)) * delta_q with omega' in cm^-1 and
/// delta_q in mass-weighted atomic units.
double displacement_amplitude(double omega_final_cm, double delta_q_au);

/// Inverse of displacement_amplitude (used for convention round-trips).
double origin_shift_from_amplitude(double omega_final_cm, double beta);

/// Energy-equality tolerance used when binning spectra, in cm^-1.
inline constexpr double kDefaultBinTolerance = 1e-10;

/// Displacement filter threshold: modes with |beta|^2 below this contribute
/// p(m > 0) < 1e-4 and may be dropped from independent-mode runs.
inline constexpr double kDefaultModeFilter = 1e-4;

}  // namespace vibronic

#endif
