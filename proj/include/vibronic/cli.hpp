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

#ifndef VIBRONIC_CLI_HPP
#define VIBRONIC_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vibronic/constants.hpp"
#include "vibronic/gbs.hpp"

namespace vibronic::cli {

/// Everything a pipeline run needs beyond the molecule itself; flags map
/// onto these fields one to one.
struct RunConfig {
    std::string tier = "auto";  ///< linear | parallel | full | auto
    std::string mode = "exact";  ///< exact | sample
    std::uint64_t shots = 1'000'000;
    std::uint64_t seed = 1;
    double tail_bound = 1e-9;
    int photon_budget = kDefaultPhotonBudget;
    double prune = 0.0;
    double min_s = kDefaultModeFilter;
    double bin_tolerance = kDefaultBinTolerance;
    std::vector<double> loss;  ///< empty = lossless
    double eps_r = 0.01;
    double eps_u = 0.01;

    void validate() const;
};

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNumerical = 4;

int cmd_decompose(const std::string &molecule_path, const std::string &json_out,
                  std::ostream &out);
int cmd_recommend(const std::string &molecule_path, double eps_r, double eps_u,
                  std::ostream &out);
int cmd_spectrum(const std::string &molecule_path, const std::string &output_path,
                 const RunConfig &config, const std::string &plot_path,
                 double plot_threshold, std::ostream &out);
int cmd_compare(const std::string &path_a, const std::string &path_b,
                bool allow_tolerance_mismatch, std::ostream &out);
int cmd_sample(const std::string &molecule_path, const std::string &output_path,
               const RunConfig &config, std::ostream &out);

/// Full argv-level entry point used by the binary; translates exceptions
/// into the exit codes above.
int run_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace vibronic::cli

#endif
