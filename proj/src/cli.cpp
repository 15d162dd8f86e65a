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

#include "vibronic/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "vibronic/errors.hpp"
#include "vibronic/io.hpp"
#include "vibronic/linear.hpp"
#include "vibronic/parallel.hpp"

namespace vibronic::cli {

void RunConfig::validate() const {
    if (tier != "auto" && tier != "linear" && tier != "parallel" && tier != "full") {
        throw ValidationError("tier must be one of auto, linear, parallel, full");
    }
    if (mode != "exact" && mode != "sample") {
        throw ValidationError("mode must be exact or sample");
    }
    if (mode == "sample" && shots < 1) {
        throw ValidationError("sampling requires shots >= 1");
    }
    if (!(tail_bound > 0.0 && tail_bound < 1.0)) {
        throw ValidationError("tail_bound must lie in (0, 1)");
    }
    if (min_s < 0.0) throw ValidationError("min_s must be >= 0");
    if (prune < 0.0) throw ValidationError("prune must be >= 0");
    if (bin_tolerance < 0.0) throw ValidationError("bin_tolerance must be >= 0");
}

namespace {

// Squeezing overrides from the molecule file replace the SVD-derived
// parameters mode by mode.
void apply_overrides(DoktorovDecomposition &decomp, const ParsedMolecule &molecule) {
    if (!molecule.squeezing) return;
    for (std::size_t i = 0; i < decomp.modes.size(); ++i) {
        decomp.modes[i].r_abs = (*molecule.squeezing)[i].abs;
        decomp.modes[i].r_phase = (*molecule.squeezing)[i].phase;
        decomp.sigma[static_cast<Eigen::Index>(i)] =
            std::exp((*molecule.squeezing)[i].abs * std::cos((*molecule.squeezing)[i].phase));
    }
}

Tier resolve_tier(const std::string &requested, const DoktorovDecomposition &decomp,
                  const RunConfig &config) {
    if (requested == "auto") return recommend_tier(decomp, config.eps_r, config.eps_u);
    return tier_from_string(requested);
}

// Imposing a tier means replacing the decomposition by its approximate form:
// both independent-mode tiers drop the rotations, and the linear tier also
// drops the squeezing. After that the mode filter applies cleanly.
DoktorovDecomposition approximate_for_tier(const DoktorovDecomposition &decomp, Tier tier,
                                           double min_s) {
    if (tier == Tier::Full) return decomp;
    DoktorovDecomposition reduced = decomp;
    const Eigen::Index m = decomp.mode_count();
    reduced.u_left = Eigen::MatrixXcd::Identity(m, m);
    reduced.u_right = Eigen::MatrixXcd::Identity(m, m);
    if (tier == Tier::Linear) {
        reduced.sigma = Eigen::VectorXd::Ones(m);
        for (auto &mode : reduced.modes) {
            mode.r_abs = 0.0;
            mode.r_phase = 0.0;
        }
    }
    return filter_modes(reduced, min_s);
}

struct PipelineResult {
    Spectrum spectrum;
    std::map<std::string, std::string> metadata;
    SampleSet samples;  // only filled in sample mode
    bool has_samples = false;
};

std::string loss_to_string(const std::vector<double> &loss) {
    std::ostringstream oss;
    for (std::size_t i = 0; i < loss.size(); ++i) {
        if (i) oss << ",";
        oss << format_double(loss[i]);
    }
    return oss.str();
}

PipelineResult run_pipeline(const ParsedMolecule &molecule, const RunConfig &config) {
    config.validate();
    DoktorovDecomposition decomp = decompose(molecule.problem);
    apply_overrides(decomp, molecule);
    const Tier tier = resolve_tier(config.tier, decomp, config);

    PipelineResult result;
    result.metadata["molecule"] = molecule.problem.name;
    result.metadata["tier"] = to_string(tier);
    result.metadata["mode"] = config.mode;

    const bool sampling = config.mode == "sample";
    const bool lossy = !config.loss.empty();
    if (lossy) {
        if (!sampling || tier != Tier::Linear) {
            throw ValidationError("loss emulation requires sample mode and the linear "
                                  "tier; squeezed statistics change under loss");
        }
        if (config.loss.size() != static_cast<std::size_t>(decomp.mode_count())) {
            throw ValidationError("loss vector length does not match mode count");
        }
    }

    if (tier == Tier::Full) {
        const GaussianState state = build_gaussian(decomp);
        const GbsEnumeration enumeration = gbs_enumerate(state, config.photon_budget);
        result.metadata["photon_budget"] = std::to_string(config.photon_budget);
        result.metadata["captured_mass"] = format_double(enumeration.captured_mass);
        if (sampling) {
            result.samples = gbs_sample(state, config.shots, config.seed,
                                        config.photon_budget);
            result.has_samples = true;
        } else {
            result.spectrum =
                assemble(enumeration.entries, state.omega_final, config.bin_tolerance);
        }
    } else {
        const DoktorovDecomposition reduced =
            approximate_for_tier(decomp, tier, config.min_s);
        result.metadata["modes_kept"] = std::to_string(reduced.mode_count());
        result.metadata["modes_total"] = std::to_string(decomp.mode_count());
        result.metadata["min_s"] = format_double(config.min_s);
        std::vector<DisplacedSqueezedMode> modes = reduced.modes;

        if (sampling) {
            if (lossy) {
                // Emulated lossy run: compensate the input displacements,
                // sample, then thin each photon with its survival rate. The
                // detected statistics match the lossless target.
                std::vector<double> kept_loss;
                for (Eigen::Index i = 0; i < decomp.mode_count(); ++i) {
                    if (decomp.modes[static_cast<std::size_t>(i)].huang_rhys() > config.min_s) {
                        kept_loss.push_back(config.loss[static_cast<std::size_t>(i)]);
                    }
                }
                const LossModel loss_model{kept_loss};
                const auto compensated = compensate_loss(modes, loss_model);
                const SampleSet raw =
                    linear_sample(compensated, config.shots, config.seed);
                result.samples = apply_loss_to_samples(raw, loss_model, config.seed + 1);
                result.metadata["loss"] = loss_to_string(config.loss);
            } else if (tier == Tier::Linear) {
                result.samples = linear_sample(modes, config.shots, config.seed);
            } else {
                result.samples =
                    parallel_sample(modes, config.shots, config.seed, config.tail_bound);
            }
            result.has_samples = true;
        } else {
            result.metadata["tail_bound"] = format_double(config.tail_bound);
            const auto entries = tier == Tier::Linear
                                     ? linear_enumerate(modes, config.tail_bound)
                                     : parallel_enumerate(modes, config.tail_bound);
            result.spectrum = assemble(entries, reduced.omega_final, config.bin_tolerance);
        }
    }

    if (result.has_samples) {
        result.metadata["seed"] = std::to_string(config.seed);
        result.metadata["shots"] = std::to_string(config.shots);
        result.spectrum = assemble(result.samples, config.bin_tolerance);
    }
    return result;
}

void print_decomposition(const DoktorovDecomposition &decomp, const std::string &name,
                         std::ostream &out) {
    out << "molecule: " << name << " (" << decomp.mode_count() << " modes)\n";
    out << std::left << std::setw(6) << "mode" << std::right << std::setw(12) << "omega'"
        << std::setw(12) << "sigma" << std::setw(12) << "r" << std::setw(12) << "|beta|"
        << std::setw(12) << "phase" << std::setw(14) << "S=|beta|^2" << std::setw(14)
        << "E_R [cm-1]" << "\n";
    double r_sum = 0.0;
    for (Eigen::Index i = 0; i < decomp.mode_count(); ++i) {
        const auto &mode = decomp.modes[static_cast<std::size_t>(i)];
        const double r_signed = mode.r_abs * std::cos(mode.r_phase);
        r_sum += r_signed;
        out << std::left << std::setw(6) << i << std::right << std::fixed
            << std::setprecision(2) << std::setw(12) << mode.omega_final_i
            << std::setprecision(6) << std::setw(12) << decomp.sigma[i] << std::setw(12)
            << r_signed << std::setw(12) << mode.beta_abs << std::setw(12)
            << mode.beta_phase << std::setw(14) << mode.huang_rhys() << std::setw(14)
            << std::setprecision(4) << mode.reorganization_energy() << "\n";
        out.unsetf(std::ios::fixed);
    }
    out << "sum of r: " << format_double(r_sum) << "\n";
    out << "u_left (mode mixing of the photonic network):\n" << std::setprecision(4);
    for (Eigen::Index r = 0; r < decomp.mode_count(); ++r) {
        out << " ";
        for (Eigen::Index c = 0; c < decomp.mode_count(); ++c) {
            out << " " << std::setw(8) << std::fixed << decomp.u_left(r, c).real();
        }
        out << "\n";
        out.unsetf(std::ios::fixed);
    }
    out << "off-diagonal norm of u_left: " << format_double(decomp.off_diagonal_norm())
        << "\n";
}

}  // namespace

int cmd_decompose(const std::string &molecule_path, const std::string &json_out,
                  std::ostream &out) {
    const ParsedMolecule molecule = parse_molecule_file(molecule_path);
    DoktorovDecomposition decomp = decompose(molecule.problem);
    apply_overrides(decomp, molecule);
    print_decomposition(decomp, molecule.problem.name, out);
    if (!json_out.empty()) {
        atomic_write(json_out, decomposition_to_json(decomp, molecule.problem.name));
        out << "wrote " << json_out << "\n";
    }
    return kExitOk;
}

int cmd_recommend(const std::string &molecule_path, double eps_r, double eps_u,
                  std::ostream &out) {
    const ParsedMolecule molecule = parse_molecule_file(molecule_path);
    DoktorovDecomposition decomp = decompose(molecule.problem);
    apply_overrides(decomp, molecule);
    double max_r = 0.0;
    for (const auto &mode : decomp.modes) max_r = std::max(max_r, mode.r_abs);
    const Tier tier = recommend_tier(decomp, eps_r, eps_u);
    out << "max |r|: " << format_double(max_r) << " (eps_r " << format_double(eps_r)
        << ")\n";
    out << "u_left off-diagonal norm: " << format_double(decomp.off_diagonal_norm())
        << " (eps_u " << format_double(eps_u) << ")\n";
    out << "recommended tier: " << to_string(tier) << "\n";
    return kExitOk;
}

int cmd_spectrum(const std::string &molecule_path, const std::string &output_path,
                 const RunConfig &config, const std::string &plot_path,
                 double plot_threshold, std::ostream &out) {
    const ParsedMolecule molecule = parse_molecule_file(molecule_path);
    const PipelineResult result = run_pipeline(molecule, config);
    write_spectrum_file(output_path, result.spectrum, result.metadata);
    out << "tier " << result.metadata.at("tier") << ", " << result.spectrum.bins.size()
        << " sticks, mass " << format_double(result.spectrum.total_mass) << " -> "
        << output_path << "\n";

    if (!plot_path.empty()) {
        // Display filter only; the data file above keeps every stick.
        double max_p = 0.0;
        for (const auto &bin : result.spectrum.bins) max_p = std::max(max_p, bin.probability);
        Spectrum plot = result.spectrum;
        plot.bins.clear();
        double mass = 0.0;
        for (const auto &bin : result.spectrum.bins) {
            if (bin.probability >= plot_threshold * max_p) {
                plot.bins.push_back(bin);
                mass += bin.probability;
            }
        }
        plot.total_mass = mass;
        auto metadata = result.metadata;
        metadata["plot_threshold"] = format_double(plot_threshold);
        write_spectrum_file(plot_path, plot, metadata);
        out << "plot file (sticks >= " << format_double(plot_threshold)
            << " of max) -> " << plot_path << "\n";
    }
    return kExitOk;
}

int cmd_compare(const std::string &path_a, const std::string &path_b,
                bool allow_tolerance_mismatch, std::ostream &out) {
    SpectrumFile a = read_spectrum_file(path_a);
    SpectrumFile b = read_spectrum_file(path_b);
    if (a.spectrum.bin_tolerance != b.spectrum.bin_tolerance) {
        if (!allow_tolerance_mismatch) {
            throw ValidationError("bin tolerances differ (" +
                                  format_double(a.spectrum.bin_tolerance) + " vs " +
                                  format_double(b.spectrum.bin_tolerance) +
                                  "); pass --allow-tolerance-mismatch to override");
        }
        const double tol =
            std::max(a.spectrum.bin_tolerance, b.spectrum.bin_tolerance);
        a.spectrum.bin_tolerance = tol;
        b.spectrum.bin_tolerance = tol;
    }
    const double f = similarity(a.spectrum, b.spectrum);
    out << "similarity F = " << format_double(f) << "\n";

    // Union-grid diff, largest deviations first.
    struct Diff {
        double energy;
        double pa;
        double pb;
    };
    std::vector<Diff> diffs;
    std::size_t i = 0, j = 0;
    const double tol = a.spectrum.bin_tolerance;
    while (i < a.spectrum.bins.size() || j < b.spectrum.bins.size()) {
        if (i < a.spectrum.bins.size() && j < b.spectrum.bins.size() &&
            std::abs(a.spectrum.bins[i].energy - b.spectrum.bins[j].energy) <= tol) {
            diffs.push_back({a.spectrum.bins[i].energy, a.spectrum.bins[i].probability,
                             b.spectrum.bins[j].probability});
            ++i;
            ++j;
        } else if (j >= b.spectrum.bins.size() ||
                   (i < a.spectrum.bins.size() &&
                    a.spectrum.bins[i].energy < b.spectrum.bins[j].energy)) {
            diffs.push_back({a.spectrum.bins[i].energy, a.spectrum.bins[i].probability, 0.0});
            ++i;
        } else {
            diffs.push_back({b.spectrum.bins[j].energy, 0.0, b.spectrum.bins[j].probability});
            ++j;
        }
    }
    std::sort(diffs.begin(), diffs.end(), [](const Diff &x, const Diff &y) {
        return std::abs(x.pa - x.pb) > std::abs(y.pa - y.pb);
    });
    const std::size_t show = std::min<std::size_t>(diffs.size(), 20);
    out << "largest per-bin differences (top " << show << " of " << diffs.size() << "):\n";
    for (std::size_t k = 0; k < show; ++k) {
        out << "  " << format_double(diffs[k].energy) << "  " << format_double(diffs[k].pa)
            << "  " << format_double(diffs[k].pb) << "  delta "
            << format_double(diffs[k].pa - diffs[k].pb) << "\n";
    }
    return kExitOk;
}

int cmd_sample(const std::string &molecule_path, const std::string &output_path,
               const RunConfig &config, std::ostream &out) {
    RunConfig sampling_config = config;
    sampling_config.mode = "sample";
    const ParsedMolecule molecule = parse_molecule_file(molecule_path);
    const PipelineResult result = run_pipeline(molecule, sampling_config);
    write_sample_file(output_path, result.samples, result.metadata);
    out << result.samples.counts.size() << " distinct patterns from "
        << sampling_config.shots << " shots -> " << output_path << "\n";
    return kExitOk;
}

namespace {

void add_config_flags(CLI::App *cmd, RunConfig &config) {
    cmd->add_option("--tier", config.tier, "linear | parallel | full | auto")
        ->check(CLI::IsMember({"auto", "linear", "parallel", "full"}));
    cmd->add_option("--shots", config.shots, "samples to draw in sample mode");
    cmd->add_option("--seed", config.seed, "RNG seed (runs are reproducible per seed)");
    cmd->add_option("--tail-bound", config.tail_bound,
                    "per-run probability mass allowed outside the enumeration");
    cmd->add_option("--photon-budget", config.photon_budget,
                    "max total photons enumerated in the full tier");
    cmd->add_option("--prune", config.prune, "drop convolved sticks below this mass");
    cmd->add_option("--min-s", config.min_s,
                    "drop independent modes with |beta|^2 <= this");
    cmd->add_option("--bin-tolerance", config.bin_tolerance,
                    "energy equality tolerance in cm^-1");
    cmd->add_option("--loss", config.loss,
                    "per-mode loss for emulated lossy runs (linear tier, sample mode)")
        ->delimiter(',');
    cmd->add_option("--eps-r", config.eps_r, "squeezing threshold for tier=auto");
    cmd->add_option("--eps-u", config.eps_u, "mixing threshold for tier=auto");
}

}  // namespace

int run_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Franck-Condon profiles via photonic sampling hierarchies"};
    app.require_subcommand(1);

    std::string molecule_path, output_path, json_out, plot_path;
    std::string compare_a, compare_b;
    bool allow_tol = false;
    double eps_r = 0.01, eps_u = 0.01, plot_threshold = 0.005;
    RunConfig config;

    CLI::App *dec = app.add_subcommand("decompose",
                                       "print the photonic parameters of a molecule");
    dec->add_option("molecule", molecule_path, "molecule JSON file")->required();
    dec->add_option("--json", json_out, "also write machine-readable JSON here");

    CLI::App *rec = app.add_subcommand("recommend",
                                       "classify which approximation tier a molecule needs");
    rec->add_option("molecule", molecule_path, "molecule JSON file")->required();
    rec->add_option("--eps-r", eps_r, "squeezing threshold");
    rec->add_option("--eps-u", eps_u, "mixing threshold");

    CLI::App *spec_cmd = app.add_subcommand("spectrum", "compute a Franck-Condon profile");
    spec_cmd->add_option("molecule", molecule_path, "molecule JSON file")->required();
    spec_cmd->add_option("-o,--output", output_path, "spectrum output file")->required();
    spec_cmd->add_option("--mode", config.mode, "exact | sample")
        ->check(CLI::IsMember({"exact", "sample"}));
    spec_cmd->add_option("--plot-file", plot_path,
                         "optional display file keeping only dominant sticks");
    spec_cmd->add_option("--plot-threshold", plot_threshold,
                         "plot filter as a fraction of the largest stick");
    add_config_flags(spec_cmd, config);

    CLI::App *cmp = app.add_subcommand("compare", "similarity of two spectrum files");
    cmp->add_option("a", compare_a, "first spectrum file")->required();
    cmp->add_option("b", compare_b, "second spectrum file")->required();
    cmp->add_flag("--allow-tolerance-mismatch", allow_tol,
                  "compare even when the files used different bin tolerances");

    CLI::App *smp = app.add_subcommand("sample", "draw photon-number samples");
    smp->add_option("molecule", molecule_path, "molecule JSON file")->required();
    smp->add_option("-o,--output", output_path, "sample-set output file")->required();
    add_config_flags(smp, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        // CLI11 prints help itself; nonzero only for genuine usage errors.
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (dec->parsed()) return cmd_decompose(molecule_path, json_out, out);
        if (rec->parsed()) return cmd_recommend(molecule_path, eps_r, eps_u, out);
        if (spec_cmd->parsed()) {
            return cmd_spectrum(molecule_path, output_path, config, plot_path,
                                plot_threshold, out);
        }
        if (cmp->parsed()) return cmd_compare(compare_a, compare_b, allow_tol, out);
        if (smp->parsed()) return cmd_sample(molecule_path, output_path, config, out);
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ValidationError &e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace vibronic::cli
