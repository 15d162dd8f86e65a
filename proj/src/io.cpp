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

#include "vibronic/io.hpp"

#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vibronic/errors.hpp"

namespace vibronic {

using nlohmann::json;

namespace {

json load_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception &e) {
        throw ParseError("invalid JSON in '" + path.string() + "': " + e.what());
    }
    return doc;
}

Eigen::VectorXd parse_vector(const json &node, const std::string &key) {
    if (!node.is_array()) throw ParseError("'" + key + "' must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(node.size()));
    Eigen::Index i = 0;
    for (const auto &x : node) {
        if (!x.is_number()) throw ParseError("'" + key + "' must contain numbers");
        v[i++] = x.get<double>();
    }
    if (!v.allFinite()) throw ParseError("'" + key + "' contains NaN or Inf");
    return v;
}

Eigen::MatrixXd parse_matrix(const json &node, const std::string &key) {
    if (!node.is_array() || node.empty()) {
        throw ParseError("'" + key + "' must be a non-empty array of rows");
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(node.size());
    Eigen::MatrixXd mat;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto &row = node[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
            throw ParseError("'" + key + "' must be square");
        }
        if (r == 0) mat.resize(rows, rows);
        for (Eigen::Index c = 0; c < rows; ++c) {
            const auto &x = row[static_cast<std::size_t>(c)];
            if (!x.is_number()) throw ParseError("'" + key + "' must contain numbers");
            mat(r, c) = x.get<double>();
        }
    }
    if (!mat.allFinite()) throw ParseError("'" + key + "' contains NaN or Inf");
    return mat;
}

struct AbsPhase {
    double abs;
    double phase;
};

std::vector<AbsPhase> parse_abs_phase_array(const json &node, const std::string &key) {
    if (!node.is_array()) throw ParseError("'" + key + "' must be an array");
    std::vector<AbsPhase> out;
    out.reserve(node.size());
    for (const auto &entry : node) {
        if (!entry.is_object() || !entry.contains("abs")) {
            throw ParseError("'" + key + "' entries must be {\"abs\":, \"phase\":} objects");
        }
        AbsPhase ap{entry.at("abs").get<double>(),
                    entry.value("phase", 0.0)};
        if (!std::isfinite(ap.abs) || !std::isfinite(ap.phase)) {
            throw ParseError("'" + key + "' contains NaN or Inf");
        }
        if (ap.abs < 0.0) throw ParseError("'" + key + "' magnitudes must be >= 0");
        out.push_back(ap);
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const std::filesystem::path &path, const std::string &content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw ParseError("short write to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

ParsedMolecule parse_molecule_file(const std::filesystem::path &path) {
    const json doc = load_json(path);
    if (!doc.is_object()) throw ParseError("molecule document must be a JSON object");

    static const char *known[] = {"name",    "omega_initial", "omega_final", "duschinsky",
                                  "delta_q", "beta",          "huang_rhys",  "squeezing"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        bool ok = false;
        for (const char *k : known) ok = ok || it.key() == k;
        if (!ok) throw ParseError("unknown molecule field '" + it.key() + "'");
    }

    ParsedMolecule molecule;
    VibronicProblem &problem = molecule.problem;
    problem.name = doc.value("name", "unnamed");
    if (!doc.contains("omega_initial") || !doc.contains("omega_final")) {
        throw ParseError("molecule requires omega_initial and omega_final");
    }
    problem.omega_initial = parse_vector(doc.at("omega_initial"), "omega_initial");
    problem.omega_final = parse_vector(doc.at("omega_final"), "omega_final");
    const Eigen::Index m = problem.omega_initial.size();

    if (doc.contains("duschinsky")) {
        problem.duschinsky = parse_matrix(doc.at("duschinsky"), "duschinsky");
    } else {
        problem.duschinsky = Eigen::MatrixXd::Identity(m, m);
    }

    const int conventions = static_cast<int>(doc.contains("delta_q")) +
                            static_cast<int>(doc.contains("beta")) +
                            static_cast<int>(doc.contains("huang_rhys"));
    if (conventions != 1) {
        throw ParseError("exactly one of delta_q, beta, huang_rhys must be given, found " +
                         std::to_string(conventions));
    }
    if (doc.contains("delta_q")) {
        problem.delta_q = parse_vector(doc.at("delta_q"), "delta_q");
    } else if (doc.contains("beta")) {
        const auto entries = parse_abs_phase_array(doc.at("beta"), "beta");
        Eigen::VectorXcd beta(static_cast<Eigen::Index>(entries.size()));
        for (std::size_t i = 0; i < entries.size(); ++i) {
            beta[static_cast<Eigen::Index>(i)] =
                std::polar(entries[i].abs, entries[i].phase);
        }
        problem.beta = beta;
    } else {
        const Eigen::VectorXd s = parse_vector(doc.at("huang_rhys"), "huang_rhys");
        if (s.size() > 0 && s.minCoeff() < 0.0) {
            throw ParseError("huang_rhys factors must be >= 0");
        }
        problem.beta = s.cwiseSqrt().cast<std::complex<double>>();
    }

    if (doc.contains("squeezing")) {
        const auto entries = parse_abs_phase_array(doc.at("squeezing"), "squeezing");
        if (static_cast<Eigen::Index>(entries.size()) != m) {
            throw ParseError("squeezing override length does not match mode count");
        }
        std::vector<SqueezeOverride> overrides;
        overrides.reserve(entries.size());
        for (const auto &e : entries) overrides.push_back({e.abs, e.phase});
        molecule.squeezing = std::move(overrides);
    }

    try {
        problem.validate();
    } catch (const ValidationError &e) {
        throw ParseError("molecule '" + path.string() + "' invalid: " + e.what());
    }
    return molecule;
}

VibronicProblem parse_molecule(const std::filesystem::path &path) {
    return parse_molecule_file(path).problem;
}

std::string molecule_to_json(const ParsedMolecule &molecule) {
    const VibronicProblem &p = molecule.problem;
    json doc;
    doc["name"] = p.name;
    doc["omega_initial"] = std::vector<double>(
        p.omega_initial.data(), p.omega_initial.data() + p.omega_initial.size());
    doc["omega_final"] = std::vector<double>(p.omega_final.data(),
                                             p.omega_final.data() + p.omega_final.size());
    json dusch = json::array();
    for (Eigen::Index r = 0; r < p.duschinsky.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < p.duschinsky.cols(); ++c) row.push_back(p.duschinsky(r, c));
        dusch.push_back(row);
    }
    doc["duschinsky"] = dusch;
    if (p.delta_q) {
        doc["delta_q"] =
            std::vector<double>(p.delta_q->data(), p.delta_q->data() + p.delta_q->size());
    } else {
        json beta = json::array();
        for (Eigen::Index i = 0; i < p.beta->size(); ++i) {
            beta.push_back({{"abs", std::abs((*p.beta)[i])},
                            {"phase", std::abs((*p.beta)[i]) > 0.0 ? std::arg((*p.beta)[i])
                                                                   : 0.0}});
        }
        doc["beta"] = beta;
    }
    if (molecule.squeezing) {
        json sq = json::array();
        for (const auto &s : *molecule.squeezing) {
            sq.push_back({{"abs", s.abs}, {"phase", s.phase}});
        }
        doc["squeezing"] = sq;
    }
    return doc.dump(2) + "\n";
}

std::string decomposition_to_json(const DoktorovDecomposition &decomp,
                                  const std::string &name) {
    json doc;
    doc["name"] = name;
    auto matrix_rows = [](const Eigen::MatrixXcd &mat) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < mat.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < mat.cols(); ++c) row.push_back(mat(r, c).real());
            rows.push_back(row);
        }
        return rows;
    };
    doc["u_left"] = matrix_rows(decomp.u_left);
    doc["u_right"] = matrix_rows(decomp.u_right);
    json modes = json::array();
    for (Eigen::Index i = 0; i < decomp.mode_count(); ++i) {
        const auto &mode = decomp.modes[static_cast<std::size_t>(i)];
        modes.push_back({{"omega_final", mode.omega_final_i},
                         {"sigma", decomp.sigma[i]},
                         {"r_abs", mode.r_abs},
                         {"r_phase", mode.r_phase},
                         {"beta_abs", mode.beta_abs},
                         {"beta_phase", mode.beta_phase},
                         {"huang_rhys", mode.huang_rhys()},
                         {"reorganization_energy", mode.reorganization_energy()}});
    }
    doc["modes"] = modes;
    return doc.dump(2) + "\n";
}

void write_spectrum_file(const std::filesystem::path &path, const Spectrum &spectrum,
                         const std::map<std::string, std::string> &metadata) {
    spectrum.validate();
    std::ostringstream out;
    out << "# vibronic spectrum\n";
    for (const auto &[key, value] : metadata) {
        out << "# " << key << ": " << value << "\n";
    }
    out << "# tolerance: " << format_double(spectrum.bin_tolerance) << "\n";
    out << "# total_mass: " << format_double(spectrum.total_mass) << "\n";
    if (spectrum.dropped_mass != 0.0) {
        out << "# dropped_mass: " << format_double(spectrum.dropped_mass) << "\n";
    }
    out << "# columns: energy_cm1 probability" << (spectrum.has_std_error ? " std_error" : "")
        << "\n";
    for (const auto &bin : spectrum.bins) {
        out << format_double(bin.energy) << " " << format_double(bin.probability);
        if (spectrum.has_std_error) out << " " << format_double(bin.std_error);
        out << "\n";
    }
    atomic_write(path, out.str());
}

SpectrumFile read_spectrum_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    SpectrumFile file;
    bool saw_tolerance = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string key = line.substr(1, colon - 1);
            std::string value = line.substr(colon + 1);
            const auto trim = [](std::string &s) {
                const auto b = s.find_first_not_of(" \t");
                const auto e = s.find_last_not_of(" \t\r");
                s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
            };
            trim(key);
            trim(value);
            file.metadata[key] = value;
            if (key == "tolerance") {
                file.spectrum.bin_tolerance = std::stod(value);
                saw_tolerance = true;
            } else if (key == "dropped_mass") {
                file.spectrum.dropped_mass = std::stod(value);
            }
            continue;
        }
        std::istringstream row(line);
        SpectrumBin bin;
        if (!(row >> bin.energy >> bin.probability)) {
            throw ParseError("malformed spectrum row '" + line + "'");
        }
        if (row >> bin.std_error) file.spectrum.has_std_error = true;
        file.spectrum.bins.push_back(bin);
    }
    if (!saw_tolerance) {
        throw ParseError("spectrum file '" + path.string() + "' lacks a tolerance header");
    }
    double mass = 0.0;
    for (const auto &bin : file.spectrum.bins) mass += bin.probability;
    file.spectrum.total_mass = mass;
    if (file.metadata.count("total_mass")) {
        file.spectrum.total_mass = std::stod(file.metadata.at("total_mass"));
    }
    file.spectrum.validate();
    return file;
}

void write_sample_file(const std::filesystem::path &path, const SampleSet &samples,
                       const std::map<std::string, std::string> &metadata) {
    samples.validate();
    json doc;
    doc["n_shots"] = samples.n_shots;
    doc["mode_frequencies"] = std::vector<double>(
        samples.mode_frequencies.data(),
        samples.mode_frequencies.data() + samples.mode_frequencies.size());
    json counts = json::array();
    for (const auto &[pattern, n] : samples.counts) {
        counts.push_back({{"pattern", pattern.counts}, {"count", n}});
    }
    doc["counts"] = counts;
    for (const auto &[key, value] : metadata) doc["meta"][key] = value;
    atomic_write(path, doc.dump(2) + "\n");
}

SampleSet read_sample_file(const std::filesystem::path &path) {
    const json doc = load_json(path);
    SampleSet samples;
    try {
        samples.n_shots = doc.at("n_shots").get<std::uint64_t>();
        const auto freqs = doc.at("mode_frequencies").get<std::vector<double>>();
        samples.mode_frequencies =
            Eigen::Map<const Eigen::VectorXd>(freqs.data(), static_cast<Eigen::Index>(freqs.size()));
        for (const auto &entry : doc.at("counts")) {
            samples.counts[PhotonPattern(entry.at("pattern").get<std::vector<int>>())] =
                entry.at("count").get<std::uint64_t>();
        }
    } catch (const json::exception &e) {
        throw ParseError("invalid sample file '" + path.string() + "': " + e.what());
    }
    samples.validate();
    return samples;
}

}  // namespace vibronic
