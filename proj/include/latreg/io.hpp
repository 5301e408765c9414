#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "duren.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "spectral.hpp"

namespace latreg {

using Json = nlohmann::json;

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("ParseError", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("ParseError", "cannot write '" + path + "'");
    out << text;
}

inline Json parse_json(const std::string& text, const std::string& what) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) fail("ParseError", "invalid JSON in " + what);
    return j;
}

// ---- lattice ----------------------------------------------------------------

inline Json lattice_to_json(const Lattice& lat) {
    Json rows = Json::array();
    for (int r = 0; r < lat.dim; ++r) {
        Json row = Json::array();
        for (int c = 0; c < lat.dim; ++c) row.push_back(lat.gen(r, c));
        rows.push_back(std::move(row));
    }
    return Json{{"generator", std::move(rows)}};
}

inline Lattice lattice_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("generator") || !j["generator"].is_array())
        fail("ParseError", "lattice JSON needs a 'generator' array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& row : j["generator"]) {
        if (!row.is_array()) fail("ParseError", "generator rows must be arrays");
        rows.emplace_back();
        for (const auto& v : row) {
            if (!v.is_number()) fail("ParseError", "generator entries must be numbers");
            rows.back().push_back(v.get<double>());
        }
    }
    return make_lattice(rows);
}

// ---- spectral function ------------------------------------------------------

inline Json spectral_to_json(const SpectralFunction& spec) {
    Json j = lattice_to_json(spec.lattice);
    j["band"] = spec.band;
    Json coeffs = Json::array();
    for (const auto& c : spec.coeffs) {
        Json entry;
        entry["m"] = c.point.m;
        entry["re"] = c.value.real();
        entry["im"] = c.value.imag();
        coeffs.push_back(std::move(entry));
    }
    j["coefficients"] = std::move(coeffs);
    return j;
}

inline SpectralFunction spectral_from_json(const Json& j) {
    SpectralFunction spec;
    spec.lattice = lattice_from_json(j);
    if (!j.contains("band") || !j["band"].is_number())
        fail("ParseError", "spectral JSON needs a numeric 'band'");
    spec.band = j["band"].get<double>();
    if (!j.contains("coefficients") || !j["coefficients"].is_array())
        fail("ParseError", "spectral JSON needs a 'coefficients' array");
    for (const auto& entry : j["coefficients"]) {
        if (!entry.contains("m") || !entry["m"].is_array() || !entry.contains("re") ||
            !entry.contains("im"))
            fail("ParseError", "coefficient entries need 'm', 're', 'im'");
        std::vector<int> m = entry["m"].get<std::vector<int>>();
        if (static_cast<int>(m.size()) != spec.lattice.dim)
            fail("ParseError", "coefficient index dimension mismatch");
        Coefficient c;
        c.point = make_dual_point(spec.lattice, std::move(m));
        c.value = {entry["re"].get<double>(), entry["im"].get<double>()};
        if (c.point.norm > spec.band * (1.0 + 1e-9))
            fail("ParseError", "coefficient lies outside the declared band");
        spec.coeffs.push_back(std::move(c));
    }
    std::sort(spec.coeffs.begin(), spec.coeffs.end(),
              [](const Coefficient& a, const Coefficient& b) { return a.point.m < b.point.m; });
    return spec;
}

// ---- grid sample ------------------------------------------------------------

inline Json grid_to_json(const GridSample& sample) {
    Json j = lattice_to_json(sample.lattice);
    j["resolution"] = sample.resolution;
    Json values = Json::array();
    for (const auto& v : sample.values) values.push_back(Json::array({v.real(), v.imag()}));
    j["values"] = std::move(values);
    return j;
}

inline GridSample grid_from_json(const Json& j) {
    GridSample sample;
    sample.lattice = lattice_from_json(j);
    if (!j.contains("resolution") || !j["resolution"].is_array())
        fail("ParseError", "grid JSON needs a 'resolution' array");
    sample.resolution = j["resolution"].get<std::vector<int>>();
    if (static_cast<int>(sample.resolution.size()) != sample.lattice.dim)
        fail("ParseError", "resolution dimension mismatch");
    if (!j.contains("values") || !j["values"].is_array())
        fail("ParseError", "grid JSON needs a 'values' array");
    for (const auto& v : j["values"]) {
        if (!v.is_array() || v.size() != 2)
            fail("ParseError", "grid values must be [re, im] pairs");
        sample.values.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    if (sample.values.size() != sample.size())
        fail("ParseError", "grid value count does not match the resolution");
    return sample;
}

// ---- weighted sequences and profiles (CSV) ----------------------------------

inline std::string sequence_to_csv(const WeightedSequence& seq) {
    std::ostringstream out;
    out << "index,weight\n";
    for (const auto& e : seq.support)
        out << format_double(e.index) << ',' << format_double(e.weight) << '\n';
    return out.str();
}

inline WeightedSequence sequence_from_csv(const std::string& text, std::string description = {}) {
    std::vector<WeightedEntry> entries;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b)) {
            fail("ParseError", "sequence CSV line " + std::to_string(lineno) +
                                   " is not 'index,weight'");
        }
        try {
            entries.push_back({std::stod(a), std::stod(b)});
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header row
            fail("ParseError", "sequence CSV line " + std::to_string(lineno) +
                                   " has non-numeric fields");
        }
    }
    require(!entries.empty(), "ParseError", "sequence CSV has no data rows");
    return make_weighted_sequence(std::move(entries), std::move(description));
}

inline std::string profile_to_csv(const DecayProfile& p) {
    std::ostringstream out;
    out << "N,tail,weighted_partial\n";
    for (std::size_t i = 0; i < p.radii.size(); ++i)
        out << format_double(p.radii[i]) << ',' << format_double(p.tails[i]) << ','
            << format_double(p.weighted_partials[i]) << '\n';
    return out.str();
}

inline Json profile_sidecar_json(const DecayProfile& p) {
    return Json{{"weight_exponent", p.weight_exponent},
                {"fitted_tail_exponent", p.fitted_tail_exponent},
                {"fitted_partial_exponent", p.fitted_partial_exponent},
                {"residual", p.residual}};
}

inline std::string decay_curve_csv(const std::vector<double>& radii,
                                   const std::vector<double>& tails) {
    std::ostringstream out;
    out << "N,tail\n";
    for (std::size_t i = 0; i < radii.size(); ++i)
        out << format_double(radii[i]) << ',' << format_double(tails[i]) << '\n';
    return out.str();
}

// ---- corpus descriptors -----------------------------------------------------

inline Json descriptor_to_json(const FamilyDescriptor& desc) {
    Json j{{"family", to_string(desc.family)},
           {"dim", desc.dim},
           {"band", desc.band},
           {"seed", desc.seed},
           {"zero_phase", desc.zero_phase}};
    if (desc.family == Family::TensorProduct)
        j["alphas"] = desc.alphas;
    else
        j["alpha"] = desc.alpha;
    return j;
}

inline FamilyDescriptor descriptor_from_json(const Json& j) {
    FamilyDescriptor desc;
    if (!j.contains("family") || !j["family"].is_string())
        fail("ParseError", "descriptor needs a 'family' string");
    desc.family = family_from_string(j["family"].get<std::string>());
    if (j.contains("dim")) desc.dim = j["dim"].get<int>();
    if (j.contains("band")) desc.band = j["band"].get<double>();
    if (j.contains("seed")) desc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("zero_phase")) desc.zero_phase = j["zero_phase"].get<bool>();
    if (j.contains("alpha")) desc.alpha = j["alpha"].get<double>();
    if (j.contains("alphas")) {
        desc.alphas = j["alphas"].get<std::vector<double>>();
        if (desc.family == Family::TensorProduct && desc.dim == 1)
            desc.dim = static_cast<int>(desc.alphas.size());
    }
    return desc;
}

} // namespace latreg
