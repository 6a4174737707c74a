#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccbif/bifurcation.hpp"
#include "ccbif/families.hpp"
#include "ccbif/spectral.hpp"
#include "ccbif/types.hpp"

namespace ccbif {

using nlohmann::json;

/// Shortest exact decimal form of a double; reparses to the same bits.
inline std::string fmt_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline json config_to_json(const Configuration& q, const MassVector& m) {
    json positions = json::array();
    for (int i = 0; i < q.n_bodies(); ++i)
        positions.push_back({q.body(i)[0], q.body(i)[1]});
    json masses = json::array();
    for (int i = 0; i < m.size(); ++i) masses.push_back(m[i]);
    return {{"positions", positions}, {"masses", masses}};
}

inline std::pair<Configuration, MassVector> config_from_json(const json& j) {
    if (!j.contains("positions") || !j.contains("masses"))
        throw ParseError("configuration JSON needs 'positions' and 'masses'");
    const auto& positions = j.at("positions");
    const auto& masses = j.at("masses");
    if (!positions.is_array() || !masses.is_array() || positions.size() != masses.size() ||
        positions.empty())
        throw ParseError("positions and masses must be equal-length nonempty arrays");
    Eigen::VectorXd flat(2 * positions.size());
    Eigen::VectorXd mass(masses.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const auto& p = positions[i];
        if (!p.is_array() || p.size() != 2) throw ParseError("each position must be [x, y]");
        flat[2 * i] = p[0].get<double>();
        flat[2 * i + 1] = p[1].get<double>();
        mass[i] = masses[i].get<double>();
        if (!(mass[i] > 0.0)) throw ParseError("masses must be positive");
    }
    return {Configuration(std::move(flat)), MassVector(std::move(mass))};
}

/// Flat CSV configuration: one row x1,y1,...,xN,yN and an optional second
/// row of masses (defaulting to one).
inline std::pair<Configuration, MassVector> config_from_csv_text(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(detail::parse_csv_numbers(line, lineno));
    }
    if (rows.empty() || rows.size() > 2) throw ParseError("expected one or two CSV rows");
    if (rows[0].size() % 2 != 0 || rows[0].size() < 4)
        throw ParseError("coordinate row must hold 2N values, N >= 2");
    const std::size_t n = rows[0].size() / 2;
    Eigen::VectorXd flat(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) flat[i] = rows[0][i];
    Eigen::VectorXd mass = Eigen::VectorXd::Ones(n);
    if (rows.size() == 2) {
        if (rows[1].size() != n) throw ParseError("mass row must hold N values");
        for (std::size_t i = 0; i < n; ++i) mass[i] = rows[1][i];
    }
    return {Configuration(std::move(flat)), MassVector(std::move(mass))};
}

inline json spectral_report_to_json(const SpectralReport& report) {
    return {{"eigenvalues", report.eigenvalues},
            {"kernel_dim", report.kernel_dim},
            {"morse_index", report.morse_index},
            {"nonzero_product", report.nonzero_product},
            {"zero_tolerance_used", report.zero_tolerance_used}};
}

inline json euler_ring_to_json(const EulerRingElement& element) {
    json j = json::object();
    for (const auto& [label, coefficient] : element.coefficients()) j[label] = coefficient;
    return j;
}

inline json event_to_json(const BifurcationEvent& event) {
    json j = {{"bracket", {event.bracket_lo, event.bracket_hi}},
              {"left_morse", event.left_morse},
              {"right_morse", event.right_morse},
              {"kernel_jump", event.kernel_jump},
              {"classification", to_string(event.classification)},
              {"bif_index", euler_ring_to_json(event.bif_index)}};
    if (event.merged) j["merged"] = true;
    return j;
}

inline json scan_events_to_json(const ScanResult& result, const json& run_config) {
    json events = json::array();
    for (const auto& e : result.events) events.push_back(event_to_json(e));
    return {{"config", run_config},
            {"events", events},
            {"warnings", result.warnings},
            {"grid_too_coarse", result.grid_too_coarse},
            {"index_sum", euler_ring_to_json(index_sum(result.events))}};
}

/// Grid dump rows: parameter, coordinates, masses, then the spectral
/// columns. The leading 1+3N columns round-trip through load_family_csv.
inline std::string scan_grid_to_csv(const ScanResult& result, const json& run_config) {
    std::string out = "# config: " + run_config.dump() + "\n";
    out += "# columns: parameter, x1,y1..xN,yN, m1..mN, kernel_dim, morse_index, det_B, "
           "min_abs_eig\n";
    for (const auto& sample : result.grid) {
        out += fmt_g17(sample.point.parameter[0]);
        const Eigen::VectorXd& flat = sample.point.configuration.flat();
        for (Eigen::Index i = 0; i < flat.size(); ++i) out += "," + fmt_g17(flat[i]);
        for (int i = 0; i < sample.point.masses.size(); ++i)
            out += "," + fmt_g17(sample.point.masses[i]);
        out += "," + std::to_string(sample.kernel_dim);
        out += "," + std::to_string(sample.morse_b);
        out += "," + fmt_g17(sample.det_b);
        out += "," + fmt_g17(sample.min_abs_eig);
        out += "\n";
    }
    return out;
}

/// Per-cell CSV: m0, m1, morse_index, kernel_flag, det_B. Excluded cells
/// keep morse_index -1 and det_B nan.
inline std::string map_cells_to_csv(const RegionMap& map, const json& run_config) {
    std::string out = "# config: " + run_config.dump() + "\n";
    out += "# columns: m0, m1, morse_index, kernel_flag, det_B\n";
    for (const auto& cell : map.cells) {
        out += fmt_g17(cell.m0) + "," + fmt_g17(cell.m1) + "," +
               std::to_string(cell.morse_index) + "," + (cell.kernel_flag ? "1" : "0") + "," +
               (cell.excluded ? "nan" : fmt_g17(cell.det_b)) + "\n";
    }
    return out;
}

inline json map_regions_to_json(const RegionMap& map, const json& run_config) {
    json regions = json::array();
    std::vector<int> index_set;
    for (const auto& region : map.regions) {
        regions.push_back({{"id", region.id},
                           {"morse_index", region.morse_index},
                           {"cell_count", region.cell_count},
                           {"sample", {region.sample_m0, region.sample_m1}}});
        if (std::find(index_set.begin(), index_set.end(), region.morse_index) == index_set.end())
            index_set.push_back(region.morse_index);
    }
    std::sort(index_set.begin(), index_set.end());
    json boundaries = json::array();
    for (const auto& boundary : map.boundaries)
        boundaries.push_back({{"morse_pair", {boundary.morse_low, boundary.morse_high}},
                              {"edge_count", boundary.edge_count},
                              {"parity_flip", boundary.parity_flip},
                              {"global", boundary.global_flag}});
    int excluded = 0, degenerate = 0;
    for (const auto& cell : map.cells) {
        excluded += cell.excluded;
        degenerate += cell.kernel_flag;
    }
    return {{"config", run_config},
            {"grid", {{"nx", map.nx}, {"ny", map.ny},
                      {"m0_range", {map.lo0, map.hi0}},
                      {"m1_range", {map.lo1, map.hi1}}}},
            {"morse_index_set", index_set},
            {"regions", regions},
            {"boundaries", boundaries},
            {"excluded_cells", excluded},
            {"degenerate_cells", degenerate}};
}

} // namespace ccbif
