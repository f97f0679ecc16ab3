#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gbm/errors.hpp"
#include "gbm/io.hpp"
#include "gbm/scenario.hpp"

namespace gbm {

/// Fully resolved run configuration.
struct RunConfig {
    Scenario scenario = scenario_ring_width();
    std::string output_dir = "out";
    bool write_snapshots = false;
    bool write_vtk = false;
    FieldTriple homogeneous_initial{0.1, 0.1, 0.5};
};

// Sectioned key=value format:
//
//   # comment
//   [mesh]    xmin xmax ymin ymax n_sub diagonal (sw-ne | se-nw)
//   [params]  kappa1 alpha beta1 beta2 gamma delta
//   [ic]      scenario (ring | surface | custom) tumor_x tumor_y tumor_radius tumor_peak necrosis
//             vasculature (uniform | zones) vasculature_level vasculature_base
//             zone = x, y, radius, level   (repeatable; replaces the default zones)
//             ode_t ode_n ode_phi          (initial state of the homogeneous mode)
//   [solver]  dt t_final cg_tolerance cg_max_iterations metrics_every snapshot_every
//   [output]  dir threshold snapshots vtk
//
// Omitted keys keep the defaults of the selected scenario. Unknown sections or keys,
// duplicates and out-of-range values are errors that name the offending line.
namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct ConfigEntry {
    std::string value;
    std::size_t line = 0;
};

inline const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> schema{
        {"mesh", {"xmin", "xmax", "ymin", "ymax", "n_sub", "diagonal"}},
        {"params", {"kappa1", "alpha", "beta1", "beta2", "gamma", "delta"}},
        {"ic",
         {"scenario", "tumor_x", "tumor_y", "tumor_radius", "tumor_peak", "necrosis", "vasculature",
          "vasculature_level", "vasculature_base", "zone", "ode_t", "ode_n", "ode_phi"}},
        {"solver", {"dt", "t_final", "cg_tolerance", "cg_max_iterations", "metrics_every", "snapshot_every"}},
        {"output", {"dir", "threshold", "snapshots", "vtk"}},
    };
    return schema;
}

class ConfigReader {
public:
    explicit ConfigReader(std::map<std::string, ConfigEntry> entries) : entries_(std::move(entries)) {}

    const ConfigEntry* find(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    std::optional<double> number(const std::string& key) const {
        const auto* e = find(key);
        if (!e) return std::nullopt;
        try {
            return parse_double(e->value);
        } catch (const InvalidParameter&) {
            throw ConfigError(e->line, "'" + key + "' expects a number, got '" + e->value + "'");
        }
    }

    std::optional<std::size_t> count(const std::string& key) const {
        const auto v = number(key);
        if (!v) return std::nullopt;
        if (!(*v >= 0.0) || *v != static_cast<double>(static_cast<std::size_t>(*v)))
            throw ConfigError(find(key)->line, "'" + key + "' expects a nonnegative integer");
        return static_cast<std::size_t>(*v);
    }

    std::optional<bool> flag(const std::string& key) const {
        const auto* e = find(key);
        if (!e) return std::nullopt;
        if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
        if (e->value == "false" || e->value == "0" || e->value == "no") return false;
        throw ConfigError(e->line, "'" + key + "' expects true or false");
    }

    /// Range check tied to the line the value came from.
    void require(const std::string& key, bool ok, const std::string& what) const {
        if (!ok) throw ConfigError(find(key) ? find(key)->line : 0, "'" + key + "' " + what);
    }

private:
    std::map<std::string, ConfigEntry> entries_;
};

inline std::vector<double> split_numbers(std::string_view text, std::size_t line) {
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        try {
            out.push_back(parse_double(item));
        } catch (const InvalidParameter&) {
            throw ConfigError(line, "expected a comma-separated list of numbers, got '" + std::string(text) + "'");
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace detail

inline RunConfig parse_config(std::string_view text) {
    using detail::trim;
    std::map<std::string, detail::ConfigEntry> entries;
    std::vector<std::pair<ZoneSpec, std::size_t>> zones;
    std::string section;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        const auto raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        auto line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!detail::config_schema().contains(section)) throw ConfigError(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (section.empty()) throw ConfigError(line_no, "key '" + key + "' appears before any section");
        if (!detail::config_schema().at(section).contains(key))
            throw ConfigError(line_no, "unknown key '" + key + "' in section [" + section + "]");
        if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");

        if (section == "ic" && key == "zone") {
            const auto nums = detail::split_numbers(value, line_no);
            if (nums.size() != 4) throw ConfigError(line_no, "zone expects x, y, radius, level");
            if (!(nums[2] > 0.0)) throw ConfigError(line_no, "zone radius must be positive");
            if (!(nums[3] >= 0.0 && nums[3] <= 1.0)) throw ConfigError(line_no, "zone level must lie in [0, 1]");
            zones.push_back({ZoneSpec{{nums[0], nums[1]}, nums[2], nums[3]}, line_no});
            continue;
        }
        const std::string full = section + "." + key;
        if (entries.contains(full)) throw ConfigError(line_no, "duplicate key '" + key + "' in section [" + section + "]");
        entries.emplace(full, detail::ConfigEntry{value, line_no});
    }

    const detail::ConfigReader cfg(std::move(entries));
    RunConfig rc;

    if (const auto* e = cfg.find("ic.scenario")) {
        if (e->value == "ring") {
            rc.scenario = scenario_ring_width();
        } else if (e->value == "surface") {
            rc.scenario = scenario_surface_regularity();
        } else if (e->value == "custom") {
            rc.scenario = scenario_ring_width();
            rc.scenario.kind = ScenarioKind::Custom;
        } else {
            throw ConfigError(e->line, "scenario must be ring, surface or custom");
        }
    }
    Scenario& sc = rc.scenario;

    // [mesh]
    if (auto v = cfg.number("mesh.xmin")) sc.mesh.bounds.xmin = *v;
    if (auto v = cfg.number("mesh.xmax")) sc.mesh.bounds.xmax = *v;
    if (auto v = cfg.number("mesh.ymin")) sc.mesh.bounds.ymin = *v;
    if (auto v = cfg.number("mesh.ymax")) sc.mesh.bounds.ymax = *v;
    if (!(sc.mesh.bounds.xmax > sc.mesh.bounds.xmin) || !(sc.mesh.bounds.ymax > sc.mesh.bounds.ymin))
        throw ConfigError(cfg.find("mesh.xmax") ? cfg.find("mesh.xmax")->line : 0, "mesh bounds are inverted");
    if (auto v = cfg.count("mesh.n_sub")) {
        cfg.require("mesh.n_sub", *v >= 1, "must be at least 1");
        sc.mesh.n_sub = *v;
    }
    if (const auto* e = cfg.find("mesh.diagonal")) {
        if (e->value == "sw-ne") sc.mesh.diagonal = Diagonal::SouthWestNorthEast;
        else if (e->value == "se-nw") sc.mesh.diagonal = Diagonal::SouthEastNorthWest;
        else throw ConfigError(e->line, "diagonal must be sw-ne or se-nw");
    }

    // [params]
    for (auto name : kParameterNames) {
        const std::string key = "params." + std::string(name);
        if (auto v = cfg.number(key)) {
            cfg.require(key, *v >= 0.0, "must be nonnegative");
            parameter_ref(sc.params, name) = *v;
        }
    }

    // [ic]
    if (auto v = cfg.number("ic.tumor_x")) sc.tumor_ic.center.x = *v;
    if (auto v = cfg.number("ic.tumor_y")) sc.tumor_ic.center.y = *v;
    cfg.require("ic.tumor_x", sc.mesh.bounds.contains(sc.tumor_ic.center), "places the tumor outside the domain");
    cfg.require("ic.tumor_y", sc.mesh.bounds.contains(sc.tumor_ic.center), "places the tumor outside the domain");
    if (auto v = cfg.number("ic.tumor_radius")) {
        cfg.require("ic.tumor_radius", *v > 0.0, "must be positive");
        sc.tumor_ic.radius = *v;
    }
    if (auto v = cfg.number("ic.tumor_peak")) {
        cfg.require("ic.tumor_peak", *v > 0.0 && *v <= 1.0, "must lie in (0, 1]");
        sc.tumor_ic.peak = *v;
    }
    if (auto v = cfg.number("ic.necrosis")) {
        cfg.require("ic.necrosis", *v >= 0.0 && *v <= 1.0, "must lie in [0, 1]");
        sc.necrosis_ic = *v;
    }
    if (const auto* e = cfg.find("ic.vasculature")) {
        if (e->value == "uniform") {
            if (!std::holds_alternative<UniformVasculature>(sc.vasculature_ic)) sc.vasculature_ic = UniformVasculature{};
        } else if (e->value == "zones") {
            if (!std::holds_alternative<ZonedVasculature>(sc.vasculature_ic))
                sc.vasculature_ic = ZonedVasculature{0.1, default_zones()};
        } else {
            throw ConfigError(e->line, "vasculature must be uniform or zones");
        }
    }
    if (!zones.empty() && !std::holds_alternative<ZonedVasculature>(sc.vasculature_ic)) {
        if (const auto* e = cfg.find("ic.vasculature"); e && e->value == "uniform")
            throw ConfigError(zones.front().second, "zone given for uniform vasculature");
        sc.vasculature_ic = ZonedVasculature{0.1, {}};
    }
    if (auto* uniform = std::get_if<UniformVasculature>(&sc.vasculature_ic)) {
        if (cfg.find("ic.vasculature_base")) throw ConfigError(cfg.find("ic.vasculature_base")->line, "vasculature_base needs zoned vasculature");
        if (auto v = cfg.number("ic.vasculature_level")) {
            cfg.require("ic.vasculature_level", *v >= 0.0 && *v <= 1.0, "must lie in [0, 1]");
            uniform->level = *v;
        }
    } else {
        auto& zoned = std::get<ZonedVasculature>(sc.vasculature_ic);
        if (cfg.find("ic.vasculature_level")) throw ConfigError(cfg.find("ic.vasculature_level")->line, "vasculature_level needs uniform vasculature");
        if (auto v = cfg.number("ic.vasculature_base")) {
            cfg.require("ic.vasculature_base", *v >= 0.0 && *v <= 1.0, "must lie in [0, 1]");
            zoned.base_level = *v;
        }
        if (!zones.empty()) {
            zoned.zones.clear();
            for (const auto& [z, line] : zones) {
                if (!sc.mesh.bounds.contains(z.center)) throw ConfigError(line, "zone center lies outside the domain");
                zoned.zones.push_back(z);
            }
        }
    }
    auto triple_value = [&](const char* key, double& slot) {
        if (auto v = cfg.number(key)) {
            cfg.require(key, *v >= 0.0 && *v <= 1.0, "must lie in [0, 1]");
            slot = *v;
        }
    };
    triple_value("ic.ode_t", rc.homogeneous_initial.t_density);
    triple_value("ic.ode_n", rc.homogeneous_initial.n_density);
    triple_value("ic.ode_phi", rc.homogeneous_initial.phi_density);

    // [solver]
    if (auto v = cfg.number("solver.dt")) {
        cfg.require("solver.dt", *v > 0.0, "must be positive");
        sc.solver.dt = *v;
    }
    if (auto v = cfg.number("solver.t_final")) {
        cfg.require("solver.t_final", *v >= 0.0, "must be nonnegative");
        sc.solver.t_final = *v;
    }
    if (auto v = cfg.number("solver.cg_tolerance")) {
        cfg.require("solver.cg_tolerance", *v > 0.0 && *v < 1.0, "must lie in (0, 1)");
        sc.solver.cg_tolerance = *v;
    }
    if (auto v = cfg.count("solver.cg_max_iterations")) {
        cfg.require("solver.cg_max_iterations", *v >= 1, "must be at least 1");
        sc.solver.cg_max_iterations = *v;
    }
    if (auto v = cfg.count("solver.metrics_every")) {
        cfg.require("solver.metrics_every", *v >= 1, "must be at least 1");
        sc.solver.metrics_every = *v;
    }
    if (auto v = cfg.count("solver.snapshot_every")) {
        cfg.require("solver.snapshot_every", *v >= 1, "must be at least 1");
        sc.solver.snapshot_every = *v;
    }

    // [output]
    if (const auto* e = cfg.find("output.dir")) rc.output_dir = e->value;
    if (auto v = cfg.number("output.threshold")) {
        cfg.require("output.threshold", *v > 0.0, "must be positive");
        sc.threshold = *v;
    }
    if (auto v = cfg.flag("output.snapshots")) rc.write_snapshots = *v;
    if (auto v = cfg.flag("output.vtk")) rc.write_vtk = *v;
    return rc;
}

} // namespace gbm
