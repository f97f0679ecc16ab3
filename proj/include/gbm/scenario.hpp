#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gbm/errors.hpp"
#include "gbm/mesh.hpp"
#include "gbm/model.hpp"
#include "gbm/solver.hpp"
#include "gbm/state.hpp"

namespace gbm {

struct MeshSpec {
    Rect bounds{};
    std::size_t n_sub = 45;
    Diagonal diagonal = Diagonal::SouthWestNorthEast;

    friend bool operator==(const MeshSpec&, const MeshSpec&) = default;
};

/// Truncated Gaussian seed: peak * exp(-r^2 / (2 (radius/3)^2)) for r <= radius.
struct TumorBump {
    Point2 center{0.0, 0.0};
    double radius = 3.0;
    double peak = 0.5;

    friend bool operator==(const TumorBump&, const TumorBump&) = default;
};

struct ZoneSpec {
    Point2 center{};
    double radius = 1.0;
    double level = 0.0;

    friend bool operator==(const ZoneSpec&, const ZoneSpec&) = default;
};

struct UniformVasculature {
    double level = 0.5;

    friend bool operator==(const UniformVasculature&, const UniformVasculature&) = default;
};

struct ZonedVasculature {
    double base_level = 0.1;
    std::vector<ZoneSpec> zones;

    friend bool operator==(const ZonedVasculature&, const ZonedVasculature&) = default;
};

using VasculatureIc = std::variant<UniformVasculature, ZonedVasculature>;

enum class ScenarioKind { RingWidth, SurfaceRegularity, Custom };

struct Scenario {
    ScenarioKind kind = ScenarioKind::RingWidth;
    MeshSpec mesh{};
    DimensionlessParameters params{};
    TumorBump tumor_ic{};
    VasculatureIc vasculature_ic = UniformVasculature{};
    double necrosis_ic = 0.0;
    SolverConfig solver{};
    double threshold = kDefaultThreshold;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Names accepted by sweeps and overrides.
inline constexpr std::string_view kParameterNames[] = {"kappa1", "alpha", "beta1", "beta2", "gamma", "delta"};

inline double& parameter_ref(DimensionlessParameters& p, std::string_view name) {
    if (name == "kappa1") return p.kappa1;
    if (name == "alpha") return p.alpha;
    if (name == "beta1") return p.beta1;
    if (name == "beta2") return p.beta2;
    if (name == "gamma") return p.gamma;
    if (name == "delta") return p.delta;
    throw InvalidParameter("unknown parameter name '" + std::string(name) + "'");
}

inline double parameter_value(DimensionlessParameters p, std::string_view name) { return parameter_ref(p, name); }

/// Optional replacement for each of the six rates.
struct ParameterOverrides {
    std::optional<double> kappa1, alpha, beta1, beta2, gamma, delta;

    ParameterOverrides& set(std::string_view name, double value) {
        if (name == "kappa1") kappa1 = value;
        else if (name == "alpha") alpha = value;
        else if (name == "beta1") beta1 = value;
        else if (name == "beta2") beta2 = value;
        else if (name == "gamma") gamma = value;
        else if (name == "delta") delta = value;
        else throw InvalidParameter("unknown parameter name '" + std::string(name) + "'");
        return *this;
    }

    DimensionlessParameters apply(DimensionlessParameters p) const {
        if (kappa1) p.kappa1 = *kappa1;
        if (alpha) p.alpha = *alpha;
        if (beta1) p.beta1 = *beta1;
        if (beta2) p.beta2 = *beta2;
        if (gamma) p.gamma = *gamma;
        if (delta) p.delta = *delta;
        validate(p);
        return p;
    }
};

/// Fixed and default values of the ring-width and surface-regularity studies.
inline constexpr DimensionlessParameters kDefaultRates{
    .kappa1 = 55.0, .alpha = 45.0, .beta1 = 27.5, .beta2 = 2.55, .gamma = 0.255, .delta = 2.55};

struct ParameterRange {
    std::string_view name;
    double min;
    double fixed;
    double max;
};

/// Sweep ranges; the first three apply to both studies, the last three to surface regularity only.
inline constexpr ParameterRange kParameterRanges[] = {
    {"kappa1", 10.0, 55.0, 100.0}, {"alpha", 10.0, 45.0, 100.0}, {"beta1", 5.0, 27.5, 50.0},
    {"beta2", 0.1, 2.55, 5.0},     {"gamma", 0.01, 0.255, 0.5},  {"delta", 0.1, 2.55, 5.0},
};

inline const ParameterRange& parameter_range(std::string_view name) {
    for (const auto& r : kParameterRanges)
        if (r.name == name) return r;
    throw InvalidParameter("unknown parameter name '" + std::string(name) + "'");
}

/// {min, fixed, max} of a parameter's range.
inline std::vector<double> default_sweep_values(std::string_view name) {
    const auto& r = parameter_range(name);
    return {r.min, r.fixed, r.max};
}

inline std::vector<ZoneSpec> default_zones() {
    return {{{-4.5, 0.0}, 3.0, 0.8}, {{4.5, 3.0}, 3.0, 0.5}, {{2.0, -4.5}, 3.0, 0.2}};
}

inline Scenario scenario_ring_width(const ParameterOverrides& overrides = {}) {
    Scenario s;
    s.kind = ScenarioKind::RingWidth;
    s.params = overrides.apply(kDefaultRates);
    s.vasculature_ic = UniformVasculature{0.5};
    return s;
}

inline Scenario scenario_surface_regularity(const ParameterOverrides& overrides = {}) {
    Scenario s = scenario_ring_width(overrides);
    s.kind = ScenarioKind::SurfaceRegularity;
    s.vasculature_ic = ZonedVasculature{0.1, default_zones()};
    return s;
}

inline std::vector<double> ic_tumor_bump(const StructuredTriMesh& mesh, Point2 center, double radius, double peak) {
    if (!(peak > 0.0 && peak <= 1.0)) throw InvalidParameter("tumor peak must lie in (0, 1]");
    if (!(radius > 0.0)) throw InvalidParameter("tumor radius must be positive");
    if (!mesh.bounds().contains(center)) throw InvalidParameter("tumor center lies outside the domain");
    const double sigma = radius / 3.0;
    std::vector<double> field(mesh.vertex_count(), 0.0);
    const auto verts = mesh.vertices();
    for (std::size_t v = 0; v < verts.size(); ++v) {
        const double dx = verts[v].x - center.x, dy = verts[v].y - center.y;
        const double r2 = dx * dx + dy * dy;
        if (r2 <= radius * radius) field[v] = peak * std::exp(-r2 / (2.0 * sigma * sigma));
    }
    return field;
}

inline std::vector<double> ic_vasculature_uniform(const StructuredTriMesh& mesh, double level) {
    if (!(level >= 0.0 && level <= 1.0)) throw InvalidParameter("vasculature level must lie in [0, 1]");
    return std::vector<double>(mesh.vertex_count(), level);
}

/// Base level everywhere, overwritten inside each disc; later zones win on overlap.
inline std::vector<double> ic_vasculature_zones(const StructuredTriMesh& mesh, double base_level,
                                                std::span<const ZoneSpec> zones) {
    auto field = ic_vasculature_uniform(mesh, base_level);
    const auto verts = mesh.vertices();
    for (const auto& z : zones) {
        if (!(z.radius > 0.0)) throw InvalidParameter("zone radius must be positive");
        if (!(z.level >= 0.0 && z.level <= 1.0)) throw InvalidParameter("zone level must lie in [0, 1]");
        for (std::size_t v = 0; v < verts.size(); ++v) {
            const double dx = verts[v].x - z.center.x, dy = verts[v].y - z.center.y;
            if (dx * dx + dy * dy <= z.radius * z.radius) field[v] = z.level;
        }
    }
    return field;
}

inline StructuredTriMesh build_mesh(const MeshSpec& spec) { return build_mesh(spec.bounds, spec.n_sub, spec.diagonal); }

inline SimulationState initial_state(const Scenario& sc, const StructuredTriMesh& mesh) {
    if (!(sc.necrosis_ic >= 0.0 && sc.necrosis_ic <= 1.0)) throw InvalidParameter("necrosis level must lie in [0, 1]");
    SimulationState s(mesh.vertex_count());
    s.t_field = ic_tumor_bump(mesh, sc.tumor_ic.center, sc.tumor_ic.radius, sc.tumor_ic.peak);
    s.n_field.assign(mesh.vertex_count(), sc.necrosis_ic);
    s.phi_field = std::visit(
        [&](const auto& ic) {
            using Ic = std::decay_t<decltype(ic)>;
            if constexpr (std::is_same_v<Ic, UniformVasculature>)
                return ic_vasculature_uniform(mesh, ic.level);
            else
                return ic_vasculature_zones(mesh, ic.base_level, ic.zones);
        },
        sc.vasculature_ic);
    return s;
}

} // namespace gbm
