#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "gbm/enclosing_circle.hpp"
#include "gbm/errors.hpp"
#include "gbm/mesh.hpp"
#include "gbm/state.hpp"

namespace gbm {

/// Default detection level for the total-tumor indicator.
inline constexpr double kDefaultThreshold = 0.001;

struct MetricsSample {
    double time = 0.0;
    double rq = 1.0;
    double sq = std::numeric_limits<double>::quiet_NaN(); ///< NaN when the thresholded region is empty
    double area = 0.0;
    double r_max = std::numeric_limits<double>::quiet_NaN();
    double tumor_density = 0.0;    ///< int T
    double total_tn_density = 0.0; ///< int (T + N)
    double phi_density = 0.0;      ///< int Phi
};

struct ThresholdedRegion {
    std::vector<std::size_t> vertices;
    std::vector<Point2> coordinates;

    bool empty() const noexcept { return vertices.empty(); }
    std::size_t size() const noexcept { return vertices.size(); }
};

enum class DensitySelector { Tumor, TumorPlusNecrosis, Vasculature };

inline double total_density(const SimulationState& s, const StructuredTriMesh& mesh, DensitySelector which) {
    check_sizes(s, mesh);
    const auto w = mesh.lumped_weights();
    CompensatedSum sum;
    for (std::size_t v = 0; v < w.size(); ++v) {
        double value = 0.0;
        switch (which) {
        case DensitySelector::Tumor: value = s.t_field[v]; break;
        case DensitySelector::TumorPlusNecrosis: value = s.t_field[v] + s.n_field[v]; break;
        case DensitySelector::Vasculature: value = s.phi_field[v]; break;
        }
        sum.add(w[v] * value);
    }
    return sum.value();
}

/// int T / int (T + N); a state with no tumor mass at all reports 1.
inline double ring_quotient(const SimulationState& s, const StructuredTriMesh& mesh) {
    const double total = total_density(s, mesh, DensitySelector::TumorPlusNecrosis);
    if (total < 1e-14) return 1.0;
    return total_density(s, mesh, DensitySelector::Tumor) / total;
}

/// Vertices with T + N >= theta.
inline ThresholdedRegion threshold_indicator(const SimulationState& s, const StructuredTriMesh& mesh,
                                             double theta = kDefaultThreshold) {
    check_sizes(s, mesh);
    ThresholdedRegion region;
    const auto verts = mesh.vertices();
    for (std::size_t v = 0; v < verts.size(); ++v) {
        if (s.t_field[v] + s.n_field[v] >= theta) {
            region.vertices.push_back(v);
            region.coordinates.push_back(verts[v]);
        }
    }
    return region;
}

inline double tumor_area(const ThresholdedRegion& region, const StructuredTriMesh& mesh) {
    const auto w = mesh.lumped_weights();
    CompensatedSum area;
    for (auto v : region.vertices) area.add(w[v]);
    return area.value();
}

/// Radius of the smallest circle containing every thresholded vertex.
inline double max_radius(const ThresholdedRegion& region) {
    if (region.empty()) throw EmptyRegion("max_radius of an empty region");
    return smallest_enclosing_circle(region.coordinates).radius;
}

namespace detail {
inline double surface_quotient_of(double area, double r_max, double cell_edge) {
    if (r_max < 0.5 * cell_edge) return 1.0;
    return area / (std::numbers::pi * r_max * r_max);
}
} // namespace detail

/// Thresholded area over the area of its smallest enclosing circle. Regions narrower than
/// half a cell report 1. Coarse meshes can push the value above 1.
inline double surface_quotient(const SimulationState& s, const StructuredTriMesh& mesh,
                               double theta = kDefaultThreshold) {
    const auto region = threshold_indicator(s, mesh, theta);
    if (region.empty()) throw EmptyRegion("surface quotient of an empty thresholded region");
    return detail::surface_quotient_of(tumor_area(region, mesh), max_radius(region), mesh.cell_edge());
}

inline MetricsSample compute_metrics(const SimulationState& s, const StructuredTriMesh& mesh,
                                     double theta = kDefaultThreshold) {
    MetricsSample m;
    m.time = s.time;
    m.tumor_density = total_density(s, mesh, DensitySelector::Tumor);
    m.total_tn_density = total_density(s, mesh, DensitySelector::TumorPlusNecrosis);
    m.phi_density = total_density(s, mesh, DensitySelector::Vasculature);
    m.rq = m.total_tn_density < 1e-14 ? 1.0 : m.tumor_density / m.total_tn_density;

    const auto region = threshold_indicator(s, mesh, theta);
    m.area = tumor_area(region, mesh);
    if (!region.empty()) {
        m.r_max = max_radius(region);
        m.sq = detail::surface_quotient_of(m.area, m.r_max, mesh.cell_edge());
    }
    return m;
}

} // namespace gbm
