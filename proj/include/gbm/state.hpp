#pragma once

#include <cstddef>
#include <vector>

#include "gbm/errors.hpp"
#include "gbm/mesh.hpp"

namespace gbm {

/// Per-vertex T, N, Phi at one instant.
struct SimulationState {
    double time = 0.0;
    std::vector<double> t_field;
    std::vector<double> n_field;
    std::vector<double> phi_field;

    SimulationState() = default;
    explicit SimulationState(std::size_t vertex_count, double t0 = 0.0)
        : time(t0), t_field(vertex_count, 0.0), n_field(vertex_count, 0.0), phi_field(vertex_count, 0.0) {}

    std::size_t size() const noexcept { return t_field.size(); }

    friend bool operator==(const SimulationState&, const SimulationState&) = default;
};

inline void check_sizes(const SimulationState& s, const StructuredTriMesh& mesh) {
    const std::size_t n = mesh.vertex_count();
    if (s.t_field.size() != n || s.n_field.size() != n || s.phi_field.size() != n)
        throw SizeMismatch("state field length does not match mesh vertex count");
}

} // namespace gbm
