#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gbm/cg.hpp"
#include "gbm/errors.hpp"
#include "gbm/mesh.hpp"
#include "gbm/metrics.hpp"
#include "gbm/model.hpp"
#include "gbm/state.hpp"

namespace gbm {

struct SolverConfig {
    double dt = 1e-3;
    double t_final = 500.0;
    double cg_tolerance = 1e-10;
    std::size_t cg_max_iterations = 1000;
    std::size_t snapshot_every = 0; ///< 0 disables intermediate snapshots
    std::size_t metrics_every = 100;

    /// Number of steps needed to reach t_final with step dt.
    std::size_t step_count() const {
        return static_cast<std::size_t>(std::llround(t_final / dt));
    }

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

inline void validate(const SolverConfig& c) {
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw InvalidParameter("dt must be positive");
    if (!(c.t_final >= 0.0) || !std::isfinite(c.t_final)) throw InvalidParameter("t_final must be nonnegative");
    if (!(c.cg_tolerance > 0.0 && c.cg_tolerance < 1.0)) throw InvalidParameter("cg_tolerance must lie in (0, 1)");
    if (c.cg_max_iterations == 0) throw InvalidParameter("cg_max_iterations must be positive");
    if (c.metrics_every == 0) throw InvalidParameter("metrics_every must be at least 1");
}

/// Tolerances of the bound monitor: T and Phi in [-lower, 1 + upper], N >= -lower.
inline constexpr double kBoundLowerSlack = 1e-9;
inline constexpr double kBoundUpperSlack = 1e-6;

/// Running extremes of the fields and a count of monitor violations.
struct BoundReport {
    double min_t = std::numeric_limits<double>::infinity();
    double max_t = -std::numeric_limits<double>::infinity();
    double min_n = std::numeric_limits<double>::infinity();
    double max_n = -std::numeric_limits<double>::infinity();
    double min_phi = std::numeric_limits<double>::infinity();
    double max_phi = -std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    std::size_t first_violation_step = 0;

    double min_any() const { return std::min({min_t, min_n, min_phi}); }

    /// Folds a state in; returns true if it lies inside the monitor bounds.
    bool observe(const SimulationState& s, std::size_t step) {
        const auto [t_lo, t_hi] = std::minmax_element(s.t_field.begin(), s.t_field.end());
        const auto [n_lo, n_hi] = std::minmax_element(s.n_field.begin(), s.n_field.end());
        const auto [p_lo, p_hi] = std::minmax_element(s.phi_field.begin(), s.phi_field.end());
        if (t_lo == s.t_field.end()) return true;
        min_t = std::min(min_t, *t_lo);
        max_t = std::max(max_t, *t_hi);
        min_n = std::min(min_n, *n_lo);
        max_n = std::max(max_n, *n_hi);
        min_phi = std::min(min_phi, *p_lo);
        max_phi = std::max(max_phi, *p_hi);
        const bool ok = *t_lo >= -kBoundLowerSlack && *p_lo >= -kBoundLowerSlack && *n_lo >= -kBoundLowerSlack &&
                        *t_hi <= 1.0 + kBoundUpperSlack && *p_hi <= 1.0 + kBoundUpperSlack &&
                        std::isfinite(*t_hi) && std::isfinite(*n_hi) && std::isfinite(*p_hi);
        if (!ok) {
            if (violations == 0) first_violation_step = step;
            ++violations;
        }
        return ok;
    }
};

struct StepReport {
    std::size_t cg_iterations = 0;
    double cg_residual = 0.0;
};

/// Advances (T, N, Phi) by one uncoupled linear step:
///   1. freeze P and the diffusivity kappa1 P + 1 at the old state,
///   2. implicit tumor solve with implicit sinks and explicit nonnegative logistic gain,
///   3. pointwise vasculature update using the new T,
///   4. pointwise necrosis update collecting exactly the transfers lost by T and Phi.
/// Owns the stiffness pattern and work vectors for one mesh.
class ImexStepper {
public:
    ImexStepper(const StructuredTriMesh& mesh, DimensionlessParameters params)
        : mesh_(&mesh), params_(params), assembler_(mesh) {
        validate(params_);
        const std::size_t n = mesh.vertex_count();
        fraction_.resize(n);
        hypoxia_.resize(n);
        occupancy_.resize(n);
        diffusivity_.resize(n);
        shift_.resize(n);
        rhs_.resize(n);
        next_t_.resize(n);
    }

    const DimensionlessParameters& params() const noexcept { return params_; }
    const StructuredTriMesh& mesh() const noexcept { return *mesh_; }

    /// Frozen vasculature fraction of the last step's input state.
    std::span<const double> last_fraction() const noexcept { return fraction_; }

    StepReport step(SimulationState& s, double dt, double cg_tol = 1e-10, std::size_t cg_max_iter = 1000,
                    std::size_t step_index = 0) {
        check_sizes(s, *mesh_);
        if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
        const auto& p = params_;
        const auto w = mesh_->lumped_weights();
        const std::size_t n = w.size();

        for (std::size_t v = 0; v < n; ++v) {
            const double T = s.t_field[v], N = s.n_field[v], Phi = s.phi_field[v];
            const double P = vascular_fraction(Phi, T);
            fraction_[v] = P;
            hypoxia_[v] = hypoxia_from_fraction(P);
            occupancy_[v] = 1.0 - (T + N + Phi);
            diffusivity_[v] = p.kappa1 * P + 1.0;
            const double sink = p.alpha * hypoxia_[v] + p.beta1 * N + P * detail::negative_part(occupancy_[v]);
            const double gain = T * P * detail::positive_part(occupancy_[v]);
            shift_[v] = w[v] * (1.0 / dt + sink);
            rhs_[v] = w[v] * (T / dt + gain);
        }

        const auto& stiffness = assembler_.assemble(diffusivity_);
        system_ = stiffness;
        system_.add_to_diagonal(shift_);

        std::copy(s.t_field.begin(), s.t_field.end(), next_t_.begin());
        const auto cg = conjugate_gradient<double>(system_, rhs_, next_t_, cg_tol, cg_max_iter);
        if (!cg.converged) throw SolverFailure(step_index, cg.relative_residual, cg.iterations);

        for (std::size_t v = 0; v < n; ++v) {
            const double T1 = next_t_[v];
            const double N0 = s.n_field[v], Phi0 = s.phi_field[v];
            const double growth = p.gamma * T1 * hypoxia_[v];
            const double Phi1 = (Phi0 + dt * growth * Phi0 * detail::positive_part(occupancy_[v])) /
                                (1.0 + dt * (p.delta * T1 + p.beta2 * N0 +
                                             growth * detail::negative_part(occupancy_[v])));
            const double N1 = N0 + dt * (p.alpha * hypoxia_[v] * T1 + p.beta1 * N0 * T1 + p.delta * T1 * Phi1 +
                                         p.beta2 * N0 * Phi1);
            s.t_field[v] = T1;
            s.phi_field[v] = Phi1;
            s.n_field[v] = N1;
        }
        s.time += dt;
        return {cg.iterations, cg.relative_residual};
    }

private:
    const StructuredTriMesh* mesh_;
    DimensionlessParameters params_;
    StiffnessAssembler assembler_;
    SparseSymmetricMatrix<double> system_;
    std::vector<double> fraction_, hypoxia_, occupancy_, diffusivity_, shift_, rhs_, next_t_;
};

/// One step on a fresh stepper. Prefer ImexStepper for repeated stepping.
inline SimulationState step(SimulationState state, const DimensionlessParameters& params,
                            const StructuredTriMesh& mesh, double dt, double cg_tol = 1e-10,
                            std::size_t cg_max_iter = 1000) {
    ImexStepper stepper(mesh, params);
    stepper.step(state, dt, cg_tol, cg_max_iter);
    return state;
}

struct Snapshot {
    std::size_t step = 0;
    SimulationState state;
};

struct SimulationResult {
    std::vector<MetricsSample> metrics;
    std::vector<Snapshot> snapshots; ///< empty when a snapshot callback consumed them
    SimulationState final_state;
    BoundReport bounds;
    std::size_t steps = 0;
    std::size_t total_cg_iterations = 0;
};

/// Optional hooks into a simulation. `on_step` sees the state before and after each step.
struct SimulationObserver {
    std::function<void(std::size_t step, const SimulationState& before, const SimulationState& after,
                       std::span<const double> frozen_fraction)>
        on_step;
    std::function<void(std::size_t step, const SimulationState&)> on_snapshot;
    std::function<void(std::size_t step, const BoundReport&)> on_bound_violation;
};

/// Steps `initial` to config.t_final, sampling metrics at t=0, every metrics_every steps
/// and at the end; snapshots at t=0, every snapshot_every steps and at the end.
inline SimulationResult simulate(const StructuredTriMesh& mesh, SimulationState initial,
                                 const DimensionlessParameters& params, const SolverConfig& config,
                                 double theta = kDefaultThreshold, const SimulationObserver& observer = {}) {
    validate(config);
    check_sizes(initial, mesh);
    ImexStepper stepper(mesh, params);

    SimulationResult result;
    const std::size_t steps = config.step_count();
    SimulationState state = std::move(initial);
    state.time = 0.0;

    auto emit_snapshot = [&](std::size_t k) {
        if (observer.on_snapshot)
            observer.on_snapshot(k, state);
        else
            result.snapshots.push_back({k, state});
    };

    result.bounds.observe(state, 0);
    result.metrics.push_back(compute_metrics(state, mesh, theta));
    emit_snapshot(0);

    SimulationState before;
    for (std::size_t k = 1; k <= steps; ++k) {
        if (observer.on_step) before = state;
        const auto report = stepper.step(state, config.dt, config.cg_tolerance, config.cg_max_iterations, k);
        state.time = static_cast<double>(k) * config.dt;
        result.total_cg_iterations += report.cg_iterations;
        if (observer.on_step) observer.on_step(k, before, state, stepper.last_fraction());
        if (!result.bounds.observe(state, k) && observer.on_bound_violation)
            observer.on_bound_violation(k, result.bounds);
        if (k % config.metrics_every == 0 || k == steps) result.metrics.push_back(compute_metrics(state, mesh, theta));
        if ((config.snapshot_every > 0 && k % config.snapshot_every == 0) || k == steps) emit_snapshot(k);
    }
    result.steps = steps;
    result.final_state = std::move(state);
    return result;
}

/// Spatially homogeneous reduction: the same update as ImexStepper without diffusion.
/// Returns the trajectory including the initial point, one entry per step.
inline std::vector<FieldTriple> run_homogeneous(FieldTriple initial, const DimensionlessParameters& p, double dt,
                                                double t_final) {
    validate(p);
    if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
    if (!(t_final >= 0.0)) throw InvalidParameter("t_final must be nonnegative");
    const auto steps = static_cast<std::size_t>(std::llround(t_final / dt));
    std::vector<FieldTriple> traj;
    traj.reserve(steps + 1);
    traj.push_back(initial);
    FieldTriple s = initial;
    for (std::size_t k = 0; k < steps; ++k) {
        const double T = s.t_density, N = s.n_density, Phi = s.phi_density;
        const double P = vascular_fraction(Phi, T);
        const double hyp = hypoxia_from_fraction(P);
        const double occ = 1.0 - (T + N + Phi);
        const double sink = p.alpha * hyp + p.beta1 * N + P * detail::negative_part(occ);
        const double T1 = (T + dt * T * P * detail::positive_part(occ)) / (1.0 + dt * sink);
        const double growth = p.gamma * T1 * hyp;
        const double Phi1 = (Phi + dt * growth * Phi * detail::positive_part(occ)) /
                            (1.0 + dt * (p.delta * T1 + p.beta2 * N + growth * detail::negative_part(occ)));
        const double N1 = N + dt * (p.alpha * hyp * T1 + p.beta1 * N * T1 + p.delta * T1 * Phi1 + p.beta2 * N * Phi1);
        s = {T1, N1, Phi1};
        if (!std::isfinite(T1) || !std::isfinite(N1) || !std::isfinite(Phi1))
            throw SolverFailure(k + 1, std::numeric_limits<double>::infinity(), 0);
        traj.push_back(s);
    }
    return traj;
}

} // namespace gbm
