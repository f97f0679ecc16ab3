#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <map>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "gbm/errors.hpp"
#include "gbm/scenario.hpp"
#include "gbm/solver.hpp"

namespace gbm {

/// Runs a scenario with an explicit solver configuration.
inline SimulationResult run(const Scenario& scenario, const SolverConfig& config,
                            const SimulationObserver& observer = {}) {
    const auto mesh = build_mesh(scenario.mesh);
    return simulate(mesh, initial_state(scenario, mesh), scenario.params, config, scenario.threshold, observer);
}

inline SimulationResult run(const Scenario& scenario, const SimulationObserver& observer = {}) {
    return run(scenario, scenario.solver, observer);
}

/// One-parameter sweep: the same scenario once per value of `param_name`.
/// Entries are independent and run on up to `threads` workers; results are keyed by value.
inline std::map<double, SimulationResult> sweep(const Scenario& scenario, std::string_view param_name,
                                                std::span<const double> values, unsigned threads = 0) {
    if (values.empty()) throw InvalidParameter("sweep needs at least one value");
    std::vector<Scenario> jobs;
    for (double value : values) {
        Scenario s = scenario;
        parameter_ref(s.params, param_name) = value;
        validate(s.params);
        jobs.push_back(std::move(s));
    }

    std::vector<SimulationResult> results(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                results[i] = run(jobs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::map<double, SimulationResult> out;
    for (std::size_t i = 0; i < jobs.size(); ++i) out.insert_or_assign(values[i], std::move(results[i]));
    return out;
}

} // namespace gbm
