#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbm/config.hpp"
#include "gbm/io.hpp"
#include "gbm/run.hpp"

namespace gbm {

namespace cli_detail {

inline RunConfig load_config(const std::string& path) {
    if (path.empty()) return parse_config("");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str());
    } catch (const ConfigError& e) {
        throw ConfigError(e.line(), path + ": " + e.what());
    }
}

inline std::string snapshot_name(std::size_t step) {
    std::string digits = std::to_string(step);
    if (digits.size() < 8) digits.insert(0, 8 - digits.size(), '0');
    return "step_" + digits;
}

/// Runs one scenario into `dir`, streaming snapshots to disk.
inline SimulationResult run_into(const RunConfig& rc, const std::filesystem::path& dir, std::ostream& err) {
    std::filesystem::create_directories(dir);
    const auto mesh = build_mesh(rc.scenario.mesh);
    SimulationObserver observer;
    if (rc.write_snapshots) {
        observer.on_snapshot = [&](std::size_t step, const SimulationState& s) {
            const auto base = dir / "snapshots" / snapshot_name(step);
            write_snapshot(s, mesh, std::filesystem::path(base).concat(".csv"));
            if (rc.write_vtk) write_snapshot_vtk(s, mesh, std::filesystem::path(base).concat(".vtk"));
        };
    } else {
        observer.on_snapshot = [](std::size_t, const SimulationState&) {};
    }
    observer.on_bound_violation = [&](std::size_t step, const BoundReport& b) {
        if (b.violations <= 10)
            err << "warning: bound monitor violation at step " << step << " (min T " << b.min_t << ", max T "
                << b.max_t << ", min N " << b.min_n << ", min Phi " << b.min_phi << ", max Phi " << b.max_phi << ")\n";
    };
    auto result = simulate(mesh, initial_state(rc.scenario, mesh), rc.scenario.params, rc.scenario.solver,
                           rc.scenario.threshold, observer);
    write_metrics_csv(result.metrics, dir / "metrics.csv");
    if (result.bounds.violations > 0)
        err << "warning: " << result.bounds.violations << " steps violated the bound monitor (first at step "
            << result.bounds.first_violation_step << ")\n";
    return result;
}

inline std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        values.push_back(parse_double(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

inline void print_presets(std::ostream& out) {
    const auto p = kDefaultRates;
    out << "# fixed values, ring-width study\n"
        << "gamma=" << format_double(p.gamma) << "\ndelta=" << format_double(p.delta)
        << "\nbeta2=" << format_double(p.beta2) << "\n"
        << "# variable parameters: default [min, max]\n";
    for (const auto& r : kParameterRanges)
        out << r.name << "=" << format_double(r.fixed) << " [" << format_double(r.min) << ", "
            << format_double(r.max) << "]\n";
    out << "# numerics\n"
        << "domain=(-9,9)x(-9,9)\nn_sub=45\ndt=0.001\nt_final=500\nthreshold=0.001\n";
}

} // namespace cli_detail

/// Entry point of the command-line tool. Returns 0 on success, 2 on usage errors and 1 on
/// runtime failures.
inline int cli_main(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Tumor / necrosis / vasculature reaction-diffusion simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, param_name, values_text;
    unsigned threads = 0;

    auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
    run_cmd->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out_dir, "output directory");

    auto* sweep_cmd = app.add_subcommand("sweep", "one-parameter sweep, one subdirectory per value");
    sweep_cmd->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--param", param_name, "kappa1, alpha, beta1, beta2, gamma or delta")->required();
    sweep_cmd->add_option("--values", values_text, "comma-separated values (default: min,fixed,max of the range)");
    sweep_cmd->add_option("--out", out_dir, "output directory");
    sweep_cmd->add_option("--threads", threads, "parallel runs (0 = hardware concurrency)");

    auto* ode_cmd = app.add_subcommand("ode", "spatially homogeneous mode");
    ode_cmd->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
    ode_cmd->add_option("--out", out_dir, "output directory");

    app.add_subcommand("presets", "print the default parameter tables");

    std::vector<std::string> argv;
    for (auto it = args.rbegin(); it != args.rend(); ++it) argv.push_back(*it);
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (app.got_subcommand("presets")) {
            cli_detail::print_presets(out);
            return 0;
        }

        auto rc = cli_detail::load_config(config_path);
        const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(rc.output_dir) : std::filesystem::path(out_dir);

        if (app.got_subcommand("run")) {
            const auto result = cli_detail::run_into(rc, dir, err);
            out << "steps=" << result.steps << " samples=" << result.metrics.size()
                << " violations=" << result.bounds.violations << " metrics=" << (dir / "metrics.csv").string() << "\n";
            return 0;
        }

        if (app.got_subcommand("sweep")) {
            bool known = false;
            for (auto n : kParameterNames) known = known || n == param_name;
            if (!known) {
                err << "error: unknown parameter '" << param_name << "'\n";
                return 2;
            }
            std::vector<double> values;
            try {
                values = values_text.empty() ? default_sweep_values(param_name) : cli_detail::parse_values(values_text);
            } catch (const InvalidParameter& e) {
                err << "error: --values: " << e.what() << "\n";
                return 2;
            }
            // Runs are independent; each writes only its own subdirectory.
            std::vector<std::exception_ptr> failures(values.size());
            std::atomic<std::size_t> next{0};
            std::mutex err_mutex;
            auto worker = [&] {
                for (std::size_t i = next++; i < values.size(); i = next++) {
                    try {
                        RunConfig local = rc;
                        parameter_ref(local.scenario.params, param_name) = values[i];
                        validate(local.scenario.params);
                        std::ostringstream local_err;
                        cli_detail::run_into(local, dir / (param_name + "=" + format_double(values[i])), local_err);
                        std::lock_guard lock(err_mutex);
                        err << local_err.str();
                    } catch (...) {
                        failures[i] = std::current_exception();
                    }
                }
            };
            if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
            threads = static_cast<unsigned>(std::min<std::size_t>(threads, values.size()));
            {
                std::vector<std::jthread> pool;
                for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
                worker();
            }
            for (auto& f : failures)
                if (f) std::rethrow_exception(f);
            for (double v : values)
                out << param_name << "=" << format_double(v) << " -> "
                    << (dir / (param_name + "=" + format_double(v)) / "metrics.csv").string() << "\n";
            return 0;
        }

        if (app.got_subcommand("ode")) {
            const auto& sc = rc.scenario;
            const auto traj = run_homogeneous(rc.homogeneous_initial, sc.params, sc.solver.dt, sc.solver.t_final);
            std::string text = "t,T,N,Phi\n";
            for (std::size_t k = 0; k < traj.size(); ++k) {
                if (k % sc.solver.metrics_every != 0 && k + 1 != traj.size()) continue;
                text += format_double(static_cast<double>(k) * sc.solver.dt) + "," + format_double(traj[k].t_density) +
                        "," + format_double(traj[k].n_density) + "," + format_double(traj[k].phi_density) + "\n";
            }
            std::filesystem::create_directories(dir);
            std::ofstream f(dir / "trajectory.csv", std::ios::binary | std::ios::trunc);
            if (!(f << text)) throw IoError("cannot write " + (dir / "trajectory.csv").string());
            out << "steps=" << traj.size() - 1 << " trajectory=" << (dir / "trajectory.csv").string() << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace gbm
