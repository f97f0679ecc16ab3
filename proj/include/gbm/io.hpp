#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gbm/errors.hpp"
#include "gbm/mesh.hpp"
#include "gbm/metrics.hpp"
#include "gbm/state.hpp"

namespace gbm {

inline constexpr std::string_view kMetricsHeader = "t,rq,sq,area,r_max,int_T,int_TN,int_phi";
inline constexpr std::string_view kSnapshotHeader = "x,y,T,N,Phi";

/// Shortest decimal that parses back to the same double ("nan" for NaN).
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
    if (text == "nan") return std::nan("");
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw InvalidParameter("not a number: '" + std::string(text) + "'");
    return v;
}

namespace detail {
inline std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}
} // namespace detail

/// Metrics series as CSV. Rows are re-validated: rq must lie in [0,1] and area must be nonnegative.
inline std::string metrics_csv(std::span<const MetricsSample> series) {
    if (series.empty()) throw InvalidParameter("metrics series is empty");
    std::string out(kMetricsHeader);
    out += '\n';
    for (const auto& m : series) {
        if (!(m.rq >= 0.0 && m.rq <= 1.0)) throw InvalidParameter("metrics row with rq outside [0,1] at t=" + format_double(m.time));
        if (!(m.area >= 0.0)) throw InvalidParameter("metrics row with negative area at t=" + format_double(m.time));
        for (double v : {m.time, m.rq, m.sq, m.area, m.r_max, m.tumor_density, m.total_tn_density}) {
            out += format_double(v);
            out += ',';
        }
        out += format_double(m.phi_density);
        out += '\n';
    }
    return out;
}

inline void write_metrics_csv(std::span<const MetricsSample> series, const std::filesystem::path& path) {
    const auto text = metrics_csv(series);
    auto out = detail::open_for_write(path);
    out << text;
    detail::finish(out, path);
}

inline void write_snapshot(const SimulationState& s, const StructuredTriMesh& mesh, const std::filesystem::path& path) {
    check_sizes(s, mesh);
    auto out = detail::open_for_write(path);
    out << kSnapshotHeader << '\n';
    const auto verts = mesh.vertices();
    for (std::size_t v = 0; v < verts.size(); ++v) {
        out << format_double(verts[v].x) << ',' << format_double(verts[v].y) << ',' << format_double(s.t_field[v])
            << ',' << format_double(s.n_field[v]) << ',' << format_double(s.phi_field[v]) << '\n';
    }
    detail::finish(out, path);
}

/// Legacy VTK (ASCII) unstructured grid with point arrays T, N and Phi.
inline void write_snapshot_vtk(const SimulationState& s, const StructuredTriMesh& mesh,
                               const std::filesystem::path& path) {
    check_sizes(s, mesh);
    auto out = detail::open_for_write(path);
    const auto verts = mesh.vertices();
    const auto tris = mesh.triangles();
    out << "# vtk DataFile Version 3.0\n"
        << "tumor fields t=" << format_double(s.time) << "\n"
        << "ASCII\nDATASET UNSTRUCTURED_GRID\n"
        << "POINTS " << verts.size() << " double\n";
    for (const auto& p : verts) out << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
    out << "CELLS " << tris.size() << ' ' << tris.size() * 4 << '\n';
    for (const auto& t : tris) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "CELL_TYPES " << tris.size() << '\n';
    for (std::size_t i = 0; i < tris.size(); ++i) out << "5\n";
    out << "POINT_DATA " << verts.size() << '\n';
    auto array = [&](const char* name, const std::vector<double>& field) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (double v : field) out << format_double(v) << '\n';
    };
    array("T", s.t_field);
    array("N", s.n_field);
    array("Phi", s.phi_field);
    detail::finish(out, path);
}

/// Reads a snapshot CSV back into a state (coordinates are checked against the mesh).
inline SimulationState read_snapshot(const StructuredTriMesh& mesh, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line != kSnapshotHeader) throw IoError("snapshot header mismatch in '" + path.string() + "'");
    SimulationState s(mesh.vertex_count());
    std::size_t v = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (v >= mesh.vertex_count()) throw IoError("snapshot has more rows than mesh vertices");
        std::vector<double> cols;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            cols.push_back(parse_double(std::string_view(line).substr(start, comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (cols.size() != 5) throw IoError("snapshot row " + std::to_string(v + 2) + " does not have 5 columns");
        s.t_field[v] = cols[2];
        s.n_field[v] = cols[3];
        s.phi_field[v] = cols[4];
        ++v;
    }
    if (v != mesh.vertex_count()) throw IoError("snapshot row count does not match mesh");
    return s;
}

} // namespace gbm
